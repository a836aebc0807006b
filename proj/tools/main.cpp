#include <iostream>
#include <string>
#include <vector>

#include "regsynth/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return regsynth::run_cli(args, std::cout, std::cerr);
}
