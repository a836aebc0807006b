#include <cstdlib>
#include <sstream>

#include "regsynth/dsl.hpp"

namespace regsynth {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void append_term(std::string& out, int value, const char* suffix) {
  out += value < 0 ? " - " : " + ";
  out += std::to_string(std::abs(static_cast<long>(value)));
  out += suffix;
}

std::string grouped(const LinearExpr& e) { return "(" + print_expr(e) + ")"; }

}  // namespace

std::string print_expr(const LinearExpr& e) {
  std::string out = std::to_string(e.coef_i) + " * i";
  append_term(out, e.coef_j, " * j");
  append_term(out, e.constant, "");
  return out;
}

std::string print_attribute(const AttributeExpr& attribute) {
  return std::visit(
      Overloaded{
          [](const attr::Constant&) -> std::string { return "0"; },
          [](const attr::Quotient& q) {
            return grouped(q.expr) + " // " + std::to_string(q.divisor);
          },
          [](const attr::IsZero& z) { return "1 If (" + print_expr(z.expr) + " == 0) else 0"; },
          [](const attr::IsZeroBoth& z) {
            return "1 If (" + print_expr(z.first) + " == 0 and " + print_expr(z.second) +
                   " == 0) else 0";
          },
          [](const attr::Modulo& m) {
            return "1 If (" + grouped(m.expr) + " % " + std::to_string(m.modulus) +
                   " == 0) else 0";
          },
          [](const attr::ModuloBoth& m) {
            return "1 If (" + grouped(m.first) + " % " + std::to_string(m.first_modulus) +
                   " == 0 and " + grouped(m.second) + " % " + std::to_string(m.second_modulus) +
                   " == 0) else 0";
          },
      },
      attribute.value());
}

std::string print_program(const RegularityProgram& p) {
  std::ostringstream out;
  const auto indent = [&](std::size_t depth) { out << std::string(depth * 4, ' '); };

  out << "For (i in range(" << p.outer.lo << ", " << p.outer.hi << ")) {\n";
  indent(1);
  out << "For (j in range(" << p.inner.lo << ", " << p.inner.hi << ")) {\n";
  std::size_t depth = 2;
  for (const LinearExpr& c : p.conditions) {
    indent(depth++);
    out << "If (" << print_expr(c) << " >= 0) {\n";
  }
  indent(depth);
  out << "Draw(x=" << print_expr(p.x_expr) << ", y=" << print_expr(p.y_expr)
      << ", attribute=" << print_attribute(p.attribute) << ")\n";
  while (depth-- > 0) {
    indent(depth);
    out << "}\n";
  }
  return out.str();
}

}  // namespace regsynth
