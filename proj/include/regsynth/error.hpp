#pragma once

#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

namespace regsynth {

/// Broad category of a failure. The CLI maps these to exit codes; the
/// Python module maps them to exception types.
enum class ErrorKind {
  Domain,   // the inputs are well-formed but the operation cannot succeed
  Io,       // a file could not be read or written
  Schema,   // a structured input file does not follow its schema
  Syntax,   // DSL text could not be tokenized or parsed
  Grammar,  // DSL text parsed but lies outside the regularity grammar
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string code, const std::string& message,
        nlohmann::json detail = nlohmann::json::object())
      : std::runtime_error(message),
        kind_(kind),
        code_(std::move(code)),
        detail_(std::move(detail)) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& code() const noexcept { return code_; }
  const nlohmann::json& detail() const noexcept { return detail_; }

  nlohmann::json to_json() const {
    return {{"code", code_}, {"message", what()}, {"detail", detail_}};
  }

 private:
  ErrorKind kind_;
  std::string code_;
  nlohmann::json detail_;
};

[[noreturn]] inline void fail(std::string code, const std::string& message,
                              nlohmann::json detail = nlohmann::json::object()) {
  throw Error(ErrorKind::Domain, std::move(code), message, std::move(detail));
}

}  // namespace regsynth
