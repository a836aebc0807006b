#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <type_traits>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "regsynth/geometry.hpp"

namespace regsynth {

/// coef_i * i + coef_j * j + constant
struct LinearExpr {
  int coef_i = 0;
  int coef_j = 0;
  int constant = 0;

  long evaluate(const LatticeIndex& p) const {
    return static_cast<long>(coef_i) * p.i + static_cast<long>(coef_j) * p.j + constant;
  }
  friend auto operator<=>(const LinearExpr&, const LinearExpr&) = default;
};

// Python integer semantics: floor division and a remainder with the sign of
// the divisor.
inline long floor_div(long a, long b) {
  const long q = a / b;
  return (a % b != 0 && ((a < 0) != (b < 0))) ? q - 1 : q;
}
inline long py_mod(long a, long b) { return a - b * floor_div(a, b); }

namespace attr {

struct Constant {
  friend auto operator<=>(const Constant&, const Constant&) = default;
};
/// expr // divisor
struct Quotient {
  LinearExpr expr;
  int divisor = 2;
  friend auto operator<=>(const Quotient&, const Quotient&) = default;
};
/// 1 If (expr == 0) else 0
struct IsZero {
  LinearExpr expr;
  friend auto operator<=>(const IsZero&, const IsZero&) = default;
};
/// 1 If (first == 0 and second == 0) else 0
struct IsZeroBoth {
  LinearExpr first;
  LinearExpr second;
  friend auto operator<=>(const IsZeroBoth&, const IsZeroBoth&) = default;
};
/// 1 If (expr % modulus == 0) else 0
struct Modulo {
  LinearExpr expr;
  int modulus = 2;
  friend auto operator<=>(const Modulo&, const Modulo&) = default;
};
/// 1 If (first % first_modulus == 0 and second % second_modulus == 0) else 0
struct ModuloBoth {
  LinearExpr first;
  int first_modulus = 2;
  LinearExpr second;
  int second_modulus = 2;
  friend auto operator<=>(const ModuloBoth&, const ModuloBoth&) = default;
};

}  // namespace attr

/// Attribute expression: maps loop indices to a group label.
class AttributeExpr {
 public:
  using Variant = std::variant<attr::Constant, attr::Quotient, attr::IsZero, attr::IsZeroBoth,
                               attr::Modulo, attr::ModuloBoth>;

  AttributeExpr() = default;
  template <class T>
    requires std::is_constructible_v<Variant, T>
  AttributeExpr(T v) : value_(std::move(v)) {}  // NOLINT(google-explicit-constructor)

  const Variant& value() const { return value_; }
  bool is_constant() const { return std::holds_alternative<attr::Constant>(value_); }

  /// Group label for one index pair. Quotient labels can be negative; the
  /// interpreter rejects those.
  long evaluate(const LatticeIndex& p) const;

  /// Divisors and moduli must be at least 2.
  bool valid() const;

  friend bool operator==(const AttributeExpr&, const AttributeExpr&) = default;

 private:
  Variant value_ = attr::Constant{};
};

/// Half-open loop range [lo, hi).
struct LoopRange {
  int lo = 0;
  int hi = 0;
  friend bool operator==(const LoopRange&, const LoopRange&) = default;
};

/// Two nested loops, an optional chain of `If (expr >= 0)` guards, and a
/// Draw statement.
struct RegularityProgram {
  LoopRange outer;                     // i
  LoopRange inner;                     // j
  std::vector<LinearExpr> conditions;  // each means expr >= 0
  LinearExpr x_expr;
  LinearExpr y_expr;                   // coef_i must be zero
  AttributeExpr attribute;

  /// Throws Error("invalid_program") naming the first broken invariant.
  void validate() const;

  bool admits(const LatticeIndex& p) const;

  friend bool operator==(const RegularityProgram&, const RegularityProgram&) = default;
};

struct DrawCommand {
  Point2 position;
  int attribute = 0;
  LatticeIndex index;

  friend bool operator==(const DrawCommand&, const DrawCommand&) = default;
};

/// Runs the program. Draws are emitted in (i, j) order when every
/// condition holds and the position lies inside the bounds.
std::vector<DrawCommand> execute(const RegularityProgram& program, ImageBounds bounds);

/// Index pairs admitted by the loops and conditions, ignoring image bounds.
std::vector<LatticeIndex> admitted_indices(const RegularityProgram& program);

/// Parses DSL text. Syntax errors carry line/column in the error detail;
/// well-formed text outside the grammar raises a Grammar error.
RegularityProgram parse_program(std::string_view text);

/// Canonical DSL text; parse_program(print_program(p)) == p.
std::string print_program(const RegularityProgram& program);

std::string print_expr(const LinearExpr& expr);
std::string print_attribute(const AttributeExpr& attribute);

nlohmann::json to_json(const RegularityProgram& program);
RegularityProgram program_from_json(const nlohmann::json& doc);

}  // namespace regsynth
