#include <algorithm>

#include "regsynth/dsl.hpp"
#include "regsynth/error.hpp"

namespace regsynth {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

[[noreturn]] void invalid(const std::string& message) {
  throw Error(ErrorKind::Grammar, "invalid_program", message);
}

}  // namespace

long AttributeExpr::evaluate(const LatticeIndex& p) const {
  return std::visit(
      Overloaded{
          [](const attr::Constant&) -> long { return 0; },
          [&](const attr::Quotient& q) { return floor_div(q.expr.evaluate(p), q.divisor); },
          [&](const attr::IsZero& z) -> long { return z.expr.evaluate(p) == 0 ? 1 : 0; },
          [&](const attr::IsZeroBoth& z) -> long {
            return (z.first.evaluate(p) == 0 && z.second.evaluate(p) == 0) ? 1 : 0;
          },
          [&](const attr::Modulo& m) -> long {
            return py_mod(m.expr.evaluate(p), m.modulus) == 0 ? 1 : 0;
          },
          [&](const attr::ModuloBoth& m) -> long {
            return (py_mod(m.first.evaluate(p), m.first_modulus) == 0 &&
                    py_mod(m.second.evaluate(p), m.second_modulus) == 0)
                       ? 1
                       : 0;
          },
      },
      value_);
}

bool AttributeExpr::valid() const {
  return std::visit(Overloaded{
                        [](const attr::Quotient& q) { return q.divisor >= 2; },
                        [](const attr::Modulo& m) { return m.modulus >= 2; },
                        [](const attr::ModuloBoth& m) {
                          return m.first_modulus >= 2 && m.second_modulus >= 2;
                        },
                        [](const auto&) { return true; },
                    },
                    value_);
}

void RegularityProgram::validate() const {
  if (outer.lo >= outer.hi || inner.lo >= inner.hi) invalid("empty loop range");
  if (y_expr.coef_i != 0) invalid("y expression must not depend on i");
  if (!attribute.valid()) invalid("attribute divisor and modulus must be at least 2");
}

bool RegularityProgram::admits(const LatticeIndex& p) const {
  return p.i >= outer.lo && p.i < outer.hi && p.j >= inner.lo && p.j < inner.hi &&
         std::all_of(conditions.begin(), conditions.end(),
                     [&](const LinearExpr& c) { return c.evaluate(p) >= 0; });
}

std::vector<LatticeIndex> admitted_indices(const RegularityProgram& program) {
  program.validate();
  std::vector<LatticeIndex> out;
  for (int i = program.outer.lo; i < program.outer.hi; ++i) {
    for (int j = program.inner.lo; j < program.inner.hi; ++j) {
      if (program.admits({i, j})) out.push_back({i, j});
    }
  }
  return out;
}

std::vector<DrawCommand> execute(const RegularityProgram& program, ImageBounds bounds) {
  program.validate();
  std::vector<DrawCommand> draws;
  for (int i = program.outer.lo; i < program.outer.hi; ++i) {
    for (int j = program.inner.lo; j < program.inner.hi; ++j) {
      const LatticeIndex idx{i, j};
      if (!program.admits(idx)) continue;
      const Point2 pos{static_cast<double>(program.x_expr.evaluate(idx)),
                       static_cast<double>(program.y_expr.evaluate(idx))};
      if (!bounds.contains(pos)) continue;
      const long label = program.attribute.evaluate(idx);
      if (label < 0) {
        fail("negative_attribute", "attribute expression produced a negative group label",
             {{"i", i}, {"j", j}, {"value", label}});
      }
      draws.push_back({pos, static_cast<int>(label), idx});
    }
  }
  return draws;
}

}  // namespace regsynth
