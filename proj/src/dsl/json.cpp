#include "regsynth/dsl.hpp"
#include "regsynth/error.hpp"

namespace regsynth {
namespace {

using nlohmann::json;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

[[noreturn]] void schema_error(const std::string& message) {
  throw Error(ErrorKind::Schema, "schema_error", "program JSON: " + message);
}

json expr_json(const LinearExpr& e) {
  return {{"coef_i", e.coef_i}, {"coef_j", e.coef_j}, {"constant", e.constant}};
}

int get_int(const json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key) || !obj[key].is_number_integer()) {
    schema_error(std::string("missing integer field '") + key + "'");
  }
  return obj[key].get<int>();
}

LinearExpr expr_from(const json& obj, const char* key) {
  if (!obj.contains(key) || !obj[key].is_object()) {
    schema_error(std::string("missing expression '") + key + "'");
  }
  const json& e = obj[key];
  return {get_int(e, "coef_i"), get_int(e, "coef_j"), get_int(e, "constant")};
}

LoopRange range_from(const json& obj, const char* key) {
  if (!obj.contains(key) || !obj[key].is_array() || obj[key].size() != 2 ||
      !obj[key][0].is_number_integer() || !obj[key][1].is_number_integer()) {
    schema_error(std::string("'") + key + "' must be a [lo, hi] integer pair");
  }
  return {obj[key][0].get<int>(), obj[key][1].get<int>()};
}

json attribute_json(const AttributeExpr& a) {
  return std::visit(
      Overloaded{
          [](const attr::Constant&) { return json{{"kind", "constant"}}; },
          [](const attr::Quotient& q) {
            return json{{"kind", "quotient"}, {"expr", expr_json(q.expr)}, {"divisor", q.divisor}};
          },
          [](const attr::IsZero& z) { return json{{"kind", "is_zero"}, {"expr", expr_json(z.expr)}}; },
          [](const attr::IsZeroBoth& z) {
            return json{{"kind", "is_zero_both"},
                        {"first", expr_json(z.first)},
                        {"second", expr_json(z.second)}};
          },
          [](const attr::Modulo& m) {
            return json{{"kind", "modulo"}, {"expr", expr_json(m.expr)}, {"modulus", m.modulus}};
          },
          [](const attr::ModuloBoth& m) {
            return json{{"kind", "modulo_both"},
                        {"first", expr_json(m.first)},
                        {"first_modulus", m.first_modulus},
                        {"second", expr_json(m.second)},
                        {"second_modulus", m.second_modulus}};
          },
      },
      a.value());
}

AttributeExpr attribute_from(const json& a) {
  if (!a.is_object() || !a.contains("kind") || !a["kind"].is_string()) {
    schema_error("attribute must carry a string 'kind'");
  }
  const std::string kind = a["kind"];
  if (kind == "constant") return attr::Constant{};
  if (kind == "quotient") return attr::Quotient{expr_from(a, "expr"), get_int(a, "divisor")};
  if (kind == "is_zero") return attr::IsZero{expr_from(a, "expr")};
  if (kind == "is_zero_both") return attr::IsZeroBoth{expr_from(a, "first"), expr_from(a, "second")};
  if (kind == "modulo") return attr::Modulo{expr_from(a, "expr"), get_int(a, "modulus")};
  if (kind == "modulo_both") {
    return attr::ModuloBoth{expr_from(a, "first"), get_int(a, "first_modulus"),
                            expr_from(a, "second"), get_int(a, "second_modulus")};
  }
  schema_error("unknown attribute kind '" + kind + "'");
}

}  // namespace

nlohmann::json to_json(const RegularityProgram& p) {
  json conditions = json::array();
  for (const LinearExpr& c : p.conditions) conditions.push_back(expr_json(c));
  return {{"outer_range", {p.outer.lo, p.outer.hi}},
          {"inner_range", {p.inner.lo, p.inner.hi}},
          {"conditions", conditions},
          {"x", expr_json(p.x_expr)},
          {"y", expr_json(p.y_expr)},
          {"attribute", attribute_json(p.attribute)}};
}

RegularityProgram program_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) schema_error("document must be an object");
  RegularityProgram p;
  p.outer = range_from(doc, "outer_range");
  p.inner = range_from(doc, "inner_range");
  if (doc.contains("conditions")) {
    if (!doc["conditions"].is_array()) schema_error("'conditions' must be an array");
    for (const json& c : doc["conditions"]) {
      p.conditions.push_back({get_int(c, "coef_i"), get_int(c, "coef_j"), get_int(c, "constant")});
    }
  }
  p.x_expr = expr_from(doc, "x");
  p.y_expr = expr_from(doc, "y");
  p.attribute = doc.contains("attribute") ? attribute_from(doc["attribute"]) : AttributeExpr{};
  p.validate();
  return p;
}

}  // namespace regsynth
