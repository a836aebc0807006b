#include "regsynth/interchange.hpp"

#include <fstream>
#include <sstream>

#include "regsynth/error.hpp"

namespace regsynth {
namespace {

[[noreturn]] void schema_error(const std::string& message, nlohmann::json detail = nlohmann::json::object()) {
  throw Error(ErrorKind::Schema, "schema_error", message, std::move(detail));
}

int positive_int(const nlohmann::json& doc, const char* key) {
  if (!doc.contains(key) || !doc[key].is_number_integer() || doc[key].get<long>() <= 0 ||
      doc[key].get<long>() > 1 << 20) {
    schema_error(std::string("'") + key + "' must be a positive integer", {{"field", key}});
  }
  return doc[key].get<int>();
}

}  // namespace

CentroidFile centroid_file_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) schema_error("centroid file must be a JSON object");
  const int width = positive_int(doc, "width");
  const int height = positive_int(doc, "height");
  if (!doc.contains("points") || !doc["points"].is_array()) {
    schema_error("'points' must be an array", {{"field", "points"}});
  }
  std::vector<Point2> points;
  std::vector<std::optional<int>> attributes;
  const auto& arr = doc["points"];
  for (std::size_t k = 0; k < arr.size(); ++k) {
    const auto& p = arr[k];
    if (!p.is_object() || !p.contains("x") || !p.contains("y") || !p["x"].is_number() ||
        !p["y"].is_number()) {
      schema_error("each point needs numeric 'x' and 'y'", {{"index", k}});
    }
    points.push_back({p["x"].get<double>(), p["y"].get<double>()});
    if (p.contains("attribute") && !p["attribute"].is_null()) {
      if (!p["attribute"].is_number_integer() || p["attribute"].get<long>() < 0) {
        schema_error("'attribute' must be a non-negative integer", {{"index", k}});
      }
      attributes.push_back(p["attribute"].get<int>());
    } else {
      attributes.push_back(std::nullopt);
    }
  }
  // Out-of-bounds points violate the file's invariants, not the domain.
  for (std::size_t k = 0; k < points.size(); ++k) {
    const Point2& p = points[k];
    if (!(p.x >= 0 && p.y >= 0 && p.x < width && p.y < height)) {
      schema_error("point outside the declared bounds", {{"index", k}, {"x", p.x}, {"y", p.y}});
    }
  }
  return {CentroidSet(std::move(points), {width, height}), std::move(attributes)};
}

nlohmann::json to_json(const CentroidSet& centroids, const std::vector<std::optional<int>>& attributes) {
  nlohmann::json points = nlohmann::json::array();
  for (std::size_t k = 0; k < centroids.size(); ++k) {
    nlohmann::json p = {{"x", centroids[k].x}, {"y", centroids[k].y}};
    if (k < attributes.size() && attributes[k]) p["attribute"] = *attributes[k];
    points.push_back(std::move(p));
  }
  return {{"width", centroids.bounds().width}, {"height", centroids.bounds().height}, {"points", points}};
}

nlohmann::json draws_to_json(const std::vector<DrawCommand>& draws, ImageBounds bounds) {
  nlohmann::json points = nlohmann::json::array();
  for (const DrawCommand& d : draws) {
    points.push_back({{"x", d.position.x}, {"y", d.position.y}, {"attribute", d.attribute}});
  }
  return {{"width", bounds.width}, {"height", bounds.height}, {"points", points}};
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorKind::Io, "io_error", "cannot open file for reading", {{"path", path.string()}});
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(ErrorKind::Io, "io_error", "cannot open file for writing", {{"path", path.string()}});
  }
  out << text;
  if (!out) throw Error(ErrorKind::Io, "io_error", "write failed", {{"path", path.string()}});
}

nlohmann::json read_json_file(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    schema_error("file is not valid JSON", {{"path", path.string()}, {"reason", e.what()}});
  }
}

CentroidFile read_centroid_file(const std::filesystem::path& path) {
  try {
    return centroid_file_from_json(read_json_file(path));
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::Schema) throw;
    nlohmann::json detail = e.detail();
    detail["path"] = path.string();
    throw Error(e.kind(), e.code(), e.what(), detail);
  }
}

RegularityProgram read_program_file(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  if (path.extension() == ".json") return program_from_json(nlohmann::json::parse(text, nullptr, false));
  return parse_program(text);
}

nlohmann::json to_json(const SynthConfig& c) {
  return {{"lambda", c.lambda},
          {"mu", c.mu},
          {"spacing_min", c.spacing_min},
          {"spacing_max", c.spacing_max},
          {"max_groups", c.max_groups},
          {"coeff_range", c.coeff_range},
          {"modulus_min", c.modulus_min},
          {"modulus_max", c.modulus_max},
          {"patch_window", c.patch_window},
          {"attribute_max_points", c.attribute_max_points},
          {"attributes", c.attributes}};
}

void apply_config_json(const nlohmann::json& doc, SynthConfig& c) {
  const nlohmann::json& cfg = doc.is_object() && doc.contains("config") ? doc["config"] : doc;
  if (!cfg.is_object()) schema_error("config must be a JSON object");
  try {
    if (cfg.contains("lambda")) c.lambda = cfg["lambda"].get<double>();
    if (cfg.contains("mu")) c.mu = cfg["mu"].get<double>();
    if (cfg.contains("spacing_min")) c.spacing_min = cfg["spacing_min"].get<int>();
    if (cfg.contains("spacing_max")) c.spacing_max = cfg["spacing_max"].get<int>();
    if (cfg.contains("max_groups")) c.max_groups = cfg["max_groups"].get<int>();
    if (cfg.contains("coeff_range")) c.coeff_range = cfg["coeff_range"].get<int>();
    if (cfg.contains("modulus_min")) c.modulus_min = cfg["modulus_min"].get<int>();
    if (cfg.contains("modulus_max")) c.modulus_max = cfg["modulus_max"].get<int>();
    if (cfg.contains("patch_window")) c.patch_window = cfg["patch_window"].get<int>();
    if (cfg.contains("attribute_max_points")) {
      c.attribute_max_points = cfg["attribute_max_points"].get<std::size_t>();
    }
    if (cfg.contains("attributes")) c.attributes = cfg["attributes"].get<bool>();
  } catch (const nlohmann::json::exception& e) {
    schema_error("config field has the wrong type", {{"reason", e.what()}});
  }
}

}  // namespace regsynth
