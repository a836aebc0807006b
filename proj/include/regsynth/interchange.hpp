#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "regsynth/dsl.hpp"
#include "regsynth/geometry.hpp"
#include "regsynth/synth.hpp"

namespace regsynth {

/// Centroid file contents: {"width", "height", "points": [{"x", "y", "attribute"?}]}.
struct CentroidFile {
  CentroidSet centroids;
  std::vector<std::optional<int>> attributes;  // one per point
};

CentroidFile centroid_file_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const CentroidSet& centroids,
                       const std::vector<std::optional<int>>& attributes = {});
nlohmann::json draws_to_json(const std::vector<DrawCommand>& draws, ImageBounds bounds);

CentroidFile read_centroid_file(const std::filesystem::path& path);

nlohmann::json read_json_file(const std::filesystem::path& path);
std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

RegularityProgram read_program_file(const std::filesystem::path& path);

nlohmann::json to_json(const SynthConfig& config);
/// Accepts a bare config object or a manifest with a "config" member.
/// Missing keys keep the values already in `config`.
void apply_config_json(const nlohmann::json& doc, SynthConfig& config);

/// SVG overlay: program hull, lattice rows, draws colored by attribute,
/// and optional detected centroids.
std::string render_svg(const RegularityProgram& program, ImageBounds bounds,
                       const CentroidSet* detected = nullptr);

}  // namespace regsynth
