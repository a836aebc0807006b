#include "regsynth/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <iostream>
#include <optional>
#include <regex>

#include "regsynth/detect.hpp"
#include "regsynth/error.hpp"
#include "regsynth/image_io.hpp"
#include "regsynth/interchange.hpp"
#include "regsynth/manip.hpp"
#include "regsynth/synth.hpp"

namespace regsynth {
namespace {

namespace fs = std::filesystem;

void emit(std::ostream& out, const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    out << text;
  } else {
    write_text_file(path, text);
  }
}

ImageBounds parse_bounds(const std::string& text) {
  static const std::regex form(R"(^\s*(\d+)\s*[xX]\s*(\d+)\s*$)");
  std::smatch m;
  if (!std::regex_match(text, m, form)) {
    throw Error(ErrorKind::Schema, "usage_error", "bounds must look like WIDTHxHEIGHT",
                {{"bounds", text}});
  }
  const long w = std::stol(m[1]);
  const long h = std::stol(m[2]);
  if (w <= 0 || h <= 0 || w > 1 << 20 || h > 1 << 20) {
    throw Error(ErrorKind::Schema, "usage_error", "bounds must be positive", {{"bounds", text}});
  }
  return {static_cast<int>(w), static_cast<int>(h)};
}

bool looks_like_json(const std::string& path) { return fs::path(path).extension() == ".json"; }

struct SynthArgs {
  std::string input;
  std::string image;
  std::string output;
  std::string manifest;
  std::string config;
  std::string replay;
  double lambda = 0.0;
  double mu = 0.0;
  int spacing_min = 0;
  int spacing_max = 0;
  int max_groups = 0;
  int patch_window = 0;
  bool no_attributes = false;
};

void run_synth(const SynthArgs& a, CLI::App* cmd, std::ostream& out) {
  SynthConfig config;
  std::string input = a.input;
  std::string image_path = a.image;
  if (!a.replay.empty()) {
    const nlohmann::json manifest = read_json_file(a.replay);
    apply_config_json(manifest, config);
    if (input.empty() && manifest.contains("input") && manifest["input"].is_string()) {
      input = manifest["input"].get<std::string>();
    }
    if (image_path.empty() && manifest.contains("image") && manifest["image"].is_string()) {
      image_path = manifest["image"].get<std::string>();
    }
  }
  if (!a.config.empty()) apply_config_json(read_json_file(a.config), config);
  if (cmd->count("--lambda")) config.lambda = a.lambda;
  if (cmd->count("--mu")) config.mu = a.mu;
  if (cmd->count("--spacing-min")) config.spacing_min = a.spacing_min;
  if (cmd->count("--spacing-max")) config.spacing_max = a.spacing_max;
  if (cmd->count("--max-groups")) config.max_groups = a.max_groups;
  if (cmd->count("--patch-window")) config.patch_window = a.patch_window;
  if (a.no_attributes) config.attributes = false;
  if (input.empty()) {
    throw Error(ErrorKind::Schema, "usage_error", "synth needs an input file or --replay");
  }

  const auto start = std::chrono::steady_clock::now();
  std::optional<RasterImage> image;
  std::optional<CentroidSet> centroids;
  if (looks_like_json(input)) {
    centroids = read_centroid_file(input).centroids;
  } else {
    image = read_image(input);
    centroids = detect_centroids(*image);
  }
  if (!image_path.empty()) image = read_image(image_path);
  const SynthesisResult result = synthesize(*centroids, image ? &*image : nullptr, config);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  const std::string text = print_program(result.program);
  emit(out, a.output, text);
  if (!a.manifest.empty()) {
    const LatticeModel& m = result.lattice.model;
    nlohmann::json manifest = {
        {"config", to_json(config)},
        {"input", input},
        {"image", image_path.empty() ? nlohmann::json(nullptr) : nlohmann::json(image_path)},
        {"program", text},
        {"costs",
         {{"L_lat", result.lattice.cost},
          {"L_lat_data", result.lattice.data_term},
          {"L_attr", result.attribute ? nlohmann::json(result.attribute->cost) : nlohmann::json(nullptr)}}},
        {"lattice",
         {{"b_x", m.bx}, {"b_y", m.by}, {"d_xi", m.dxi}, {"d_xj", m.dxj}, {"d_yj", m.dyj},
          {"points", result.lattice.lattice_points}}},
        {"centroids", centroids->size()},
        {"dropped", result.conditions.dropped.size()},
        {"warnings", result.warnings},
        {"timing", {{"seconds", seconds}}}};
    write_text_file(a.manifest, manifest.dump(2) + "\n");
  }
}

struct Options {
  // detect
  std::string image;
  std::string output;
  int peak_radius = 5;
  double vote_bin = 2.0;
  // exec / render / manipulation
  std::string program;
  std::string bounds;
  std::string mask;
  std::string centroids;
  std::string program_out;
  std::string positions_out;
  int left = 0;
  int right = 0;
  int top = 0;
  int bottom = 0;
  int relax = 0;
  double gain = 2.0;
  double temperature = 0.05;
};

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Regularity program synthesis and program-guided image manipulation", "regsynth"};
  app.require_subcommand(1);
  Options o;
  SynthArgs s;

  auto* detect = app.add_subcommand("detect", "Detect repeated-object centroids in an image");
  detect->add_option("image", o.image, "Input PNG or PPM")->required();
  detect->add_option("-o,--output", o.output, "Centroid JSON (default: stdout)");
  detect->add_option("--peak-radius", o.peak_radius, "Local-maximum radius in px")->check(CLI::PositiveNumber);
  detect->add_option("--vote-bin", o.vote_bin, "Displacement vote bin size in px")->check(CLI::PositiveNumber);

  auto* synth = app.add_subcommand("synth", "Infer a regularity program");
  synth->add_option("input", s.input, "Centroid JSON, or an image to run detection on");
  synth->add_option("--image", s.image, "Image used for the attribute search");
  synth->add_option("-o,--output", s.output, "Program file (default: stdout)");
  synth->add_option("--manifest", s.manifest, "Write a run manifest");
  synth->add_option("--config", s.config, "Config JSON or manifest to take settings from");
  synth->add_option("--replay", s.replay, "Rerun a manifest: its config, input and image");
  synth->add_option("--lambda", s.lambda, "Lattice size penalty");
  synth->add_option("--mu", s.mu, "Attribute group penalty");
  synth->add_option("--spacing-min", s.spacing_min, "Smallest lattice spacing in px");
  synth->add_option("--spacing-max", s.spacing_max, "Largest lattice spacing in px");
  synth->add_option("--max-groups", s.max_groups, "Most attribute groups allowed");
  synth->add_option("--patch-window", s.patch_window, "Patch half-size for attribute distances");
  synth->add_flag("--no-attributes", s.no_attributes, "Skip the attribute search");

  auto* exec = app.add_subcommand("exec", "Execute a program into centroids");
  exec->add_option("program", o.program, "Program (.rpg or .json)")->required();
  exec->add_option("--bounds", o.bounds, "Image size WIDTHxHEIGHT")->required();
  exec->add_option("-o,--output", o.output, "Centroid JSON (default: stdout)");

  auto* inpaint_cmd = app.add_subcommand("inpaint", "Fill masked pixels guided by a program");
  inpaint_cmd->add_option("image", o.image, "Input image")->required();
  inpaint_cmd->add_option("mask", o.mask, "Mask image; nonzero marks a hole")->required();
  inpaint_cmd->add_option("program", o.program, "Program")->required();
  inpaint_cmd->add_option("-o,--output", o.output, "Output image")->required();
  inpaint_cmd->add_option("--temperature", o.temperature, "Layer blending temperature");

  auto* extra = app.add_subcommand("extrapolate", "Extend the image following the program");
  extra->add_option("image", o.image, "Input image")->required();
  extra->add_option("program", o.program, "Program")->required();
  extra->add_option("-o,--output", o.output, "Output image")->required();
  extra->add_option("--left", o.left, "Pixels added on the left")->check(CLI::NonNegativeNumber);
  extra->add_option("--right", o.right, "Pixels added on the right")->check(CLI::NonNegativeNumber);
  extra->add_option("--top", o.top, "Pixels added on top")->check(CLI::NonNegativeNumber);
  extra->add_option("--bottom", o.bottom, "Pixels added at the bottom")->check(CLI::NonNegativeNumber);
  extra->add_option("--relax-condition", o.relax, "Raise every condition constant by K")
      ->check(CLI::NonNegativeNumber);
  extra->add_option("--program-out", o.program_out, "Write the relaxed program");
  extra->add_option("--temperature", o.temperature, "Layer blending temperature");

  auto* edit = app.add_subcommand("edit", "Scale irregularity by a gain");
  edit->add_option("image", o.image, "Input image")->required();
  edit->add_option("program", o.program, "Program")->required();
  edit->add_option("centroids", o.centroids, "Detected centroid JSON")->required();
  edit->add_option("-o,--output", o.output, "Output image")->required();
  edit->add_option("--gain", o.gain, "Displacement gain (2 exaggerates, 0 regularizes)");
  edit->add_option("--positions-out", o.positions_out, "Write post-edit centroid JSON");
  edit->add_option("--temperature", o.temperature, "Layer blending temperature");

  auto* render = app.add_subcommand("render", "Render an SVG overlay");
  render->add_option("centroids", o.centroids, "Centroid JSON (also gives the canvas size)")->required();
  render->add_option("program", o.program, "Program")->required();
  render->add_option("-o,--output", o.output, "SVG file (default: stdout)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << nlohmann::json{{"code", "usage_error"}, {"message", e.what()}, {"detail", {{"cli", e.get_name()}}}}.dump()
        << '\n';
    return 2;
  }

  CompositeConfig composite;
  composite.temperature = o.temperature;
  try {
    if (detect->parsed()) {
      DetectParams params;
      params.peak_radius = o.peak_radius;
      params.vote_bin = o.vote_bin;
      const CentroidSet c = detect_centroids(read_image(o.image), params);
      emit(out, o.output, to_json(c).dump(2) + "\n");
    } else if (synth->parsed()) {
      run_synth(s, synth, out);
    } else if (exec->parsed()) {
      const ImageBounds b = parse_bounds(o.bounds);
      const RegularityProgram p = read_program_file(o.program);
      p.validate();
      emit(out, o.output, draws_to_json(execute(p, b), b).dump(2) + "\n");
    } else if (inpaint_cmd->parsed()) {
      RasterImage img = read_image(o.image);
      apply_hole_mask(img, o.mask);
      write_image(inpaint(img, read_program_file(o.program), composite), o.output);
    } else if (extra->parsed()) {
      Extension ext{o.left, o.right, o.top, o.bottom, o.relax};
      const auto r = extrapolate_program(read_image(o.image), read_program_file(o.program), ext, composite);
      write_image(r.image, o.output);
      if (!o.program_out.empty()) write_text_file(o.program_out, print_program(r.program));
    } else if (edit->parsed()) {
      const RasterImage img = read_image(o.image);
      const CentroidFile cf = read_centroid_file(o.centroids);
      const EditResult r = edit_regularity(img, read_program_file(o.program), cf.centroids, o.gain, composite);
      write_image(r.image, o.output);
      if (!o.positions_out.empty()) {
        nlohmann::json pts = nlohmann::json::array();
        for (const auto& p : r.positions) {
          pts.push_back(p ? nlohmann::json{{"x", p->x}, {"y", p->y}} : nlohmann::json(nullptr));
        }
        write_text_file(o.positions_out,
                        nlohmann::json{{"width", img.width()}, {"height", img.height()}, {"points", pts}}.dump(2) + "\n");
      }
    } else if (render->parsed()) {
      const CentroidFile cf = read_centroid_file(o.centroids);
      const RegularityProgram p = read_program_file(o.program);
      p.validate();
      emit(out, o.output, render_svg(p, cf.centroids.bounds(), &cf.centroids));
    }
  } catch (const Error& e) {
    err << e.to_json().dump() << '\n';
    return e.kind() == ErrorKind::Domain ? 3 : 2;
  } catch (const nlohmann::json::exception& e) {
    err << nlohmann::json{{"code", "schema_error"}, {"message", e.what()}, {"detail", nlohmann::json::object()}}.dump()
        << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << nlohmann::json{{"code", "internal_error"}, {"message", e.what()}, {"detail", nlohmann::json::object()}}.dump()
        << '\n';
    return 1;
  }
  return 0;
}

}  // namespace regsynth
