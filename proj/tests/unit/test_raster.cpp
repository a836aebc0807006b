#include <png.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "printers.hpp"
#include "generators.hpp"
#include "regsynth/error.hpp"
#include "regsynth/image_io.hpp"
#include "regsynth/raster.hpp"

using namespace regsynth;
using namespace regsynth::testing;

namespace {

std::string error_code(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return "";
}

std::filesystem::path temp_path(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "regsynth_test_raster";
  std::filesystem::create_directories(dir);
  return dir / name;
}

std::vector<DrawCommand> draws_of(const RegularityProgram& p, ImageBounds b) { return execute(p, b); }

RasterImage random_image(Rng& rng, int w, int h) {
  RasterImage img(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      img.set(x, y, {static_cast<std::uint8_t>(uniform_int(rng, 0, 255)),
                     static_cast<std::uint8_t>(uniform_int(rng, 0, 255)),
                     static_cast<std::uint8_t>(uniform_int(rng, 0, 255))});
    }
  }
  return img;
}

}  // namespace

TEST_CASE("image construction and holes") {
  RasterImage img(4, 3, {1, 2, 3});
  CHECK(img.width() == 4);
  CHECK(img.height() == 3);
  CHECK(img.at(3, 2) == Rgb{1, 2, 3});
  CHECK(img.mask().size() == 12);
  CHECK_FALSE(img.has_holes());
  img.erase(1, 1);
  CHECK(img.hole_count() == 1);
  CHECK(img.at(1, 1) == Rgb{0, 0, 0});
  CHECK_FALSE(img.valid(1, 1));
  const RasterImage blank(2, 2, {0, 0, 0}, false);
  CHECK(blank.hole_count() == 4);
}

TEST_CASE("png and ppm round trips") {
  Rng rng(61);
  RasterImage img = random_image(rng, 23, 17);
  write_png(img, temp_path("a.png"));
  CHECK(read_png(temp_path("a.png")) == img);
  CHECK(read_image(temp_path("a.png")) == img);
  write_ppm(img, temp_path("a.ppm"));
  CHECK(read_ppm(temp_path("a.ppm")) == img);
  CHECK(read_image(temp_path("a.ppm")) == img);

  // Holes travel through alpha.
  img.erase(3, 4);
  img.erase(22, 16);
  write_image(img, temp_path("holes.png"));
  const RasterImage back = read_image(temp_path("holes.png"));
  CHECK(back == img);
  CHECK(back.hole_count() == 2);
}

TEST_CASE("gray png expands to three channels and a mask png marks holes") {
  const int w = 5;
  const int h = 4;
  std::vector<std::uint8_t> gray(w * h);
  for (int k = 0; k < w * h; ++k) gray[k] = static_cast<std::uint8_t>(k * 10);
  png_image desc{};
  desc.version = PNG_IMAGE_VERSION;
  desc.width = w;
  desc.height = h;
  desc.format = PNG_FORMAT_GRAY;
  REQUIRE(png_image_write_to_file(&desc, temp_path("gray.png").c_str(), 0, gray.data(), 0, nullptr));
  const RasterImage img = read_image(temp_path("gray.png"));
  CHECK(img.at(2, 1) == Rgb{70, 70, 70});
  CHECK_FALSE(img.has_holes());

  std::vector<std::uint8_t> mask(w * h, 0);
  mask[1 * w + 3] = 255;
  mask[3 * w + 0] = 1;
  REQUIRE(png_image_write_to_file(&desc, temp_path("mask.png").c_str(), 0, mask.data(), 0, nullptr));
  RasterImage masked = img;
  apply_hole_mask(masked, temp_path("mask.png"));
  CHECK(masked.hole_count() == 2);
  CHECK_FALSE(masked.valid(3, 1));
  CHECK_FALSE(masked.valid(0, 3));

  RasterImage small(3, 3);
  CHECK(error_code([&] { apply_hole_mask(small, temp_path("mask.png")); }) == "mask_size_mismatch");
}

TEST_CASE("image io errors") {
  CHECK(error_code([] { read_image(temp_path("missing.png")); }) == "io_error");
  std::ofstream(temp_path("junk.png")) << "not an image";
  CHECK(error_code([] { read_image(temp_path("junk.png")); }) != "");
}

TEST_CASE("stack of a two-object image") {
  Rng rng(62);
  RasterImage img = random_image(rng, 40, 20);
  const std::vector<DrawCommand> draws{{{10, 10}, 0, {0, 0}}, {{30, 10}, 0, {1, 0}}};
  img.erase(10, 10);
  const AggregationStack s = build_stack(img, draws, 0);
  REQUIRE(s.layers.size() == 1);
  CHECK(s.layers[0].source == 1);
  CHECK(s.layers[0].dx == -20);
  CHECK(s.layers[0].dy == 0);
  CHECK(s.target == Point2{10, 10});
  CHECK(s.sample(0, 10, 10) == img.at(30, 10));
  CHECK_FALSE(s.sample(0, 25, 10).has_value());  // source x = 45 is out of frame
  const RasterImage layer = s.materialize(0);
  CHECK(layer.at(5, 3) == img.at(25, 3));
  CHECK_FALSE(layer.valid(25, 3));
  CHECK(layer.at(25, 3) == Rgb{0, 0, 0});
}

TEST_CASE("stack errors") {
  RasterImage img(20, 20);
  img.erase(5, 5);
  const std::vector<DrawCommand> one{{{5, 5}, 0, {0, 0}}};
  CHECK(error_code([&] { build_stack(img, one, 0); }) == "no_source_objects");
  const std::vector<DrawCommand> two{{{5, 5}, 0, {0, 0}}, {{15, 15}, 0, {1, 1}}};
  CHECK(error_code([&] { build_stack(img, two, 1); }) == "target_without_holes");
  CHECK(error_code([&] { build_stack(img, two, 2); }) == "invalid_target");
}

TEST_CASE("stack layers agree with the tile over the hole") {
  const RasterImage truth = tiled_image(3, 3, 8, 8);
  RasterImage img = truth;
  for (int y = 8; y < 16; ++y) {
    for (int x = 8; x < 16; ++x) img.erase(x, y);
  }
  const auto draws = draws_of(grid_program(3, 3, 8, 8), truth.bounds());
  const AggregationStack s = build_stack(img, draws, 4);
  REQUIRE(s.layers.size() == 8);
  for (std::size_t l = 0; l < s.layers.size(); ++l) {
    for (int y = 8; y < 16; ++y) {
      for (int x = 8; x < 16; ++x) {
        const auto v = s.sample(l, x, y);
        REQUIRE(v.has_value());
        CHECK(*v == truth.at(x, y));
      }
    }
  }
  // Layers come in (i, j) order of their sources.
  for (std::size_t l = 1; l < s.layers.size(); ++l) {
    CHECK(draws[s.layers[l - 1].source].index < draws[s.layers[l].source].index);
  }
}

TEST_CASE("stack translation is equivariant and conserves the mask") {
  Rng rng(63);
  const RasterImage big = random_image(rng, 60, 50);
  const std::vector<Point2> pts{{12, 10}, {30, 11}, {47, 9}, {13, 30}, {31, 29}};
  auto make = [&](int ox, int oy) {
    RasterImage img(40, 35);
    for (int y = 0; y < 35; ++y) {
      for (int x = 0; x < 40; ++x) img.set(x, y, big.at(x + 10 - ox, y + 10 - oy));
    }
    std::vector<DrawCommand> d;
    for (std::size_t k = 0; k < pts.size(); ++k) {
      d.push_back({{pts[k].x - 10 + ox, pts[k].y - 10 + oy}, 0, {static_cast<int>(k), 0}});
    }
    img.erase(static_cast<int>(d[1].position.x), static_cast<int>(d[1].position.y));
    return std::make_pair(img, d);
  };
  const auto [a, da] = make(0, 0);
  const auto [b, db] = make(3, 2);
  const AggregationStack sa = build_stack(a, da, 1);
  const AggregationStack sb = build_stack(b, db, 1);
  REQUIRE(sa.layers.size() == sb.layers.size());
  for (std::size_t l = 0; l < sa.layers.size(); ++l) {
    CHECK(sa.layers[l].dx == sb.layers[l].dx);
    CHECK(sa.layers[l].dy == sb.layers[l].dy);
    for (int y = 0; y < 30; ++y) {
      for (int x = 0; x < 34; ++x) {
        const auto va = sa.sample(l, x, y);
        const auto vb = sb.sample(l, x + 3, y + 2);
        if (va && vb) CHECK(*va == *vb);
        // Valid exactly when the source pixel exists and is valid.
        const int sx = x - sa.layers[l].dx;
        const int sy = y - sa.layers[l].dy;
        CHECK(va.has_value() == (a.in_frame(sx, sy) && a.valid(sx, sy)));
      }
    }
  }
}

TEST_CASE("attribute filter") {
  RegularityProgram p = grid_program(4, 4, 8, 8);
  RasterImage img = tiled_image(4, 4, 8, 8);
  img.erase(11, 11);  // inside draw (1, 1)
  auto draws = execute(p, img.bounds());
  const AggregationStack s = build_stack(img, draws, 5);
  CHECK(attribute_filter(s, draws, 0).layers.size() == 15);

  p.attribute = attr::Modulo{{1, 1, 0}, 2};
  draws = execute(p, img.bounds());
  REQUIRE(draws[5].attribute == 1);
  CHECK(attribute_filter(s, draws, 1).layers.size() == 7);

  // Three stripes of sizes 6, 5, 5 over a 4x4 grid enumerated row-wise.
  p.attribute = attr::Quotient{{4, 1, 0}, 6};
  draws = execute(p, img.bounds());
  for (std::size_t t : {std::size_t{0}, std::size_t{7}, std::size_t{15}}) {
    RasterImage hole = tiled_image(4, 4, 8, 8);
    hole.erase(static_cast<int>(draws[t].position.x), static_cast<int>(draws[t].position.y));
    const AggregationStack st = build_stack(hole, draws, t);
    std::size_t group = 0;
    for (const auto& d : draws) group += d.attribute == draws[t].attribute;
    CHECK(attribute_filter(st, draws, draws[t].attribute).layers.size() == group - 1);
  }

  p.attribute = attr::IsZero{{1, 1, -6}};
  draws = execute(p, img.bounds());
  REQUIRE(draws[15].attribute == 1);
  RasterImage corner = tiled_image(4, 4, 8, 8);
  corner.erase(27, 27);
  const AggregationStack sc = build_stack(corner, draws, 15);
  CHECK(error_code([&] { attribute_filter(sc, draws, 1); }) == "no_same_attribute_sources");
}

TEST_CASE("patch distance") {
  Rng rng(64);
  const RasterImage img = random_image(rng, 30, 30);
  const PatchDistance d{3};
  for (int t = 0; t < 50; ++t) {
    const Point2 p{static_cast<double>(uniform_int(rng, 0, 29)), static_cast<double>(uniform_int(rng, 0, 29))};
    const Point2 q{static_cast<double>(uniform_int(rng, 0, 29)), static_cast<double>(uniform_int(rng, 0, 29))};
    CHECK(d(img, p, p) == 0.0);
    CHECK(d(img, p, q) == d(img, q, p));
    CHECK(d(img, p, q) >= 0.0);
    CHECK(d(img, p, q) <= 1.0);
  }
  RasterImage bw(20, 10);
  for (int y = 0; y < 10; ++y) {
    for (int x = 10; x < 20; ++x) bw.set(x, y, {255, 255, 255});
  }
  CHECK(d(bw, {4, 4}, {15, 4}) == 1.0);
  // With no pixel valid in both patches the distance is 1.
  RasterImage holes(20, 10, {0, 0, 0}, false);
  CHECK(d(holes, {4, 4}, {15, 4}) == 1.0);
}

TEST_CASE("default patch window") {
  const std::vector<Point2> pts{{0, 0}, {10, 0}, {20, 0}, {0, 10}};
  CHECK(default_patch_window(pts) == 5);
  const std::vector<Point2> dense{{0, 0}, {1, 0}};
  CHECK(default_patch_window(dense) == 1);
}
