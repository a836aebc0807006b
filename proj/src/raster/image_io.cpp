#include "regsynth/image_io.hpp"

#include <png.h>

#include <cctype>
#include <cstring>
#include <fstream>
#include <string>

#include "regsynth/error.hpp"

namespace regsynth {
namespace {

[[noreturn]] void io_error(const std::string& message, const std::filesystem::path& path) {
  throw Error(ErrorKind::Io, "io_error", message + ": " + path.string(), {{"path", path.string()}});
}

[[noreturn]] void format_error(const std::string& message, const std::filesystem::path& path) {
  throw Error(ErrorKind::Schema, "image_format_error", message + ": " + path.string(),
              {{"path", path.string()}});
}

struct PngReader {
  png_image image{};
  PngReader() { image.version = PNG_IMAGE_VERSION; }
  ~PngReader() { png_image_free(&image); }
  PngReader(const PngReader&) = delete;
  PngReader& operator=(const PngReader&) = delete;
};

std::vector<std::uint8_t> read_png_pixels(const std::filesystem::path& path, png_uint_32 format,
                                          int& width, int& height, bool& had_alpha) {
  if (!std::filesystem::exists(path)) io_error("file not found", path);
  PngReader reader;
  if (!png_image_begin_read_from_file(&reader.image, path.c_str())) {
    format_error(std::string("not a readable PNG (") + reader.image.message + ")", path);
  }
  had_alpha = (reader.image.format & PNG_FORMAT_FLAG_ALPHA) != 0;
  reader.image.format = format;
  width = static_cast<int>(reader.image.width);
  height = static_cast<int>(reader.image.height);
  std::vector<std::uint8_t> buffer(PNG_IMAGE_SIZE(reader.image));
  if (!png_image_finish_read(&reader.image, nullptr, buffer.data(), 0, nullptr)) {
    format_error(std::string("PNG decode failed (") + reader.image.message + ")", path);
  }
  return buffer;
}

std::string next_ppm_token(std::istream& in) {
  std::string token;
  int ch;
  while ((ch = in.get()) != EOF) {
    if (ch == '#') {
      while ((ch = in.get()) != EOF && ch != '\n') {
      }
      continue;
    }
    if (std::isspace(ch)) {
      if (!token.empty()) break;
      continue;
    }
    token.push_back(static_cast<char>(ch));
  }
  return token;
}

}  // namespace

RasterImage read_png(const std::filesystem::path& path) {
  int width = 0, height = 0;
  bool had_alpha = false;
  const auto rgba = read_png_pixels(path, PNG_FORMAT_RGBA, width, height, had_alpha);
  RasterImage out(width, height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const std::size_t o = (static_cast<std::size_t>(y) * width + x) * 4;
      out.set(x, y, {rgba[o], rgba[o + 1], rgba[o + 2]});
      if (had_alpha && rgba[o + 3] == 0) out.erase(x, y);
    }
  }
  return out;
}

void write_png(const RasterImage& image, const std::filesystem::path& path) {
  const bool alpha = image.has_holes();
  png_image out{};
  out.version = PNG_IMAGE_VERSION;
  out.width = static_cast<png_uint_32>(image.width());
  out.height = static_cast<png_uint_32>(image.height());
  out.format = alpha ? PNG_FORMAT_RGBA : PNG_FORMAT_RGB;
  const int channels = alpha ? 4 : 3;
  std::vector<std::uint8_t> buffer(static_cast<std::size_t>(image.width()) * image.height() * channels);
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x) {
      const std::size_t o = (static_cast<std::size_t>(y) * image.width() + x) * channels;
      const Rgb c = image.at(x, y);
      std::memcpy(&buffer[o], c.data(), 3);
      if (alpha) buffer[o + 3] = image.valid(x, y) ? 255 : 0;
    }
  }
  if (!png_image_write_to_file(&out, path.c_str(), 0, buffer.data(), 0, nullptr)) {
    const std::string message = out.message;
    png_image_free(&out);
    io_error("PNG write failed (" + message + ")", path);
  }
}

RasterImage read_ppm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) io_error("cannot open file", path);
  if (next_ppm_token(in) != "P6") format_error("not a binary PPM (P6)", path);
  int width = 0, height = 0, maxval = 0;
  try {
    width = std::stoi(next_ppm_token(in));
    height = std::stoi(next_ppm_token(in));
    maxval = std::stoi(next_ppm_token(in));
  } catch (const std::exception&) {
    format_error("malformed PPM header", path);
  }
  if (width <= 0 || height <= 0) format_error("PPM dimensions must be positive", path);
  if (maxval != 255) format_error("only 8-bit PPM (maxval 255) is supported", path);
  RasterImage out(width, height);
  in.read(reinterpret_cast<char*>(out.pixels().data()),
          static_cast<std::streamsize>(out.pixels().size()));
  if (in.gcount() != static_cast<std::streamsize>(out.pixels().size())) {
    format_error("truncated PPM pixel data", path);
  }
  return out;
}

void write_ppm(const RasterImage& image, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) io_error("cannot open file for writing", path);
  out << "P6\n" << image.width() << " " << image.height() << "\n255\n";
  out.write(reinterpret_cast<const char*>(image.pixels().data()),
            static_cast<std::streamsize>(image.pixels().size()));
  if (!out) io_error("write failed", path);
}

RasterImage read_image(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) io_error("cannot open file", path);
  char magic[8] = {};
  in.read(magic, sizeof(magic));
  if (in.gcount() >= 2 && magic[0] == 'P' && magic[1] == '6') return read_ppm(path);
  if (in.gcount() == 8 && png_sig_cmp(reinterpret_cast<png_const_bytep>(magic), 0, 8) == 0) {
    return read_png(path);
  }
  format_error("unrecognized image format (expected PNG or P6 PPM)", path);
}

void write_image(const RasterImage& image, const std::filesystem::path& path) {
  if (path.extension() == ".ppm") {
    write_ppm(image, path);
  } else {
    write_png(image, path);
  }
}

void apply_hole_mask(RasterImage& image, const std::filesystem::path& mask_path) {
  int width = 0, height = 0;
  bool had_alpha = false;
  std::vector<std::uint8_t> gray;
  std::ifstream probe(mask_path, std::ios::binary);
  char magic[2] = {};
  probe.read(magic, 2);
  if (probe.gcount() == 2 && magic[0] == 'P' && magic[1] == '6') {
    const RasterImage m = read_ppm(mask_path);
    width = m.width();
    height = m.height();
    gray.resize(static_cast<std::size_t>(width) * height);
    for (int y = 0; y < height; ++y) {
      for (int x = 0; x < width; ++x) {
        const Rgb c = m.at(x, y);
        gray[static_cast<std::size_t>(y) * width + x] = std::max({c[0], c[1], c[2]});
      }
    }
  } else {
    gray = read_png_pixels(mask_path, PNG_FORMAT_GRAY, width, height, had_alpha);
  }
  if (width != image.width() || height != image.height()) {
    throw Error(ErrorKind::Schema, "mask_size_mismatch", "mask dimensions differ from the image",
                {{"image", {image.width(), image.height()}}, {"mask", {width, height}}});
  }
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      if (gray[static_cast<std::size_t>(y) * width + x] != 0) image.erase(x, y);
    }
  }
}

}  // namespace regsynth
