#pragma once

#include <filesystem>

#include "regsynth/raster.hpp"

namespace regsynth {

/// 8-bit PNG (gray, gray+alpha, RGB, RGBA, palette). Alpha 0 marks a hole.
RasterImage read_png(const std::filesystem::path& path);

/// Writes RGB, or RGBA with alpha 0 at holes when the image has any.
void write_png(const RasterImage& image, const std::filesystem::path& path);

/// Binary PPM (P6, maxval 255). All pixels are valid on read; holes are
/// written with their stored value.
RasterImage read_ppm(const std::filesystem::path& path);
void write_ppm(const RasterImage& image, const std::filesystem::path& path);

/// Reads PNG or PPM by file signature.
RasterImage read_image(const std::filesystem::path& path);

/// Writes PPM for a .ppm extension, PNG otherwise.
void write_image(const RasterImage& image, const std::filesystem::path& path);

/// Applies a separate mask image: any nonzero sample marks a hole. The mask
/// must have the image's dimensions.
void apply_hole_mask(RasterImage& image, const std::filesystem::path& mask_path);

}  // namespace regsynth
