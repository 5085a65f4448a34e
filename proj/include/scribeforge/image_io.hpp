#pragma once

#include "scribeforge/raster.hpp"

#include <cstdint>
#include <filesystem>
#include <vector>

namespace scribeforge {

// PNG of any color type is reduced to luminance on load: alpha is composited over white,
// then round(0.299 R + 0.587 G + 0.114 B). PGM is read as P5 with maxval 255.
RasterImage load_image(const std::filesystem::path& path);

// Format chosen by extension: ".pgm" writes P5, anything else writes 8-bit grayscale PNG.
void save_image(const RasterImage& image, const std::filesystem::path& path);

std::vector<std::uint8_t> encode_png(const RasterImage& image);
RasterImage decode_png(const std::vector<std::uint8_t>& bytes);

std::vector<std::uint8_t> encode_pgm(const RasterImage& image);
RasterImage decode_pgm(const std::vector<std::uint8_t>& bytes);

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);
void write_file_bytes(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes);

} // namespace scribeforge
