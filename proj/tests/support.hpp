#pragma once

// Shared helpers for the unit and acceptance suites.

#include "scribeforge/raster.hpp"
#include "scribeforge/rng.hpp"

#include <cstdint>
#include <filesystem>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace scribeforge::testing {

inline std::uint64_t fnv1a64(std::span<const std::uint8_t> bytes, std::uint64_t h = 0xcbf29ce484222325ULL) {
  for (std::uint8_t b : bytes) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::uint64_t digest(const RasterImage& image) {
  const std::uint32_t dims[2] = {static_cast<std::uint32_t>(image.width()), static_cast<std::uint32_t>(image.height())};
  const auto h = fnv1a64(std::span(reinterpret_cast<const std::uint8_t*>(dims), sizeof dims));
  return fnv1a64(image.pixels(), h);
}

/// Digest over every regular file below root (relative path + contents), in path order.
std::uint64_t digest_tree(const std::filesystem::path& root);

class TempDir {
public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const noexcept { return path_; }

private:
  std::filesystem::path path_;
};

inline RasterImage random_image(RngState& rng, int width, int height) {
  std::vector<Luminance> px(static_cast<std::size_t>(width) * static_cast<std::size_t>(height));
  for (auto& p : px) {
    p = static_cast<Luminance>(rng.uniform_int(0, 255));
  }
  return RasterImage(width, height, std::move(px));
}

/// White image with a few dark rectangles, a stand-in for a text line.
inline RasterImage inked_line(RngState& rng, int width, int height) {
  RasterImage img = RasterImage::blank(width, height);
  const int blocks = static_cast<int>(rng.uniform_int(1, 6));
  for (int b = 0; b < blocks; ++b) {
    const int w = static_cast<int>(rng.uniform_int(1, std::max(1, width / 4)));
    const int h = static_cast<int>(rng.uniform_int(1, std::max(1, height / 2)));
    const int x = static_cast<int>(rng.uniform_int(0, width - w));
    const int y = static_cast<int>(rng.uniform_int(0, height - h));
    for (int yy = y; yy < y + h; ++yy) {
      for (int xx = x; xx < x + w; ++xx) {
        img.set(xx, yy, static_cast<Luminance>(rng.uniform_int(0, 80)));
      }
    }
  }
  return img;
}

#ifndef SCRIBEFORGE_TOY_DIR
#define SCRIBEFORGE_TOY_DIR "data/toy"
#endif

inline std::filesystem::path toy_dir() { return SCRIBEFORGE_TOY_DIR; }

} // namespace scribeforge::testing
