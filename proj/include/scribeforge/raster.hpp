#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace scribeforge {

using Luminance = std::uint8_t;

inline constexpr Luminance kInk = 0;
inline constexpr Luminance kPaper = 255;

// Canonical line geometry used by the recognizer this data feeds.
inline constexpr int kCanonicalLineWidth = 2048;
inline constexpr int kCanonicalLineHeight = 128;

struct Rect {
  int x = 0;
  int y = 0;
  int w = 0;
  int h = 0;

  bool operator==(const Rect&) const = default;
};

/// 8-bit single-channel line image, row-major. 0 is full ink, 255 is background.
class RasterImage {
public:
  /// Throws InvalidArgument when either dimension is zero or the buffer size mismatches.
  RasterImage(int width, int height, std::vector<Luminance> pixels);

  static RasterImage blank(int width, int height, Luminance fill = kPaper);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }

  Luminance at(int x, int y) const { return pixels_[index(x, y)]; }
  void set(int x, int y, Luminance v) { pixels_[index(x, y)] = v; }
  bool contains(int x, int y) const noexcept {
    return x >= 0 && y >= 0 && x < width_ && y < height_;
  }

  std::span<const Luminance> pixels() const noexcept { return pixels_; }
  std::span<Luminance> pixels() noexcept { return pixels_; }
  std::span<const Luminance> row(int y) const {
    return std::span<const Luminance>(pixels_).subspan(index(0, y), static_cast<std::size_t>(width_));
  }

  /// Columns [x0, x1) at full height.
  RasterImage crop_columns(int x0, int x1) const;
  RasterImage crop(const Rect& r) const;

  bool operator==(const RasterImage&) const = default;

private:
  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
  }

  int width_;
  int height_;
  std::vector<Luminance> pixels_;
};

// Rounds half away from zero and clamps to [0,255].
Luminance round_luminance(double v) noexcept;

/// round((1 - opacity) * old + opacity * ink). Throws InvalidArgument if opacity is outside [0,1].
Luminance blend_ink(Luminance old, double opacity, Luminance ink);

RasterImage new_blank(int width, int height, Luminance fill);

/// Returns a copy with one pixel composited. (x, y) must lie inside the image.
RasterImage composite_ink(const RasterImage& image, int x, int y, double opacity, Luminance ink);

/// Bilinear resize preserving aspect ratio. Identity (bit-exact) when the height already matches.
RasterImage resize_to_height(const RasterImage& image, int target_height);

/// Resizes every image to target_height and concatenates them left to right.
RasterImage hstack(std::span<const RasterImage> images, int target_height, Luminance fill = kPaper);

/// Pads every image to the widest with fill and stacks top to bottom with gap rows between.
RasterImage vstack(std::span<const RasterImage> images, int gap, Luminance fill = kPaper);

/// Tightest rectangle holding pixels darker than threshold; the whole image if none are.
Rect ink_bounding_box(const RasterImage& image, Luminance threshold = 250);

} // namespace scribeforge
