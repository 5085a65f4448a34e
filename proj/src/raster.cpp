#include "scribeforge/raster.hpp"

#include "scribeforge/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace scribeforge {

RasterImage::RasterImage(int width, int height, std::vector<Luminance> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
  if (width < 1 || height < 1) {
    throw InvalidArgument("image dimensions must be positive, got " + std::to_string(width) + "x" +
                          std::to_string(height));
  }
  if (pixels_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw InvalidArgument("pixel buffer size " + std::to_string(pixels_.size()) +
                          " does not match " + std::to_string(width) + "x" + std::to_string(height));
  }
}

RasterImage RasterImage::blank(int width, int height, Luminance fill) {
  if (width < 1 || height < 1) {
    throw InvalidArgument("image dimensions must be positive, got " + std::to_string(width) + "x" +
                          std::to_string(height));
  }
  return RasterImage(width, height,
                     std::vector<Luminance>(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill));
}

RasterImage RasterImage::crop_columns(int x0, int x1) const {
  return crop(Rect{x0, 0, x1 - x0, height_});
}

RasterImage RasterImage::crop(const Rect& r) const {
  if (r.x < 0 || r.y < 0 || r.w < 1 || r.h < 1 || r.x + r.w > width_ || r.y + r.h > height_) {
    throw InvalidArgument("crop rectangle outside image");
  }
  std::vector<Luminance> out;
  out.reserve(static_cast<std::size_t>(r.w) * static_cast<std::size_t>(r.h));
  for (int y = r.y; y < r.y + r.h; ++y) {
    auto src = row(y).subspan(static_cast<std::size_t>(r.x), static_cast<std::size_t>(r.w));
    out.insert(out.end(), src.begin(), src.end());
  }
  return RasterImage(r.w, r.h, std::move(out));
}

Luminance round_luminance(double v) noexcept {
  if (!(v > 0.0)) {
    return 0;
  }
  if (v >= 255.0) {
    return 255;
  }
  return static_cast<Luminance>(std::lround(v));
}

Luminance blend_ink(Luminance old, double opacity, Luminance ink) {
  if (!(opacity >= 0.0 && opacity <= 1.0)) {
    throw InvalidArgument("opacity must be in [0,1], got " + std::to_string(opacity));
  }
  return round_luminance((1.0 - opacity) * old + opacity * ink);
}

RasterImage new_blank(int width, int height, Luminance fill) {
  return RasterImage::blank(width, height, fill);
}

RasterImage composite_ink(const RasterImage& image, int x, int y, double opacity, Luminance ink) {
  if (!image.contains(x, y)) {
    throw InvalidArgument("composite_ink: pixel (" + std::to_string(x) + "," + std::to_string(y) +
                          ") outside image");
  }
  const Luminance v = blend_ink(image.at(x, y), opacity, ink);
  RasterImage out = image;
  out.set(x, y, v);
  return out;
}

namespace {

struct Tap {
  int lo;
  int hi;
  double frac;
};

// Pixel-center sampling: source coordinate = (dst + 0.5) * scale - 0.5, clamped to the edge.
std::vector<Tap> bilinear_taps(int src_len, int dst_len) {
  std::vector<Tap> taps(static_cast<std::size_t>(dst_len));
  const double scale = static_cast<double>(src_len) / dst_len;
  for (int i = 0; i < dst_len; ++i) {
    double s = (i + 0.5) * scale - 0.5;
    s = std::clamp(s, 0.0, static_cast<double>(src_len - 1));
    const int lo = static_cast<int>(std::floor(s));
    const int hi = std::min(lo + 1, src_len - 1);
    taps[static_cast<std::size_t>(i)] = Tap{lo, hi, s - lo};
  }
  return taps;
}

} // namespace

RasterImage resize_to_height(const RasterImage& image, int target_height) {
  if (target_height < 1) {
    throw InvalidArgument("target height must be positive");
  }
  if (target_height == image.height()) {
    return image;
  }
  const double ratio = static_cast<double>(target_height) / image.height();
  const int target_width = std::max(1, static_cast<int>(std::lround(image.width() * ratio)));

  const auto xs = bilinear_taps(image.width(), target_width);
  const auto ys = bilinear_taps(image.height(), target_height);

  std::vector<Luminance> out(static_cast<std::size_t>(target_width) * static_cast<std::size_t>(target_height));
  std::size_t k = 0;
  for (const Tap& ty : ys) {
    for (const Tap& tx : xs) {
      const double top = (1.0 - tx.frac) * image.at(tx.lo, ty.lo) + tx.frac * image.at(tx.hi, ty.lo);
      const double bottom = (1.0 - tx.frac) * image.at(tx.lo, ty.hi) + tx.frac * image.at(tx.hi, ty.hi);
      out[k++] = round_luminance((1.0 - ty.frac) * top + ty.frac * bottom);
    }
  }
  return RasterImage(target_width, target_height, std::move(out));
}

RasterImage hstack(std::span<const RasterImage> images, int target_height, Luminance fill) {
  if (images.empty()) {
    throw InvalidArgument("hstack: empty image list");
  }
  std::vector<RasterImage> resized;
  resized.reserve(images.size());
  int total = 0;
  for (const auto& img : images) {
    resized.push_back(resize_to_height(img, target_height));
    total += resized.back().width();
  }
  RasterImage out = RasterImage::blank(total, target_height, fill);
  int x0 = 0;
  for (const auto& piece : resized) {
    for (int y = 0; y < target_height; ++y) {
      auto src = piece.row(y);
      std::copy(src.begin(), src.end(),
                out.pixels().begin() + static_cast<std::ptrdiff_t>(y) * total + x0);
    }
    x0 += piece.width();
  }
  return out;
}

RasterImage vstack(std::span<const RasterImage> images, int gap, Luminance fill) {
  if (images.empty()) {
    throw InvalidArgument("vstack: empty image list");
  }
  if (gap < 0) {
    throw InvalidArgument("vstack: negative gap");
  }
  int width = 0;
  int height = gap * static_cast<int>(images.size() - 1);
  for (const auto& img : images) {
    width = std::max(width, img.width());
    height += img.height();
  }
  RasterImage out = RasterImage::blank(width, height, fill);
  int y0 = 0;
  for (const auto& img : images) {
    for (int y = 0; y < img.height(); ++y) {
      auto src = img.row(y);
      std::copy(src.begin(), src.end(), out.pixels().begin() + static_cast<std::ptrdiff_t>(y0 + y) * width);
    }
    y0 += img.height() + gap;
  }
  return out;
}

Rect ink_bounding_box(const RasterImage& image, Luminance threshold) {
  int x0 = image.width(), y0 = image.height(), x1 = -1, y1 = -1;
  for (int y = 0; y < image.height(); ++y) {
    auto r = image.row(y);
    for (int x = 0; x < image.width(); ++x) {
      if (r[static_cast<std::size_t>(x)] < threshold) {
        x0 = std::min(x0, x);
        x1 = std::max(x1, x);
        y0 = std::min(y0, y);
        y1 = std::max(y1, y);
      }
    }
  }
  if (x1 < 0) {
    return Rect{0, 0, image.width(), image.height()};
  }
  return Rect{x0, y0, x1 - x0 + 1, y1 - y0 + 1};
}

} // namespace scribeforge
