#include "scribeforge/bezier.hpp"

#include "scribeforge/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace scribeforge {

ControlPolygon::ControlPolygon(std::vector<Point2> points) : points_(std::move(points)) {
  if (points_.size() < 2) {
    throw InvalidArgument("control polygon needs at least 2 points");
  }
  for (const auto& p : points_) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw InvalidArgument("control polygon has a non-finite point");
    }
  }
}

namespace {

double binomial(int n, int k) {
  k = std::min(k, n - k);
  double c = 1.0;
  for (int i = 1; i <= k; ++i) {
    c = c * (n - k + i) / i;
  }
  return c;
}

} // namespace

double bernstein(int j, int n, double s) {
  if (n < 0 || j < 0 || j > n) {
    throw InvalidArgument("bernstein: need 0 <= j <= n, got j=" + std::to_string(j) + " n=" + std::to_string(n));
  }
  if (!(s >= 0.0 && s <= 1.0)) {
    throw InvalidArgument("bernstein: parameter outside [0,1]");
  }
  // pow(0, 0) == 1
  return binomial(n, j) * std::pow(s, j) * std::pow(1.0 - s, n - j);
}

Point2 bezier_point(const ControlPolygon& polygon, double s) {
  const auto pts = polygon.points();
  const int n = static_cast<int>(polygon.degree());
  if (s == 0.0) {
    return pts.front();
  }
  if (s == 1.0) {
    return pts.back();
  }
  Point2 out;
  for (int j = 0; j <= n; ++j) {
    const double b = bernstein(j, n, s);
    out.x += b * pts[static_cast<std::size_t>(j)].x;
    out.y += b * pts[static_cast<std::size_t>(j)].y;
  }
  return out;
}

std::vector<Point2> sample_curve(const ControlPolygon& polygon, int samples) {
  if (samples < 2) {
    throw InvalidArgument("sample_curve: need at least 2 samples");
  }
  std::vector<Point2> out;
  out.reserve(static_cast<std::size_t>(samples));
  for (int i = 0; i < samples; ++i) {
    const double s = (i == samples - 1) ? 1.0 : static_cast<double>(i) / (samples - 1);
    out.push_back(bezier_point(polygon, s));
  }
  return out;
}

namespace {

double squared_distance_to_segment(double px, double py, const Point2& a, const Point2& b) {
  const double abx = b.x - a.x;
  const double aby = b.y - a.y;
  const double apx = px - a.x;
  const double apy = py - a.y;
  const double len2 = abx * abx + aby * aby;
  double t = len2 > 0.0 ? (apx * abx + apy * aby) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  const double dx = apx - t * abx;
  const double dy = apy - t * aby;
  return dx * dx + dy * dy;
}

} // namespace

std::vector<std::uint8_t> stroke_coverage(int width, int height, std::span<const Point2> path, double thickness) {
  if (path.empty()) {
    throw InvalidArgument("rasterize_stroke: empty path");
  }
  if (!(thickness >= 1.0)) {
    throw InvalidArgument("rasterize_stroke: thickness must be >= 1");
  }
  std::vector<std::uint8_t> mask(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), 0);
  const double r = thickness / 2.0;
  const double r2 = r * r;

  auto cover_segment = [&](const Point2& a, const Point2& b) {
    const int x0 = std::max(0, static_cast<int>(std::floor(std::min(a.x, b.x) - r)));
    const int x1 = std::min(width - 1, static_cast<int>(std::ceil(std::max(a.x, b.x) + r)));
    const int y0 = std::max(0, static_cast<int>(std::floor(std::min(a.y, b.y) - r)));
    const int y1 = std::min(height - 1, static_cast<int>(std::ceil(std::max(a.y, b.y) + r)));
    for (int y = y0; y <= y1; ++y) {
      for (int x = x0; x <= x1; ++x) {
        if (squared_distance_to_segment(x, y, a, b) <= r2) {
          mask[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x)] = 1;
        }
      }
    }
  };

  if (path.size() == 1) {
    cover_segment(path[0], path[0]);
  }
  for (std::size_t i = 1; i < path.size(); ++i) {
    cover_segment(path[i - 1], path[i]);
  }
  return mask;
}

RasterImage rasterize_stroke(const RasterImage& image, std::span<const Point2> path, double thickness,
                             double opacity, Luminance ink) {
  if (!(opacity >= 0.0 && opacity <= 1.0)) {
    throw InvalidArgument("rasterize_stroke: opacity must be in [0,1]");
  }
  const auto mask = stroke_coverage(image.width(), image.height(), path, thickness);
  RasterImage out = image;
  auto px = out.pixels();
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (mask[i] != 0) {
      px[i] = blend_ink(px[i], opacity, ink);
    }
  }
  return out;
}

} // namespace scribeforge
