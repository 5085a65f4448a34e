#pragma once

#include "scribeforge/raster.hpp"

#include <span>
#include <vector>

namespace scribeforge {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  bool operator==(const Point2&) const = default;
};

/// Control points v_0..v_n of a Bezier curve; at least two, all finite.
class ControlPolygon {
public:
  explicit ControlPolygon(std::vector<Point2> points);

  std::span<const Point2> points() const noexcept { return points_; }
  std::size_t degree() const noexcept { return points_.size() - 1; }

private:
  std::vector<Point2> points_;
};

/// Bernstein basis polynomial C(n,j) s^j (1-s)^(n-j), with 0^0 = 1.
double bernstein(int j, int n, double s);

/// B(s) = sum_j b_{j,n}(s) v_j.
Point2 bezier_point(const ControlPolygon& polygon, double s);

/// Evaluations at s = i / (samples - 1) for i = 0..samples-1.
std::vector<Point2> sample_curve(const ControlPolygon& polygon, int samples);

/// Composites ink once onto every pixel whose center lies within thickness/2 of the
/// polyline, regardless of how many segments cover it. Pixel (x, y) has its center
/// at the point (x, y). Pixels outside the image are skipped.
RasterImage rasterize_stroke(const RasterImage& image, std::span<const Point2> path, double thickness,
                             double opacity, Luminance ink);

/// Coverage mask of rasterize_stroke, row-major, 1 = covered.
std::vector<std::uint8_t> stroke_coverage(int width, int height, std::span<const Point2> path, double thickness);

} // namespace scribeforge
