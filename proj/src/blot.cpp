#include "scribeforge/blot.hpp"

#include "scribeforge/ctc_align.hpp"
#include "scribeforge/errors.hpp"

#include <algorithm>
#include <cmath>

namespace scribeforge {

void BlotConfig::validate() const {
  auto fraction = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (min_h < 1 || min_w < 1 || min_h > max_h || min_w > max_w) {
    throw InvalidArgument("blot config: need 1 <= min_h <= max_h and 1 <= min_w <= max_w");
  }
  if (count_min < 1 || count_min > count_max) {
    throw InvalidArgument("blot config: need 1 <= count_min <= count_max");
  }
  if (incline < 0) {
    throw InvalidArgument("blot config: incline must be non-negative");
  }
  if (!fraction(intensity) || !fraction(transparency) || !fraction(proba) || !fraction(repeat_proba)) {
    throw InvalidArgument("blot config: intensity, transparency, proba and repeat_proba must be in [0,1]");
  }
  if (!(thickness >= 1.0)) {
    throw InvalidArgument("blot config: thickness must be >= 1");
  }
}

namespace {

// Uniform start within [lo_edge, hi_edge - size], clamped so the rect stays inside [0, limit).
int place(RngState& rng, int lo_edge, int hi_edge, int size, int limit) {
  const int lo = std::min(lo_edge, limit - size);
  const int hi = std::max(lo, std::min(hi_edge - size, limit - size));
  return static_cast<int>(rng.uniform_int(lo, hi));
}

} // namespace

std::vector<Rect> choose_regions(const RasterImage& image, const BlotConfig& config, RngState& rng,
                                 const BoundarySet* boundaries) {
  config.validate();
  const int width = image.width();
  const int height = image.height();
  const Rect ink = ink_bounding_box(image);

  const auto count = rng.uniform_int(config.count_min, config.count_max);
  std::vector<Rect> regions;
  regions.reserve(static_cast<std::size_t>(count));
  for (std::int64_t i = 0; i < count; ++i) {
    const int w_hi = std::min(config.max_w, width);
    const int h_hi = std::min(config.max_h, height);
    const int w = static_cast<int>(rng.uniform_int(std::min(config.min_w, w_hi), w_hi));
    const int h = static_cast<int>(rng.uniform_int(std::min(config.min_h, h_hi), h_hi));
    int x = place(rng, ink.x, ink.x + ink.w, w, width);
    const int y = place(rng, ink.y, ink.y + ink.h, h, height);
    if (boundaries != nullptr && !boundaries->spans.empty()) {
      const auto k = static_cast<std::size_t>(
          rng.uniform_int(0, static_cast<std::int64_t>(boundaries->spans.size()) - 1));
      const auto& span = boundaries->spans[k];
      const double scale = boundaries->width > 0 ? static_cast<double>(width) / boundaries->width : 1.0;
      const double center = 0.5 * (span.start_px + span.end_px) * scale;
      x = std::clamp(static_cast<int>(std::lround(center - w / 2.0)), 0, width - w);
    }
    regions.push_back(Rect{x, y, w, h});
  }
  return regions;
}

int control_band_count(const Rect& region, double intensity) {
  return std::max(2, static_cast<int>(std::lround(intensity * region.w / 5.0)));
}

ControlPolygon generate_control_points(const Rect& region, const BlotConfig& config, RngState& rng) {
  if (region.w < 1 || region.h < 1) {
    throw InvalidArgument("generate_control_points: region must have positive area");
  }
  const int bands = control_band_count(region, config.intensity);
  const double band_w = static_cast<double>(region.w) / bands;
  const double top = region.y;
  const double bottom = region.y + region.h;
  // Centers of the top and bottom thirds; bands alternate between them to form the zigzag.
  const double centers[2] = {top + region.h / 6.0, top + region.h * 5.0 / 6.0};
  int phase = rng.bernoulli(0.5) ? 1 : 0;

  std::vector<Point2> points;
  points.reserve(static_cast<std::size_t>(bands) * 2);
  for (int b = 0; b < bands; ++b) {
    const double x0 = region.x + b * band_w;
    const double x = rng.uniform_real(x0, x0 + band_w);
    const double c = centers[phase];
    const double y_lo = std::max(top, c - config.incline);
    const double y_hi = std::min(bottom, c + config.incline);
    const double y = rng.uniform_real(y_lo, y_hi);
    points.push_back(Point2{x, y});
    if (rng.bernoulli(config.repeat_proba)) {
      points.push_back(Point2{x, y});
    }
    phase ^= 1;
  }
  return ControlPolygon(std::move(points));
}

int blot_sample_count(const ControlPolygon& polygon) {
  return std::max(50, 10 * static_cast<int>(polygon.points().size()));
}

BlotOutcome apply_handwritten_blots_traced(const RasterImage& image, const BlotConfig& config, RngState& rng,
                                           const BoundarySet* boundaries) {
  config.validate();
  BlotOutcome outcome{image, false, {}, {}};
  if (!rng.bernoulli(config.proba)) {
    return outcome;
  }
  outcome.applied = true;
  outcome.regions = choose_regions(image, config, rng, boundaries);
  for (const Rect& region : outcome.regions) {
    outcome.polygons.push_back(generate_control_points(region, config, rng));
  }
  for (const auto& polygon : outcome.polygons) {
    const auto path = sample_curve(polygon, blot_sample_count(polygon));
    outcome.image = rasterize_stroke(outcome.image, path, config.thickness, config.transparency, kInk);
  }
  return outcome;
}

RasterImage apply_handwritten_blots(const RasterImage& image, const BlotConfig& config, RngState& rng,
                                    const BoundarySet* boundaries) {
  return apply_handwritten_blots_traced(image, config, rng, boundaries).image;
}

} // namespace scribeforge
