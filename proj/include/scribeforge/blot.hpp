#pragma once

#include "scribeforge/bezier.hpp"
#include "scribeforge/raster.hpp"
#include "scribeforge/rng.hpp"

#include <optional>
#include <vector>

namespace scribeforge {

struct BoundarySet;

/// Strikethrough parameters. Defaults are the standard HandWritten Blots settings.
struct BlotConfig {
  int min_h = 50;
  int max_h = 100;
  int min_w = 10;
  int max_w = 50;
  int incline = 15;          // +/- vertical jitter of control points, pixels
  double intensity = 0.9;    // control-point density along the region
  double transparency = 0.95; // stroke opacity
  int count_min = 1;
  int count_max = 11;
  double proba = 0.5;
  double thickness = 3.0;

  // Chance that a drawn control point is repeated to widen the loop of the scribble.
  double repeat_proba = 0.2;

  /// Throws InvalidArgument when any range or fraction is inconsistent.
  void validate() const;
};

std::vector<Rect> choose_regions(const RasterImage& image, const BlotConfig& config, RngState& rng,
                                 const BoundarySet* boundaries = nullptr);

/// Number of vertical bands used for a region: max(2, round(intensity * w / 5)).
int control_band_count(const Rect& region, double intensity);

ControlPolygon generate_control_points(const Rect& region, const BlotConfig& config, RngState& rng);

/// Curve sampling density for a blot polygon: 10 per control point, at least 50.
int blot_sample_count(const ControlPolygon& polygon);

struct BlotOutcome {
  RasterImage image;
  bool applied = false;
  std::vector<Rect> regions;
  std::vector<ControlPolygon> polygons;
};

/// Full trace of one application; apply_handwritten_blots returns just the image.
BlotOutcome apply_handwritten_blots_traced(const RasterImage& image, const BlotConfig& config, RngState& rng,
                                           const BoundarySet* boundaries = nullptr);

RasterImage apply_handwritten_blots(const RasterImage& image, const BlotConfig& config, RngState& rng,
                                    const BoundarySet* boundaries = nullptr);

} // namespace scribeforge
