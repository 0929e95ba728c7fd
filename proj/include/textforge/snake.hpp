#pragma once

#include <optional>
#include <vector>

#include "textforge/geometry.hpp"
#include "textforge/raster.hpp"

namespace textforge {

/// Center line with a radius per center point (pixel space), the disk
/// sequence describing a text instance.
struct SnakeGeometry {
  std::vector<Point2> centers;
  std::vector<double> radii;
  /// Top-chain points paired with centers; used only to orient normals.
  std::vector<Point2> top_side;
};

enum class WidthMode { AspectPreserving, Fixed };

struct StripSpec {
  int out_height = 64;
  WidthMode width_mode = WidthMode::AspectPreserving;
  int fixed_width = 256;
  bool smooth_centerline = false;
};

/// Midpoints and half-lengths of the column segments (top[i], bottom[i]).
/// Throws DegenerateGeometry on zero radii or coincident consecutive centers.
SnakeGeometry geometry_from_polygon(const ControlPolygon& poly);

/// Output width for a geometry: round(out_height * arc_length / (2 * mean_radius))
/// in aspect-preserving mode, at least 1.
int strip_width(const SnakeGeometry& geo, const StripSpec& spec);

/// Straightens the band around the center line into an out_height-row strip.
/// Row 0 is the top-chain side.
Raster unroll(const Raster& img, const SnakeGeometry& geo, const StripSpec& spec);

/// Moving average (window 3) over centers and radii; endpoints are kept.
SnakeGeometry smooth(const SnakeGeometry& geo);

}  // namespace textforge
