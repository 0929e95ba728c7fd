#pragma once

#include <optional>

#include "textforge/geometry.hpp"
#include "textforge/raster.hpp"
#include "textforge/rng.hpp"

namespace textforge {

inline constexpr int kFixedHeight = 64;
inline constexpr int kFixedWidth = 256;
inline constexpr std::uint8_t kPadGrey = 128;

/// Bilinear resize with half-pixel-center alignment.
Raster resize_bilinear(const Raster& img, int out_height, int out_width);

/// Resize to 64x256 ignoring aspect ratio.
Raster fixed_resize(const Raster& img);

/// (v - 128) / 128 per sample.
NormalizedRaster normalize(const Raster& img);
Raster denormalize(const NormalizedRaster& img);

/// Where the resized content landed on the square canvas.
struct Placement {
  int offset_x = 0;
  int offset_y = 0;
  int content_width = 0;
  int content_height = 0;
  double scale_x = 1.0;  // content_width / source width
  double scale_y = 1.0;

  Point2 apply(Point2 p) const { return {p.x * scale_x + offset_x, p.y * scale_y + offset_y}; }
};

struct Squarized {
  Raster image;
  Placement placement;
};

/// Long side to `side`, short side scaled to match, centered on a grey canvas.
/// Odd padding remainders go to the bottom/right.
Squarized squarize(const Raster& img, int side = 256);

ControlPolygon transform(const ControlPolygon& poly, const Placement& placement);

/// Rotation by k * 90 degrees counter-clockwise. Pixel (r, c) moves to
/// (W-1-c, r) for k = 1.
Raster rotate_k90(const Raster& img, int k);

/// Maps continuous pixel coordinates of a width x height image through the
/// same rotation.
Point2 rotate_point_k90(Point2 p, int k, int width, int height);

struct Rotated {
  Raster image;
  std::optional<ControlPolygon> polygon;
};

/// Throws NonSquareInput when a polygon is supplied with a non-square image.
Rotated rotate_k90(const Raster& img, int k, const std::optional<ControlPolygon>& polygon);

struct AugmentPolicy {
  double rot_prob_each = 0.05;
};

/// Draws k in {0,1,2,3}: k = 1..3 each with rot_prob_each, else 0.
int draw_rotation(const AugmentPolicy& policy, Rng& rng);

struct Augmented {
  Raster image;
  std::optional<ControlPolygon> polygon;
  int k = 0;
};

Augmented augment(const Raster& img, const std::optional<ControlPolygon>& polygon,
                  const AugmentPolicy& policy, Rng& rng);

/// Bilinear resize to (floor(H/2), floor(W/2)).
Raster downsample_half(const Raster& img);

}  // namespace textforge
