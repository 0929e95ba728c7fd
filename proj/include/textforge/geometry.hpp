#pragma once

#include <array>
#include <span>
#include <vector>

#include "textforge/raster.hpp"

namespace textforge {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Point2 operator*(Point2 a, double s) { return {a.x * s, a.y * s}; }
  friend Point2 operator*(double s, Point2 a) { return {a.x * s, a.y * s}; }
  bool operator==(const Point2&) const = default;
};

double dot(Point2 a, Point2 b);
double cross(Point2 a, Point2 b);
double norm(Point2 a);
double distance(Point2 a, Point2 b);
Point2 lerp(Point2 a, Point2 b, double t);

inline constexpr int kChainPoints = 10;
inline constexpr int kFiducials = 2 * kChainPoints;

using Fiducials = std::array<Point2, kFiducials>;
using Quad = std::array<Point2, 4>;  // TL, TR, BR, BL

/// Text region outline: an upper and a lower chain of 10 points each, both
/// ordered left to right. top[i] and bottom[i] correspond.
struct ControlPolygon {
  std::array<Point2, kChainPoints> top{};
  std::array<Point2, kChainPoints> bottom{};

  /// Top chain followed by bottom chain.
  Fiducials fiducials() const;
  static ControlPolygon from_fiducials(std::span<const Point2, kFiducials> pts);

  bool operator==(const ControlPolygon&) const = default;
};

/// Finite coordinates and no two column segments (top[i], bottom[i]) cross.
bool is_valid(const ControlPolygon& poly);

/// Closed outline: top chain left to right, then bottom chain right to left.
std::vector<Point2> outline(const ControlPolygon& poly);

bool point_in_polygon(std::span<const Point2> ring, Point2 p);
double distance_to_ring(std::span<const Point2> ring, Point2 p);

struct GridSpec {
  int out_height = 64;
  int out_width = 256;
  double margin_x = 0.05;
  double margin_y = 0.05;
  // Measure bending in output-pixel geometry (x scaled by out_width /
  // out_height) rather than in the unit square. Unit-square kernels distort
  // strongly curved bands through the interior rows.
  bool isotropic = true;
};

/// Destination layout of the rectified fiducials in normalized [0,1]^2.
Fiducials canonical_fiducials(const GridSpec& spec);

/// Thin-plate spline mapping from rectified (destination) space back to
/// source space: f(q) = a0 + a1 qx + a2 qy + sum_i w_i U(|q - dst_i|),
/// U(r) = r^2 ln r^2. Immutable once solved. With aspect != 1 the kernel
/// distance is taken after scaling x by `aspect`; inputs, outputs and the
/// affine coefficients stay in unscaled coordinates.
class TpsWarp {
 public:
  const Fiducials& src_fiducials() const { return src_; }
  const Fiducials& dst_fiducials() const { return dst_; }
  /// weights()[i] = (w_i for x, w_i for y)
  const std::array<Point2, kFiducials>& weights() const { return weights_; }
  /// affine()[0] = constant term, [1] = qx coefficient, [2] = qy coefficient.
  const std::array<Point2, 3>& affine() const { return affine_; }
  double lambda() const { return lambda_; }
  double aspect() const { return aspect_; }

  Point2 operator()(Point2 q) const;

 private:
  friend TpsWarp tps_solve(const Fiducials& dst, const Fiducials& src, double lambda, double aspect);
  Fiducials src_{};
  Fiducials dst_{};
  std::array<Point2, kFiducials> weights_{};
  std::array<Point2, 3> affine_{};
  double lambda_ = 0.0;
  double aspect_ = 1.0;
};

/// Radial basis U(r) evaluated from the squared distance.
double tps_kernel(double r2);

/// Throws SingularSystem when the (N+3)x(N+3) system cannot be solved.
TpsWarp tps_solve(const Fiducials& dst, const Fiducials& src, double lambda = 0.0, double aspect = 1.0);

/// Backward-warps source_image onto an out_height x out_width grid. Output
/// pixel (col, row) sits at ((col+0.5)/W, (row+0.5)/H); its value is the
/// bilinear sample of the source at f(q), clamped to the border.
Raster tps_sample(const TpsWarp& warp, const Raster& source_image, const GridSpec& spec);

/// Convenience: rectify the region bounded by `poly` (source pixel coords).
Raster tps_rectify(const Raster& image, const ControlPolygon& poly, const GridSpec& spec,
                   double lambda = 0.0);

double polyline_length(std::span<const Point2> pts);

/// n points at equal arc-length spacing along the polyline. Endpoints are
/// reproduced exactly. Throws DegenerateChain for zero-length input.
std::vector<Point2> resample_chain(std::span<const Point2> points, int n);

/// Point at arc length s along the polyline (clamped to [0, length]).
Point2 point_at_arc_length(std::span<const Point2> pts, std::span<const double> cumulative,
                           double s);

std::vector<double> cumulative_lengths(std::span<const Point2> pts);

}  // namespace textforge
