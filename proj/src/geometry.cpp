#include "textforge/geometry.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "textforge/errors.hpp"

namespace textforge {

double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
double norm(Point2 a) { return std::hypot(a.x, a.y); }
double distance(Point2 a, Point2 b) { return norm(a - b); }
Point2 lerp(Point2 a, Point2 b, double t) { return a + (b - a) * t; }

Fiducials ControlPolygon::fiducials() const {
  Fiducials out{};
  std::copy(top.begin(), top.end(), out.begin());
  std::copy(bottom.begin(), bottom.end(), out.begin() + kChainPoints);
  return out;
}

ControlPolygon ControlPolygon::from_fiducials(std::span<const Point2, kFiducials> pts) {
  ControlPolygon poly;
  std::copy(pts.begin(), pts.begin() + kChainPoints, poly.top.begin());
  std::copy(pts.begin() + kChainPoints, pts.end(), poly.bottom.begin());
  return poly;
}

namespace {

int orientation(Point2 a, Point2 b, Point2 c) {
  const double v = cross(b - a, c - a);
  const double scale = std::max({norm(b - a) * norm(c - a), 1e-300});
  if (std::abs(v) <= 1e-12 * scale) return 0;
  return v > 0 ? 1 : -1;
}

bool on_segment(Point2 a, Point2 b, Point2 p) {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
         p.y <= std::max(a.y, b.y);
}

bool segments_intersect(Point2 p1, Point2 p2, Point2 q1, Point2 q2) {
  const int o1 = orientation(p1, p2, q1);
  const int o2 = orientation(p1, p2, q2);
  const int o3 = orientation(q1, q2, p1);
  const int o4 = orientation(q1, q2, p2);
  if (o1 != o2 && o3 != o4 && o1 != 0 && o2 != 0 && o3 != 0 && o4 != 0) return true;
  if (o1 == 0 && on_segment(p1, p2, q1)) return true;
  if (o2 == 0 && on_segment(p1, p2, q2)) return true;
  if (o3 == 0 && on_segment(q1, q2, p1)) return true;
  if (o4 == 0 && on_segment(q1, q2, p2)) return true;
  return false;
}

double distance_to_segment(Point2 a, Point2 b, Point2 p) {
  const Point2 ab = b - a;
  const double len2 = dot(ab, ab);
  if (len2 == 0.0) return distance(a, p);
  const double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
  return distance(a + ab * t, p);
}

}  // namespace

bool is_valid(const ControlPolygon& poly) {
  for (const auto& p : poly.fiducials())
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) return false;
  for (int i = 0; i < kChainPoints; ++i)
    for (int j = i + 1; j < kChainPoints; ++j)
      if (segments_intersect(poly.top[i], poly.bottom[i], poly.top[j], poly.bottom[j]))
        return false;
  return true;
}

std::vector<Point2> outline(const ControlPolygon& poly) {
  std::vector<Point2> ring(poly.top.begin(), poly.top.end());
  ring.insert(ring.end(), poly.bottom.rbegin(), poly.bottom.rend());
  return ring;
}

bool point_in_polygon(std::span<const Point2> ring, Point2 p) {
  bool inside = false;
  const std::size_t n = ring.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Point2 a = ring[i];
    const Point2 b = ring[j];
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x = (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x;
      if (p.x < x) inside = !inside;
    }
  }
  return inside;
}

double distance_to_ring(std::span<const Point2> ring, Point2 p) {
  double best = std::numeric_limits<double>::infinity();
  const std::size_t n = ring.size();
  for (std::size_t i = 0; i < n; ++i)
    best = std::min(best, distance_to_segment(ring[i], ring[(i + 1) % n], p));
  return best;
}

Fiducials canonical_fiducials(const GridSpec& spec) {
  if (spec.margin_x < 0.0 || spec.margin_x >= 0.5 || spec.margin_y < 0.0 || spec.margin_y >= 0.5)
    throw std::invalid_argument("GridSpec margins must lie in [0, 0.5)");
  Fiducials out{};
  for (int i = 0; i < kChainPoints; ++i) {
    const double t = static_cast<double>(i) / (kChainPoints - 1);
    const double x = spec.margin_x + t * (1.0 - 2.0 * spec.margin_x);
    out[i] = {x, spec.margin_y};
    out[kChainPoints + i] = {x, 1.0 - spec.margin_y};
  }
  return out;
}

double tps_kernel(double r2) { return r2 == 0.0 ? 0.0 : r2 * std::log(r2); }

TpsWarp tps_solve(const Fiducials& dst, const Fiducials& src, double lambda, double aspect) {
  if (lambda < 0.0) throw std::invalid_argument("tps_solve: lambda must be >= 0");
  if (!(aspect > 0.0) || !std::isfinite(aspect)) throw std::invalid_argument("tps_solve: aspect must be positive");
  constexpr int n = kFiducials;
  Eigen::Matrix<double, n + 3, n + 3> system = Eigen::Matrix<double, n + 3, n + 3>::Zero();
  Eigen::Matrix<double, n + 3, 2> rhs = Eigen::Matrix<double, n + 3, 2>::Zero();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const Point2 d = dst[i] - dst[j];
      system(i, j) = tps_kernel(aspect * aspect * d.x * d.x + d.y * d.y);
    }
    system(i, i) += lambda;
    system(i, n) = system(n, i) = 1.0;
    system(i, n + 1) = system(n + 1, i) = aspect * dst[i].x;
    system(i, n + 2) = system(n + 2, i) = dst[i].y;
    rhs(i, 0) = src[i].x;
    rhs(i, 1) = src[i].y;
  }

  const Eigen::PartialPivLU<Eigen::Matrix<double, n + 3, n + 3>> lu(system);
  const double rcond = lu.rcond();
  if (!(rcond > 1e-12)) throw SingularSystem("tps_solve: fiducial system is singular (duplicate or collinear points)");
  const Eigen::Matrix<double, n + 3, 2> coeffs = lu.solve(rhs);
  if (!coeffs.allFinite()) throw SingularSystem("tps_solve: non-finite solution");

  TpsWarp warp;
  warp.src_ = src;
  warp.dst_ = dst;
  warp.lambda_ = lambda;
  warp.aspect_ = aspect;
  for (int i = 0; i < n; ++i) warp.weights_[i] = {coeffs(i, 0), coeffs(i, 1)};
  for (int k = 0; k < 3; ++k) warp.affine_[k] = {coeffs(n + k, 0), coeffs(n + k, 1)};
  warp.affine_[1] = warp.affine_[1] * aspect;
  return warp;
}

Point2 TpsWarp::operator()(Point2 q) const {
  Point2 out = affine_[0] + affine_[1] * q.x + affine_[2] * q.y;
  for (int i = 0; i < kFiducials; ++i) {
    const Point2 d = q - dst_[i];
    out = out + weights_[i] * tps_kernel(aspect_ * aspect_ * d.x * d.x + d.y * d.y);
  }
  return out;
}

Raster tps_sample(const TpsWarp& warp, const Raster& source_image, const GridSpec& spec) {
  if (source_image.empty()) throw std::invalid_argument("tps_sample: empty source image");
  if (spec.out_height < 2 || spec.out_width < 2)
    throw std::invalid_argument("tps_sample: output must be at least 2x2");
  Raster out(spec.out_height, spec.out_width, source_image.channels);
  for (int row = 0; row < spec.out_height; ++row) {
    const double qy = (row + 0.5) / spec.out_height;
    for (int col = 0; col < spec.out_width; ++col) {
      const double qx = (col + 0.5) / spec.out_width;
      const Point2 s = warp({qx, qy});
      const double px = s.x * source_image.width - 0.5;
      const double py = s.y * source_image.height - 0.5;
      for (int ch = 0; ch < source_image.channels; ++ch)
        out.at(row, col, ch) = to_u8(sample_bilinear(source_image, px, py, ch));
    }
  }
  return out;
}

Raster tps_rectify(const Raster& image, const ControlPolygon& poly, const GridSpec& spec,
                   double lambda) {
  Fiducials src = poly.fiducials();
  for (auto& p : src) p = {p.x / image.width, p.y / image.height};
  const double aspect = spec.isotropic ? static_cast<double>(spec.out_width) / spec.out_height : 1.0;
  return tps_sample(tps_solve(canonical_fiducials(spec), src, lambda, aspect), image, spec);
}

double polyline_length(std::span<const Point2> pts) {
  double total = 0.0;
  for (std::size_t i = 1; i < pts.size(); ++i) total += distance(pts[i - 1], pts[i]);
  return total;
}

std::vector<double> cumulative_lengths(std::span<const Point2> pts) {
  std::vector<double> cum(pts.size(), 0.0);
  for (std::size_t i = 1; i < pts.size(); ++i) cum[i] = cum[i - 1] + distance(pts[i - 1], pts[i]);
  return cum;
}

Point2 point_at_arc_length(std::span<const Point2> pts, std::span<const double> cumulative,
                           double s) {
  if (s <= 0.0) return pts.front();
  if (s >= cumulative.back()) return pts.back();
  const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), s);
  const std::size_t i = static_cast<std::size_t>(it - cumulative.begin());  // cumulative[i-1] <= s < cumulative[i]
  const double seg = cumulative[i] - cumulative[i - 1];
  const double t = seg > 0.0 ? (s - cumulative[i - 1]) / seg : 0.0;
  return lerp(pts[i - 1], pts[i], t);
}

std::vector<Point2> resample_chain(std::span<const Point2> points, int n) {
  if (points.size() < 2) throw std::invalid_argument("resample_chain: need at least 2 points");
  if (n < 2) throw std::invalid_argument("resample_chain: n must be >= 2");
  const std::vector<double> cum = cumulative_lengths(points);
  const double total = cum.back();
  if (!(total > 0.0)) throw DegenerateChain("resample_chain: polyline has zero length");
  std::vector<Point2> out(static_cast<std::size_t>(n));
  out.front() = points.front();
  out.back() = points.back();
  for (int k = 1; k < n - 1; ++k)
    out[k] = point_at_arc_length(points, cum, total * k / (n - 1));
  return out;
}

}  // namespace textforge
