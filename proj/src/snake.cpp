#include "textforge/snake.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "textforge/errors.hpp"

namespace textforge {

namespace {

void check(const SnakeGeometry& geo) {
  if (geo.centers.size() < 2 || geo.radii.size() != geo.centers.size())
    throw DegenerateGeometry("snake geometry needs >= 2 centers with one radius each");
  for (double r : geo.radii)
    if (!(r > 0.0)) throw DegenerateGeometry("snake geometry has a non-positive radius");
  for (std::size_t i = 1; i < geo.centers.size(); ++i)
    if (geo.centers[i] == geo.centers[i - 1]) throw DegenerateGeometry("snake geometry has coincident centers");
}

// Centripetal Catmull-Rom through the centers, densely sampled. A polyline
// through sparse annotations tilts chord normals by half the turning angle
// per segment; the spline keeps them close to the true normals. `knots`
// receives the dense index of every input center.
std::vector<Point2> dense_centerline(const std::vector<Point2>& c, std::vector<std::size_t>& knots) {
  constexpr int kSub = 16;
  const std::size_t n = c.size();
  std::vector<Point2> out{c.front()};
  knots.assign(1, 0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const Point2 p1 = c[i];
    const Point2 p2 = c[i + 1];
    const Point2 p0 = i > 0 ? c[i - 1] : p1 * 2.0 - p2;
    const Point2 p3 = i + 2 < n ? c[i + 2] : p2 * 2.0 - p1;
    const auto gap = [](Point2 a, Point2 b) { return std::max(std::sqrt(distance(a, b)), 1e-9); };
    const double t0 = 0.0;
    const double t1 = t0 + gap(p0, p1);
    const double t2 = t1 + gap(p1, p2);
    const double t3 = t2 + gap(p2, p3);
    for (int k = 1; k <= kSub; ++k) {
      const double t = t1 + (t2 - t1) * k / kSub;
      const Point2 a1 = p0 * ((t1 - t) / (t1 - t0)) + p1 * ((t - t0) / (t1 - t0));
      const Point2 a2 = p1 * ((t2 - t) / (t2 - t1)) + p2 * ((t - t1) / (t2 - t1));
      const Point2 a3 = p2 * ((t3 - t) / (t3 - t2)) + p3 * ((t - t2) / (t3 - t2));
      const Point2 b1 = a1 * ((t2 - t) / (t2 - t0)) + a2 * ((t - t0) / (t2 - t0));
      const Point2 b2 = a2 * ((t3 - t) / (t3 - t1)) + a3 * ((t - t1) / (t3 - t1));
      out.push_back(k == kSub ? p2 : b1 * ((t2 - t) / (t2 - t1)) + b2 * ((t - t1) / (t2 - t1)));
    }
    knots.push_back(out.size() - 1);
  }
  return out;
}

}  // namespace

SnakeGeometry geometry_from_polygon(const ControlPolygon& poly) {
  SnakeGeometry geo;
  for (int i = 0; i < kChainPoints; ++i) {
    geo.centers.push_back(lerp(poly.top[i], poly.bottom[i], 0.5));
    geo.radii.push_back(distance(poly.top[i], poly.bottom[i]) / 2.0);
    geo.top_side.push_back(poly.top[i]);
  }
  check(geo);
  return geo;
}

SnakeGeometry smooth(const SnakeGeometry& geo) {
  SnakeGeometry out = geo;
  const std::size_t n = geo.centers.size();
  for (std::size_t i = 1; i + 1 < n; ++i) {
    out.centers[i] = (geo.centers[i - 1] + geo.centers[i] + geo.centers[i + 1]) * (1.0 / 3.0);
    out.radii[i] = (geo.radii[i - 1] + geo.radii[i] + geo.radii[i + 1]) / 3.0;
  }
  return out;
}

int strip_width(const SnakeGeometry& geo, const StripSpec& spec) {
  if (spec.width_mode == WidthMode::Fixed) return std::max(1, spec.fixed_width);
  const double length = polyline_length(geo.centers);
  const double mean_r = std::accumulate(geo.radii.begin(), geo.radii.end(), 0.0) / geo.radii.size();
  return std::max(1, static_cast<int>(std::lround(spec.out_height * length / (2.0 * mean_r))));
}

Raster unroll(const Raster& img, const SnakeGeometry& input, const StripSpec& spec) {
  if (img.empty()) throw std::invalid_argument("unroll: empty image");
  if (spec.out_height < 2) throw std::invalid_argument("unroll: out_height must be >= 2");
  check(input);
  const SnakeGeometry geo = spec.smooth_centerline ? smooth(input) : input;

  std::vector<std::size_t> knots;
  const std::vector<Point2> line = dense_centerline(geo.centers, knots);
  const std::vector<double> cum = cumulative_lengths(line);
  const double length = cum.back();
  if (!(length > 0.0)) throw DegenerateGeometry("snake center line has zero length");
  const int width = strip_width(geo, spec);
  const double step = length / width;

  // Radii are linear in arc length between annotated centers.
  std::vector<double> knot_s;
  for (std::size_t k : knots) knot_s.push_back(cum[k]);
  const auto radius_at = [&](double s) {
    if (s <= 0.0) return geo.radii.front();
    if (s >= length) return geo.radii.back();
    const auto it = std::upper_bound(knot_s.begin(), knot_s.end(), s);
    const std::size_t i = static_cast<std::size_t>(it - knot_s.begin());
    const double t = (s - knot_s[i - 1]) / (knot_s[i] - knot_s[i - 1]);
    return geo.radii[i - 1] + t * (geo.radii[i] - geo.radii[i - 1]);
  };

  std::vector<Point2> centers(width);
  std::vector<Point2> normals(width);
  std::vector<double> radii(width);
  for (int col = 0; col < width; ++col) {
    const double s = (col + 0.5) * step;
    centers[col] = point_at_arc_length(line, cum, s);
    radii[col] = radius_at(s);
    Point2 tangent = point_at_arc_length(line, cum, std::min(s + step, length)) -
                     point_at_arc_length(line, cum, std::max(s - step, 0.0));
    tangent = tangent * (1.0 / norm(tangent));
    normals[col] = {-tangent.y, tangent.x};
  }

  // Row 0 must sit on the top chain: flip every normal when most centers
  // disagree with the annotated top side.
  if (geo.top_side.size() == geo.centers.size()) {
    int disagree = 0;
    for (std::size_t i = 0; i < geo.centers.size(); ++i) {
      const double s = std::clamp(knot_s[i], 0.5 * step, length - 0.5 * step);
      const int col = std::clamp(static_cast<int>(s / step), 0, width - 1);
      if (dot(geo.top_side[i] - geo.centers[i], normals[col]) > 0.0) ++disagree;
    }
    if (2 * disagree > static_cast<int>(geo.centers.size()))
      for (auto& n : normals) n = n * -1.0;
  }

  Raster out(spec.out_height, width, img.channels);
  for (int row = 0; row < spec.out_height; ++row) {
    const double offset = -1.0 + (2.0 * row + 1.0) / spec.out_height;
    for (int col = 0; col < width; ++col) {
      const Point2 p = centers[col] + normals[col] * (offset * radii[col]);
      for (int ch = 0; ch < img.channels; ++ch)
        out.at(row, col, ch) = to_u8(sample_bilinear(img, p.x - 0.5, p.y - 0.5, ch));
    }
  }
  return out;
}

}  // namespace textforge
