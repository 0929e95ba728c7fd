#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "textforge/errors.hpp"
#include "textforge/snake.hpp"
#include "textforge/synth.hpp"

using namespace textforge;

namespace {

constexpr double kPi = std::numbers::pi;

// Half annulus centered at `c`, opening downward (top chain on the outer arc).
ControlPolygon half_annulus(Point2 c, double inner, double outer) {
  ControlPolygon poly;
  for (int i = 0; i < kChainPoints; ++i) {
    const double a = kPi - kPi * i / (kChainPoints - 1);  // left to right over the top
    const Point2 dir{std::cos(a), -std::sin(a)};
    poly.top[i] = c + dir * outer;
    poly.bottom[i] = c + dir * inner;
  }
  return poly;
}

SnakeGeometry dense_arc(Point2 c, double radius, double bend, double r, int n) {
  SnakeGeometry g;
  for (int i = 0; i < n; ++i) {
    const double a = kPi / 2 + bend / 2 - bend * i / (n - 1);
    const Point2 dir{std::cos(a), -std::sin(a)};
    g.centers.push_back(c + dir * radius);
    g.radii.push_back(r);
    g.top_side.push_back(c + dir * (radius + r));
  }
  return g;
}

}  // namespace

TEST_CASE("geometry from an axis-aligned rectangle") {
  ControlPolygon poly;
  for (int i = 0; i < kChainPoints; ++i) {
    poly.top[i] = {5.0 + 10 * i, 0.0};
    poly.bottom[i] = {5.0 + 10 * i, 20.0};
  }
  const SnakeGeometry g = geometry_from_polygon(poly);
  REQUIRE(g.centers.size() == kChainPoints);
  for (int i = 0; i < kChainPoints; ++i) {
    CHECK(g.centers[i].y == 10.0);
    CHECK(g.radii[i] == 10.0);
  }
}

TEST_CASE("geometry from a semicircular band") {
  const Point2 c{100.0, 80.0};
  const SnakeGeometry g = geometry_from_polygon(half_annulus(c, 40.0, 60.0));
  for (int i = 0; i < kChainPoints; ++i) {
    CHECK(std::abs(g.radii[i] - 10.0) <= 1e-6);
    CHECK(std::abs(distance(g.centers[i], c) - 50.0) <= 1e-6);
  }
}

TEST_CASE("degenerate geometry") {
  ControlPolygon poly;
  for (int i = 0; i < kChainPoints; ++i) {
    poly.top[i] = {5.0 + 10 * i, 0.0};
    poly.bottom[i] = {5.0 + 10 * i, 20.0};
  }
  poly.bottom[4] = poly.top[4];
  CHECK_THROWS_AS(geometry_from_polygon(poly), DegenerateGeometry);

  ControlPolygon collapsed;
  collapsed.top.fill({3.0, 0.0});
  collapsed.bottom.fill({3.0, 9.0});
  CHECK_THROWS_AS(geometry_from_polygon(collapsed), DegenerateGeometry);
}

TEST_CASE("straight unroll reproduces the axis-aligned crop") {
  std::mt19937 gen(3);
  Raster img(60, 120, 3);
  for (auto& v : img.data) v = static_cast<std::uint8_t>(gen() % 256);
  const int x0 = 10, x1 = 100, y0 = 14, r = 16;
  SnakeGeometry g;
  for (int i = 0; i < 7; ++i) {
    const double x = x0 + (x1 - x0) * i / 6.0;
    g.centers.push_back({x, double(y0 + r)});
    g.radii.push_back(r);
    g.top_side.push_back({x, double(y0)});
  }
  StripSpec spec;
  spec.out_height = 2 * r;
  const Raster out = unroll(img, g, spec);
  REQUIRE(out.height == 2 * r);
  REQUIRE(out.width == x1 - x0);
  Raster crop(2 * r, x1 - x0, 3);
  for (int row = 0; row < crop.height; ++row)
    for (int col = 0; col < crop.width; ++col)
      for (int ch = 0; ch < 3; ++ch) crop.at(row, col, ch) = img.at(y0 + row, x0 + col, ch);
  CHECK(oracle::mae(out, crop) <= 2.0 / 255.0);
}

TEST_CASE("aspect-preserving width follows arc length") {
  for (double bend : {kPi / 3, kPi / 2, 2.0, kPi}) {
    const double radius = 50.0, r = 10.0;
    const SnakeGeometry g = dense_arc({200.0, 200.0}, radius, bend, r, 4001);
    StripSpec spec;
    const int expect = static_cast<int>(std::lround(spec.out_height * radius * bend / (2 * r)));
    CHECK(strip_width(g, spec) == expect);
    const Raster out = unroll(Raster(400, 400, 1, 9), g, spec);
    CHECK(out.width == expect);
    CHECK(out.height == spec.out_height);
  }
  StripSpec fixed;
  fixed.width_mode = WidthMode::Fixed;
  fixed.fixed_width = 300;
  CHECK(strip_width(dense_arc({200.0, 200.0}, 50.0, 1.0, 10.0, 50), fixed) == 300);

  SnakeGeometry tiny;
  tiny.centers = {{0.0, 0.0}, {0.01, 0.0}};
  tiny.radii = {50.0, 50.0};
  CHECK(strip_width(tiny, {}) >= 1);
}

TEST_CASE("top chain maps to row 0") {
  // Outer half of the band red, inner half blue.
  const Point2 c{100.0, 90.0};
  Raster img(120, 200, 3, 255);
  for (int row = 0; row < img.height; ++row)
    for (int col = 0; col < img.width; ++col) {
      const double d = distance({col + 0.5, row + 0.5}, c);
      if (d >= 40 && d < 50) img.at(row, col, 2) = 255, img.at(row, col, 0) = 0, img.at(row, col, 1) = 0;
      if (d >= 50 && d <= 60) img.at(row, col, 0) = 255, img.at(row, col, 1) = 0, img.at(row, col, 2) = 0;
    }
  const ControlPolygon poly = half_annulus(c, 40.0, 60.0);
  SnakeGeometry g = geometry_from_polygon(poly);
  StripSpec spec;
  spec.out_height = 20;
  for (bool reversed : {false, true}) {
    if (reversed) {
      std::reverse(g.centers.begin(), g.centers.end());
      std::reverse(g.radii.begin(), g.radii.end());
      std::reverse(g.top_side.begin(), g.top_side.end());
    }
    const Raster out = unroll(img, g, spec);
    int red_top = 0, blue_bottom = 0;
    for (int col = 0; col < out.width; ++col) {
      red_top += out.at(1, col, 0) > 200 && out.at(1, col, 2) < 60;
      blue_bottom += out.at(out.height - 2, col, 2) > 200 && out.at(out.height - 2, col, 0) < 60;
    }
    CHECK(red_top >= out.width * 9 / 10);
    CHECK(blue_bottom >= out.width * 9 / 10);
  }
}

TEST_CASE("semicircular block text unrolls to the straight rendering") {
  BlockStyle bent;
  bent.follow_curve = true;
  StripSpec spec;
  spec.width_mode = WidthMode::Fixed;
  spec.fixed_width = 256;
  for (const char* word : {"UNROLLING", "Strawberry", "sample"}) {
    std::vector<double> adv;
    for (const auto& s : split_utf8(word)) adv.push_back(block_advance(s, 32));
    const auto straight = render_block_glyphs(word, adv, CurveSpec::straight());
    const Raster ref = to_gray(unroll(straight.image, geometry_from_polygon(*straight.record.polygon), spec));
    for (auto conc : {Concavity::Down, Concavity::Up}) {
      const auto curved = render_block_glyphs(word, adv, CurveSpec::circle(kPi, conc), bent);
      const Raster out = to_gray(unroll(curved.image, geometry_from_polygon(*curved.record.polygon), spec));
      CHECK(oracle::ncc(out, ref) >= 0.9);
    }
  }
}

TEST_CASE("smoothing keeps endpoints and averages interior points") {
  SnakeGeometry g;
  for (int i = 0; i < 6; ++i) {
    g.centers.push_back({10.0 * i, i % 2 ? 3.0 : 0.0});
    g.radii.push_back(5.0 + i);
  }
  const SnakeGeometry s = smooth(g);
  CHECK(s.centers.front() == g.centers.front());
  CHECK(s.centers.back() == g.centers.back());
  CHECK(s.centers[2].y == doctest::Approx((3.0 + 0.0 + 3.0) / 3));
  CHECK(s.radii[3] == doctest::Approx(8.0));
}

TEST_CASE("unroll output shape invariants") {
  std::mt19937 gen(8);
  std::uniform_real_distribution<double> u(20.0, 180.0);
  for (int trial = 0; trial < 50; ++trial) {
    SnakeGeometry g;
    for (int i = 0; i < 10; ++i) {
      g.centers.push_back({20.0 + 15 * i, u(gen) / 4 + 40});
      g.radii.push_back(4.0 + (gen() % 10));
    }
    StripSpec spec;
    spec.out_height = 2 + static_cast<int>(gen() % 60);
    const Raster out = unroll(Raster(120, 220, 1, 100), g, spec);
    CHECK(out.height == spec.out_height);
    CHECK(out.width >= 1);
    for (auto v : out.data) CHECK(v == 100);
  }
}
