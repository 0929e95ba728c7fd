#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <numbers>

#include "oracles.hpp"
#include "textforge/errors.hpp"
#include "textforge/preprocess.hpp"
#include "textforge/synth.hpp"

using namespace textforge;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> equal_advances(std::size_t n, double a = 10.0) { return std::vector<double>(n, a); }

std::vector<Quad> boxes_of(const std::vector<CharPlacement>& ps) {
  std::vector<Quad> out;
  for (const auto& p : ps) out.push_back(p.box);
  return out;
}

SynthConfig block_config(std::uint64_t seed) {
  SynthConfig cfg;
  cfg.glyph_source = GlyphSource::Block;
  cfg.seed = seed;
  return cfg;
}

std::shared_ptr<const SynthAssets> memory_assets(std::vector<std::string> lines) {
  return std::make_shared<const SynthAssets>(SynthAssets::from_memory(std::move(lines), {}));
}

std::shared_ptr<const SynthAssets> corpus_assets() {
  SynthConfig cfg = block_config(0);
  cfg.corpus_path = fs::path(TEXTFORGE_TEST_DATA) / "corpus.txt";
  return SynthAssets::load(cfg);
}

}  // namespace

TEST_CASE("alpha mixture") {
  Rng rng(123);
  constexpr int n = 1000000;
  double sum = 0.0;
  int positive = 0;
  for (int i = 0; i < n; ++i) {
    const double a = sample_alpha(rng);
    const bool in_neg = a >= -0.50 && a <= -0.45;
    const bool in_pos = a >= 0.50 && a <= 0.55;
    REQUIRE((in_neg || in_pos));
    positive += in_pos;
    sum += a;
  }
  CHECK(std::abs(positive / double(n) - 0.5) <= 0.005);
  CHECK(std::abs(sum / n - 0.025) <= 0.001);
}

TEST_CASE("straight layout") {
  const auto ps = layout_word("hello", equal_advances(5), CurveSpec::straight(), 20.0);
  REQUIRE(ps.size() == 5);
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(ps[i].rotation == 0.0);
    CHECK(ps[i].center.y == 0.0);
    CHECK(ps[i].center.x == doctest::Approx(-20.0 + 10.0 * i));
  }
  CHECK_THROWS_AS(layout_word("", {}, CurveSpec::straight(), 20.0), EmptyText);
}

TEST_CASE("parabola alpha 0.5 with five equal advances") {
  const auto ps = layout_word("abcde", equal_advances(5), CurveSpec::parabola(0.5), 20.0);
  const double half = 20.0;  // outer centers at +-20 px
  CHECK(ps[2].center.y == doctest::Approx(0.0));
  CHECK(ps[2].rotation == doctest::Approx(0.0));
  CHECK(ps[0].center.y / half == doctest::Approx(0.5));
  CHECK(ps[4].center.y / half == doctest::Approx(0.5));
  CHECK(ps[0].rotation == doctest::Approx(-0.7854).epsilon(1e-4));
  CHECK(ps[4].rotation == doctest::Approx(0.7854).epsilon(1e-4));
  for (std::size_t i = 0; i < 5; ++i) CHECK(ps[i].center.x == doctest::Approx(-ps[4 - i].center.x));
}

TEST_CASE("parabola tangent property over random words") {
  Rng rng(7);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 2 + rng.below(9);
    std::vector<double> adv(n);
    for (auto& a : adv) a = rng.uniform(5.0, 30.0);
    const double alpha = sample_alpha(rng);
    const auto ps = layout_word(std::string(n, 'x'), adv, CurveSpec::parabola(alpha), 20.0);
    const double half = std::max(std::abs(ps.front().center.x), std::abs(ps.back().center.x));
    for (const auto& p : ps) {
      const double x = p.center.x / half;
      CHECK(std::abs(p.rotation - std::atan(2.0 * alpha * x)) <= 1e-9);
      CHECK(std::abs(p.center.y - alpha * x * x * half) <= 1e-9);
      // Finite-difference slope of the curve the centers sit on.
      const double h = 1e-6;
      const auto y_at = [&](double u) { return alpha * (u / half) * (u / half) * half; };
      const double slope = (y_at(p.center.x + h) - y_at(p.center.x - h)) / (2 * h);
      CHECK(std::abs(std::atan(slope) - p.rotation) <= 1e-6);
    }
  }
}

TEST_CASE("circle layout, bend pi") {
  for (auto conc : {Concavity::Down, Concavity::Up}) {
    for (std::size_t n : {2u, 3u, 5u, 8u, 10u}) {
      const auto ps = layout_word(std::string(n, 'o'), equal_advances(n, 12.0), CurveSpec::circle(kPi, conc), 20.0);
      const double span = 12.0 * (n - 1);
      const double radius = span / kPi;
      const Point2 center = conc == Concavity::Down ? Point2{0.0, radius} : Point2{0.0, -radius};
      for (std::size_t i = 0; i < n; ++i) {
        CHECK(std::abs(distance(ps[i].center, center) - radius) <= 1e-6);
        if (i > 0) CHECK(std::abs(std::abs(ps[i].rotation - ps[i - 1].rotation) - kPi / (n - 1)) <= 1e-9);
      }
      // Outer characters sit on the horizontal diameter, apex at the origin.
      CHECK(std::abs(ps.front().center.y - ps.back().center.y) <= 1e-9);
      CHECK(std::abs(std::abs(ps.front().center.y) - radius) <= 1e-9);
    }
  }
}

TEST_CASE("circle rotations follow the tangent") {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 3 + rng.below(8);
    std::vector<double> adv(n);
    for (auto& a : adv) a = rng.uniform(8.0, 20.0);
    const double bend = rng.uniform(kPi / 6, 1.9 * kPi);
    const auto conc = rng.bernoulli(0.5) ? Concavity::Up : Concavity::Down;
    const auto ps = layout_word(std::string(n, 'm'), adv, CurveSpec::circle(bend, conc), 20.0);
    double total = 0.0;
    for (double a : adv) total += a;
    const double radius = (total - adv.front() / 2 - adv.back() / 2) / bend;
    const Point2 center = conc == Concavity::Down ? Point2{0.0, radius} : Point2{0.0, -radius};
    for (const auto& p : ps) {
      // Tangent is perpendicular to the radius through the character center.
      const Point2 t{std::cos(p.rotation), std::sin(p.rotation)};
      const Point2 radial = p.center - center;
      CHECK(std::abs(dot(t, radial)) / norm(radial) <= 1e-9);
      CHECK(std::abs(norm(radial) - radius) <= 1e-9 * radius);
    }
  }
}

TEST_CASE("block glyph rendering") {
  SUBCASE("AAA straight gives three equal rectangles") {
    BlockStyle style;
    const auto w = render_block_glyphs("AAA", equal_advances(3, 20.0), CurveSpec::straight(), style);
    const Raster gray = to_gray(w.image);
    const int mid = gray.height / 2;
    std::vector<std::pair<int, int>> runs;
    for (int c = 0; c < gray.width;) {
      if (gray.at(mid, c) < 128) {
        int e = c;
        while (e < gray.width && gray.at(mid, e) < 128) ++e;
        runs.push_back({c, e});
        c = e;
      } else {
        ++c;
      }
    }
    REQUIRE(runs.size() == 3);
    CHECK(runs[0].second - runs[0].first == runs[1].second - runs[1].first);
    CHECK(runs[1].second - runs[1].first == runs[2].second - runs[2].first);
    CHECK(runs[1].first - runs[0].first == 20);
    CHECK(runs[2].first - runs[1].first == 20);
    CHECK_FALSE(w.record.is_curved);
  }
  SUBCASE("rendering twice is bit-identical") {
    for (const auto& curve : {CurveSpec::straight(), CurveSpec::parabola(-0.47), CurveSpec::circle(2.0, Concavity::Up)}) {
      std::vector<double> adv;
      for (const auto& s : split_utf8("Crossing")) adv.push_back(block_advance(s, 32));
      const auto a = render_block_glyphs("Crossing", adv, curve);
      const auto b = render_block_glyphs("Crossing", adv, curve);
      CHECK(a.image == b.image);
      CHECK(a.record == b.record);
    }
  }
  CHECK_THROWS_AS(render_block_glyphs("", {}, CurveSpec::straight()), EmptyText);
}

TEST_CASE("polygons enclose the character boxes") {
  Rng rng(5);
  for (int trial = 0; trial < 400; ++trial) {
    const std::size_t n = 1 + rng.below(10);
    std::vector<double> adv(n);
    for (auto& a : adv) a = rng.uniform(6.0, 28.0);
    CurveSpec curve;
    switch (rng.below(3)) {
      case 0: curve = CurveSpec::straight(); break;
      case 1: curve = CurveSpec::parabola(sample_alpha(rng)); break;
      default:
        curve = CurveSpec::circle(rng.uniform(kPi / 6, kPi), rng.bernoulli(0.5) ? Concavity::Up : Concavity::Down);
    }
    if (n == 1 && curve.kind == CurveKind::Circle) curve = CurveSpec::straight();
    const auto ps = layout_word(std::string(n, 'w'), adv, curve, 30.0);
    const auto boxes = boxes_of(ps);
    const ControlPolygon poly = polygon_from_placements(ps, boxes);
    CHECK(is_valid(poly));
    CHECK(enclosure_violation(poly, boxes) <= 2.0);
  }
}

TEST_CASE("synthesizer eligibility and sampled parameters") {
  const auto assets = corpus_assets();
  SynthConfig cfg = block_config(42);
  const Synthesizer synth(cfg, assets);
  int curved = 0;
  constexpr int n = 600;
  for (int i = 0; i < n; ++i) {
    const auto s = synth.render(i);
    const auto& r = s.record;
    REQUIRE(r.polygon);
    REQUIRE(r.curve);
    CHECK(is_valid(*r.polygon));
    CHECK(enclosure_violation(*r.polygon, *r.char_boxes) <= 2.0);
    for (const auto& q : *r.char_boxes)
      for (const auto& v : q) {
        CHECK(v.x >= -0.5);
        CHECK(v.y >= -0.5);
        CHECK(v.x <= s.image.width + 0.5);
        CHECK(v.y <= s.image.height + 0.5);
      }
    if (r.is_curved) {
      ++curved;
      CHECK(r.text.find(' ') == std::string::npos);
      CHECK(utf8_length(r.text) <= 10);
      if (r.curve->kind == CurveKind::Parabola) {
        const double a = std::abs(r.curve->alpha);
        CHECK((a >= 0.45 && a <= 0.55));
      } else {
        REQUIRE(r.curve->kind == CurveKind::Circle);
        CHECK(r.curve->bend_angle > 0.0);
        CHECK(r.curve->bend_angle <= cfg.bend_angle_range[1]);
      }
    } else {
      CHECK(r.curve->kind == CurveKind::Straight);
    }
  }
  CHECK(curved > 0);
}

TEST_CASE("eleven-character words are never curved") {
  SynthConfig cfg = block_config(9);
  cfg.single_word_prob = 1.0;
  cfg.curve_prob_given_eligible = 1.0;
  const Synthesizer synth(cfg, memory_assets({"Comfortable"}));
  for (int i = 0; i < 300; ++i) {
    const auto r = synth.render(i).record;
    CHECK(r.text == "Comfortable");
    CHECK_FALSE(r.is_curved);
  }
  // Ten characters with the same forced draws always curve.
  const Synthesizer ten(cfg, memory_assets({"Strawberry"}));
  int curved = 0;
  for (int i = 0; i < 300; ++i) curved += ten.render(i).record.is_curved;
  CHECK(curved > 270);
}

TEST_CASE("forced straight draw") {
  SynthConfig cfg = block_config(3);
  cfg.single_word_prob = 1.0;
  cfg.curve_prob_given_eligible = 0.0;
  const Synthesizer synth(cfg, memory_assets({"hi"}));
  for (int i = 0; i < 50; ++i) {
    const auto r = synth.render(i).record;
    CHECK_FALSE(r.is_curved);
    REQUIRE(r.char_boxes);
    REQUIRE(r.char_boxes->size() == 2);
    for (const auto& q : *r.char_boxes) {
      CHECK(q[0].y == doctest::Approx(q[1].y));
      CHECK(q[3].y == doctest::Approx(q[2].y));
    }
  }
}

TEST_CASE("synthesizer determinism") {
  const auto assets = corpus_assets();
  const Synthesizer a(block_config(77), assets);
  const Synthesizer b(block_config(77), corpus_assets());
  const Synthesizer c(block_config(78), assets);
  int differs = 0;
  for (std::uint64_t i : {0ull, 1ull, 17ull, 999ull, 123456ull}) {
    const auto x = a.render(i);
    const auto y = b.render(i);
    CHECK(x.image == y.image);
    CHECK(x.record == y.record);
    differs += !(c.render(i).image == x.image);
  }
  CHECK(differs >= 4);
}

TEST_CASE("curve probability calibration") {
  const auto assets = corpus_assets();
  SynthConfig cfg = block_config(0);
  const double p = calibrate_curve_prob(0.10, cfg, *assets);
  CHECK(p * cfg.single_word_prob * assets->eligible_fraction(10) == doctest::Approx(0.10));
  CHECK(calibrate_curve_prob(1.0, cfg, *assets) == 1.0);
}

TEST_CASE("missing assets") {
  SynthConfig cfg;
  cfg.fonts_dir = "/nonexistent/fonts";
  cfg.corpus_path = fs::path(TEXTFORGE_TEST_DATA) / "corpus.txt";
  CHECK_THROWS_AS(Synthesizer{cfg}, AssetError);
  cfg.glyph_source = GlyphSource::Block;
  cfg.corpus_path = "/nonexistent/corpus.txt";
  CHECK_THROWS_AS(Synthesizer{cfg}, AssetError);
}

TEST_CASE("font rendering" * doctest::skip(!fs::exists("/usr/share/fonts/truetype/dejavu"))) {
  SynthConfig cfg;
  cfg.fonts_dir = "/usr/share/fonts/truetype/dejavu";
  cfg.corpus_path = fs::path(TEXTFORGE_TEST_DATA) / "corpus.txt";
  cfg.seed = 2;
  const Synthesizer synth(cfg);
  for (int i = 0; i < 40; ++i) {
    const auto s = synth.render(i);
    REQUIRE(s.record.polygon);
    CHECK(is_valid(*s.record.polygon));
    CHECK(enclosure_violation(*s.record.polygon, *s.record.char_boxes) <= 2.0);
    CHECK(s.image.channels == 3);
    // Something was drawn: the image is not a flat field.
    const Raster g = to_gray(s.image);
    const auto [lo, hi] = std::minmax_element(g.data.begin(), g.data.end());
    CHECK(*hi - *lo >= 40);
  }
  CHECK(synth.render(5).image == Synthesizer(cfg).render(5).image);
}

TEST_CASE("curve-following blocks bend with the baseline") {
  BlockStyle style;
  style.follow_curve = true;
  std::vector<double> adv;
  for (const auto& s : split_utf8("Bending")) adv.push_back(block_advance(s, 32));
  for (auto conc : {Concavity::Down, Concavity::Up}) {
    const auto w = render_block_glyphs("Bending", adv, CurveSpec::circle(kPi, conc), style);
    REQUIRE(w.record.polygon);
    CHECK(is_valid(*w.record.polygon));
    CHECK(enclosure_violation(*w.record.polygon, *w.record.char_boxes) <= 2.0);
    CHECK(w.record.is_curved);
    // Every ink pixel lies inside the band's outline.
    const auto ring = outline(*w.record.polygon);
    const Raster g = to_gray(w.image);
    int outside = 0;
    for (int r = 0; r < g.height; ++r)
      for (int c = 0; c < g.width; ++c)
        if (g.at(r, c) < 128 && distance_to_ring(ring, {c + 0.5, r + 0.5}) > 1.0 &&
            !point_in_polygon(ring, {c + 0.5, r + 0.5}))
          ++outside;
    CHECK(outside == 0);
    CHECK(render_block_glyphs("Bending", adv, CurveSpec::circle(kPi, conc), style).image == w.image);
  }
  // Straight text is unaffected by the flag.
  CHECK(render_block_glyphs("Bending", adv, CurveSpec::straight(), style).image ==
        render_block_glyphs("Bending", adv, CurveSpec::straight()).image);
}

TEST_CASE("circle render rectifies back to the straight render") {
  BlockStyle bent;
  bent.follow_curve = true;
  const GridSpec spec;
  for (const char* word : {"RECTIFY", "Strawberry", "knowledge"}) {
    std::vector<double> adv;
    for (const auto& s : split_utf8(word)) adv.push_back(block_advance(s, 32));
    const auto straight = render_block_glyphs(word, adv, CurveSpec::straight());
    const Raster ref = to_gray(tps_rectify(straight.image, *straight.record.polygon, spec));
    for (auto conc : {Concavity::Down, Concavity::Up}) {
      const auto curved = render_block_glyphs(word, adv, CurveSpec::circle(kPi, conc), bent);
      const Raster rect = to_gray(tps_rectify(curved.image, *curved.record.polygon, spec));
      const double rectified = oracle::ncc(rect, ref);
      const double baseline = oracle::ncc(to_gray(fixed_resize(curved.image)), ref);
      CHECK(rectified >= 0.85);
      CHECK(rectified > baseline);
    }
  }
}
