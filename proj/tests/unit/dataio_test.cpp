#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "textforge/dataio.hpp"
#include "textforge/errors.hpp"

using namespace textforge;
namespace fs = std::filesystem;

namespace {

ControlPolygon rect_polygon(double x0, double y0, double x1, double y1) {
  ControlPolygon poly;
  for (int i = 0; i < kChainPoints; ++i) {
    const double x = x0 + (x1 - x0) * i / (kChainPoints - 1);
    poly.top[i] = {x, y0};
    poly.bottom[i] = {x, y1};
  }
  return poly;
}

SampleRecord full_record() {
  SampleRecord rec;
  rec.id = "synth_000042";
  rec.image_path = "images/synth_000042.png";
  rec.text = "Bend";
  ControlPolygon poly;
  for (int i = 0; i < kChainPoints; ++i) {
    poly.top[i] = {3.25 + 11.5 * i, 7.0 + 0.3 * i * i};
    poly.bottom[i] = {3.25 + 11.5 * i, 40.125 + 0.3 * i * i};
  }
  rec.polygon = poly;
  rec.char_boxes = std::vector<Quad>{{Point2{1, 2}, {3, 2}, {3, 4}, {1, 4}}, {Point2{5, 6}, {7, 6}, {7, 8.5}, {5, 8.5}}};
  rec.curve = CurveSpec::circle(2.5, Concavity::Down);
  rec.is_curved = true;
  return rec;
}

}  // namespace

TEST_CASE("crop of an axis-aligned rectangle") {
  Raster img(100, 100, 3);
  for (int r = 0; r < 100; ++r)
    for (int c = 0; c < 100; ++c) img.at(r, c, 0) = static_cast<std::uint8_t>(r + c);
  const Cropped out = crop(img, rect_polygon(10, 10, 50, 30));
  CHECK(out.image.width == 40);
  CHECK(out.image.height == 20);
  CHECK(out.offset_x == 10);
  CHECK(out.offset_y == 10);
  CHECK(out.image.at(0, 0, 0) == 20);
  CHECK(out.image.at(19, 39, 0) == 29 + 49);
  CHECK(out.polygon.top[0].x == 0.0);
  CHECK(out.polygon.bottom[9].y == 20.0);
}

TEST_CASE("crop margin and clamping") {
  const Raster img(60, 80, 1, 5);
  const Cropped m = crop(img, rect_polygon(10, 10, 50, 30), 4);
  CHECK(m.offset_x == 6);
  CHECK(m.image.width == 48);
  CHECK(m.image.height == 28);

  const Cropped edge = crop(img, rect_polygon(-15, -5, 30, 70), 2);
  CHECK(edge.offset_x == 0);
  CHECK(edge.offset_y == 0);
  CHECK(edge.image.width == 32);
  CHECK(edge.image.height == 60);
  CHECK(edge.polygon.top[0].x == -15.0);

  CHECK_THROWS_AS(crop(img, rect_polygon(200, 200, 240, 220)), EmptyIntersection);
}

TEST_CASE("crop matches a brute-force bounding box") {
  std::mt19937 gen(10);
  std::uniform_real_distribution<double> u(-20.0, 140.0);
  const Raster img(120, 130, 1, 1);
  for (int trial = 0; trial < 300; ++trial) {
    ControlPolygon poly;
    for (int i = 0; i < kChainPoints; ++i) {
      poly.top[i] = {u(gen), u(gen)};
      poly.bottom[i] = {u(gen), u(gen)};
    }
    const int margin = static_cast<int>(gen() % 6);
    double x0 = 1e9, y0 = 1e9, x1 = -1e9, y1 = -1e9;
    for (const auto* chain : {&poly.top, &poly.bottom})
      for (const Point2& p : *chain) {
        x0 = std::min(x0, p.x), y0 = std::min(y0, p.y);
        x1 = std::max(x1, p.x), y1 = std::max(y1, p.y);
      }
    const int ex0 = std::clamp(int(std::floor(x0)) - margin, 0, img.width);
    const int ey0 = std::clamp(int(std::floor(y0)) - margin, 0, img.height);
    const int ex1 = std::clamp(int(std::ceil(x1)) + margin, 0, img.width);
    const int ey1 = std::clamp(int(std::ceil(y1)) + margin, 0, img.height);
    if (ex1 <= ex0 || ey1 <= ey0) {
      CHECK_THROWS_AS(crop(img, poly, margin), EmptyIntersection);
      continue;
    }
    const Cropped c = crop(img, poly, margin);
    CHECK(c.offset_x == ex0);
    CHECK(c.offset_y == ey0);
    CHECK(c.image.width == ex1 - ex0);
    CHECK(c.image.height == ey1 - ey0);
    CHECK(c.polygon.top[3].x == doctest::Approx(poly.top[3].x - ex0));
  }
}

TEST_CASE("mix frequencies") {
  MixConfig cfg{0.15, 77};
  constexpr std::size_t n = 100000;
  const auto draws = mix_draws(500, 9000, cfg, n);
  REQUIRE(draws.size() == n);
  std::size_t real = 0;
  for (const auto& d : draws) {
    if (d.pool == Pool::Real) {
      ++real;
      CHECK(d.index < 500);
    } else {
      CHECK(d.index < 9000);
    }
  }
  CHECK(std::abs(real / double(n) - 0.15) <= 0.005);
  CHECK(mix_draws(500, 9000, cfg, 1000).size() == 1000);
}

TEST_CASE("mix extremes and errors") {
  for (const auto& d : mix_draws(10, 10, {0.0, 1}, 5000)) CHECK(d.pool == Pool::Synthetic);
  for (const auto& d : mix_draws(10, 10, {1.0, 1}, 5000)) CHECK(d.pool == Pool::Real);
  CHECK_NOTHROW(mix_draws(0, 10, {0.0, 1}, 10));
  CHECK_NOTHROW(mix_draws(10, 0, {1.0, 1}, 10));
  CHECK_THROWS_AS(mix_draws(0, 10, {0.15, 1}, 10), EmptyPool);
  CHECK_THROWS_AS(mix_draws(10, 0, {0.15, 1}, 10), EmptyPool);
  CHECK_THROWS_AS(mix_draws(10, 10, {1.5, 1}, 10), std::invalid_argument);
}

TEST_CASE("mix is deterministic per seed") {
  const auto a = mix_draws(50, 70, {0.3, 9}, 2000);
  const auto b = mix_draws(50, 70, {0.3, 9}, 2000);
  const auto c = mix_draws(50, 70, {0.3, 10}, 2000);
  auto same = [](const auto& x, const auto& y) {
    return std::equal(x.begin(), x.end(), y.begin(), y.end(),
                      [](const MixDraw& p, const MixDraw& q) { return p.pool == q.pool && p.index == q.index; });
  };
  CHECK(same(a, b));
  CHECK_FALSE(same(a, c));

  Manifest real{"real", Split::Train, {}}, synth{"synth", Split::Train, {}};
  for (int i = 0; i < 3; ++i) real.records.push_back({"r" + std::to_string(i), "r.png", "x"});
  for (int i = 0; i < 4; ++i) synth.records.push_back({"s" + std::to_string(i), "s.png", "y"});
  const auto stream = mix_stream(real, synth, {0.5, 3}, 100);
  const auto draws = mix_draws(3, 4, {0.5, 3}, 100);
  for (std::size_t i = 0; i < draws.size(); ++i)
    CHECK(stream[i].id == (draws[i].pool == Pool::Real ? "r" : "s") + std::to_string(draws[i].index));
}

TEST_CASE("label codec") {
  const LabelCodec codec;
  CHECK(codec.alphabet().size() == 62);
  CHECK(codec.encode("0") == std::vector<int>{0, 62});
  CHECK(codec.encode("Az") == std::vector<int>{10, 61, 62});
  CHECK(codec.encode("") == std::vector<int>{62});
  CHECK(codec.decode({17, 14, 62, 3, 4}) == "HE");
  CHECK(codec.decode({1, 2}) == "12");
  CHECK_THROWS_AS(codec.decode({63}), std::out_of_range);

  try {
    codec.encode("a-b c-");
    FAIL("expected UnsupportedSymbol");
  } catch (const UnsupportedSymbol& e) {
    const std::string what = e.what();
    CHECK(what.find("'- '") != std::string::npos);
  }
}

TEST_CASE("label codec round trip") {
  const LabelCodec codec;
  std::mt19937 gen(31);
  for (int trial = 0; trial < 10000; ++trial) {
    std::string s;
    const int len = static_cast<int>(gen() % 25);
    for (int i = 0; i < len; ++i) s.push_back(codec.alphabet()[gen() % 62]);
    const auto enc = codec.encode(s);
    CHECK(enc.size() == s.size() + 1);
    CHECK(enc.back() == LabelCodec::kEos);
    CHECK(codec.decode(enc) == s);
  }
}

TEST_CASE("manifest round trip") {
  Manifest m{"synth", Split::Train, {}};
  m.records.push_back(full_record());
  SampleRecord bare;
  bare.id = "real_1";
  bare.image_path = "a b/c.png";
  bare.text = "caf\xC3\xA9 \"quoted\"";
  m.records.push_back(bare);
  SampleRecord para = full_record();
  para.id = "p";
  para.curve = CurveSpec::parabola(-0.3);
  para.char_boxes.reset();
  m.records.push_back(para);

  const std::string text = serialize_manifest(m);
  CHECK(std::count(text.begin(), text.end(), '\n') == 3);
  CHECK(parse_manifest(text, "synth") == m);

  // Records carrying only the flat 20-point list rebuild both chains from it.
  const std::string fid = R"({"id":"f","image":"f.png","text":"t","polygon":[[0,0],[10,0],[20,0],[30,0],[40,0],[50,0],[60,0],[70,0],[80,0],[90,0],[0,10],[10,10],[20,10],[30,10],[40,10],[50,10],[60,10],[70,10],[80,10],[90,10]]})";
  const SampleRecord f = parse_record(fid);
  REQUIRE(f.polygon);
  CHECK(f.polygon->top[0] == Point2{0, 0});
  CHECK(f.polygon->bottom[9] == Point2{90, 10});
  CHECK_FALSE(f.curve);
}

TEST_CASE("manifest errors") {
  CHECK_THROWS_AS(parse_record("not json"), ManifestError);
  CHECK_THROWS_AS(parse_record("[1,2]"), ManifestError);
  CHECK_THROWS_AS(parse_record(R"({"image":"x.png"})"), ManifestError);
  CHECK_THROWS_AS(parse_record(R"({"id":"a","image":"x","top":[[0,0]],"bottom":[[0,1]]})"), ManifestError);
  CHECK_THROWS_AS(parse_record(R"({"id":"a","image":"x","curve":{"kind":"spiral"}})"), ManifestError);
  try {
    parse_manifest("{\"id\":\"a\",\"image\":\"x\"}\n\n{oops}\n");
    FAIL("expected ManifestError");
  } catch (const ManifestError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
}

TEST_CASE("manifest files and validation") {
  const fs::path dir = fs::temp_directory_path() / "textforge_dataio_test";
  fs::remove_all(dir);
  Manifest m{"set", Split::Test, {full_record()}};
  write_manifest(dir / "set.jsonl", m);
  const Manifest back = read_manifest(dir / "set.jsonl", Split::Test);
  CHECK(back == m);

  CHECK_THROWS_AS(validate_manifest(m, dir), ManifestError);
  fs::create_directories(dir / "images");
  std::ofstream(dir / m.records[0].image_path) << "x";
  CHECK_NOTHROW(validate_manifest(m, dir));
  m.records.push_back(m.records[0]);
  CHECK_THROWS_AS(validate_manifest(m, dir), ManifestError);
  CHECK_THROWS_AS(read_manifest(dir / "missing.jsonl"), ManifestError);
  fs::remove_all(dir);
}
