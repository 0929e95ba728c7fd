#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <cstring>
#include <optional>

#include "textforge/dataio.hpp"
#include "textforge/errors.hpp"
#include "textforge/evalkit.hpp"
#include "textforge/geometry.hpp"
#include "textforge/preprocess.hpp"
#include "textforge/snake.hpp"
#include "textforge/synth.hpp"

namespace py = pybind11;
using namespace textforge;

namespace {

using U8Array = py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>;
using F64Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

// HxW or HxWxC uint8 arrays; the copy keeps Python buffers independent of
// library-owned storage.
Raster to_raster(const U8Array& a) {
  if (a.ndim() != 2 && a.ndim() != 3) throw py::value_error("image must be HxW or HxWxC uint8");
  const int c = a.ndim() == 3 ? static_cast<int>(a.shape(2)) : 1;
  Raster r(static_cast<int>(a.shape(0)), static_cast<int>(a.shape(1)), c);
  std::memcpy(r.data.data(), a.data(), r.data.size());
  return r;
}

py::array to_array(const Raster& r) {
  std::vector<py::ssize_t> shape{r.height, r.width};
  if (r.channels != 1) shape.push_back(r.channels);
  U8Array a(shape);
  std::memcpy(a.mutable_data(), r.data.data(), r.data.size());
  return a;
}

ControlPolygon to_polygon(const F64Array& a) {
  if (a.ndim() != 2 || a.shape(0) != kFiducials || a.shape(1) != 2)
    throw py::value_error("polygon must be a 20x2 array: top chain then bottom chain");
  Fiducials f{};
  for (int i = 0; i < kFiducials; ++i) f[i] = {a.at(i, 0), a.at(i, 1)};
  return ControlPolygon::from_fiducials(f);
}

py::array from_polygon(const ControlPolygon& p) {
  F64Array a({kFiducials, 2});
  const Fiducials f = p.fiducials();
  for (int i = 0; i < kFiducials; ++i) a.mutable_at(i, 0) = f[i].x, a.mutable_at(i, 1) = f[i].y;
  return a;
}

CurveSpec make_curve(const std::string& kind, double alpha, double bend, const std::string& concavity) {
  if (kind == "straight") return CurveSpec::straight();
  if (kind == "parabola") return CurveSpec::parabola(alpha);
  if (kind == "circle") {
    if (concavity != "up" && concavity != "down") throw py::value_error("concavity must be 'up' or 'down'");
    return CurveSpec::circle(bend, concavity == "up" ? Concavity::Up : Concavity::Down);
  }
  throw py::value_error("curve kind must be straight, parabola or circle");
}

std::vector<double> default_advances(std::string_view text, int height) {
  std::vector<double> adv;
  for (const auto& s : split_utf8(text)) adv.push_back(block_advance(s, height));
  return adv;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Curved scene-text synthesis, rectification and evaluation";
  m.attr("__version__") = TEXTFORGE_VERSION;

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<SingularSystem>(m, "SingularSystem", base.ptr());
  py::register_exception<DegenerateChain>(m, "DegenerateChain", base.ptr());
  py::register_exception<InvalidPolygon>(m, "InvalidPolygon", base.ptr());
  py::register_exception<EmptyText>(m, "EmptyText", base.ptr());
  py::register_exception<AssetError>(m, "AssetError", base.ptr());
  py::register_exception<LayoutOverflow>(m, "LayoutOverflow", base.ptr());
  py::register_exception<NonSquareInput>(m, "NonSquareInput", base.ptr());
  py::register_exception<DegenerateGeometry>(m, "DegenerateGeometry", base.ptr());
  py::register_exception<EmptyIntersection>(m, "EmptyIntersection", base.ptr());
  py::register_exception<EmptyPool>(m, "EmptyPool", base.ptr());
  py::register_exception<UnsupportedSymbol>(m, "UnsupportedSymbol", base.ptr());
  py::register_exception<ManifestError>(m, "ManifestError", base.ptr());
  py::register_exception<LengthMismatch>(m, "LengthMismatch", base.ptr());
  py::register_exception<EmptyAfterFilter>(m, "EmptyAfterFilter", base.ptr());
  py::register_exception<EmptyInput>(m, "EmptyInput", base.ptr());

  // geometry
  m.def(
      "canonical_fiducials",
      [](int out_height, int out_width, double margin_x, double margin_y) {
        return from_polygon(ControlPolygon::from_fiducials(
            canonical_fiducials({out_height, out_width, margin_x, margin_y})));
      },
      py::arg("out_height") = 64, py::arg("out_width") = 256, py::arg("margin_x") = 0.05,
      py::arg("margin_y") = 0.05);
  m.def(
      "tps_map",
      [](const F64Array& dst, const F64Array& src, const F64Array& query, double lambda_, double aspect) {
        const TpsWarp w = tps_solve(to_polygon(dst).fiducials(), to_polygon(src).fiducials(), lambda_, aspect);
        if (query.ndim() != 2 || query.shape(1) != 2) throw py::value_error("query must be Nx2");
        F64Array out({query.shape(0), py::ssize_t{2}});
        for (py::ssize_t i = 0; i < query.shape(0); ++i) {
          const Point2 p = w({query.at(i, 0), query.at(i, 1)});
          out.mutable_at(i, 0) = p.x, out.mutable_at(i, 1) = p.y;
        }
        return out;
      },
      py::arg("dst"), py::arg("src"), py::arg("query"), py::arg("lambda_") = 0.0, py::arg("aspect") = 1.0,
      "Solve the spline taking dst fiducials to src fiducials and evaluate it at query points.");
  m.def(
      "tps_rectify",
      [](const U8Array& img, const F64Array& polygon, int out_height, int out_width, bool isotropic, double lambda_) {
        GridSpec spec;
        spec.out_height = out_height;
        spec.out_width = out_width;
        spec.isotropic = isotropic;
        const Raster in = to_raster(img);
        const ControlPolygon poly = to_polygon(polygon);
        Raster out;
        {
          py::gil_scoped_release release;
          out = tps_rectify(in, poly, spec, lambda_);
        }
        return to_array(out);
      },
      py::arg("image"), py::arg("polygon"), py::arg("out_height") = 64, py::arg("out_width") = 256,
      py::arg("isotropic") = true, py::arg("lambda_") = 0.0);
  m.def(
      "resample_chain",
      [](const F64Array& pts, int n) {
        std::vector<Point2> chain;
        for (py::ssize_t i = 0; i < pts.shape(0); ++i) chain.push_back({pts.at(i, 0), pts.at(i, 1)});
        const auto res = resample_chain(chain, n);
        F64Array out({static_cast<py::ssize_t>(res.size()), py::ssize_t{2}});
        for (std::size_t i = 0; i < res.size(); ++i) out.mutable_at(i, 0) = res[i].x, out.mutable_at(i, 1) = res[i].y;
        return out;
      },
      py::arg("points"), py::arg("n"));

  // preprocess
  m.def("fixed_resize", [](const U8Array& img) { return to_array(fixed_resize(to_raster(img))); }, py::arg("image"));
  m.def(
      "normalize",
      [](const U8Array& img) {
        const NormalizedRaster n = normalize(to_raster(img));
        py::array_t<float> out(std::vector<py::ssize_t>(img.shape(), img.shape() + img.ndim()));
        std::memcpy(out.mutable_data(), n.data.data(), n.data.size() * sizeof(float));
        return out;
      },
      py::arg("image"));
  m.def(
      "squarize",
      [](const U8Array& img, int side) {
        const Squarized sq = squarize(to_raster(img), side);
        const Placement& p = sq.placement;
        py::dict place;
        place["offset_x"] = p.offset_x;
        place["offset_y"] = p.offset_y;
        place["content_width"] = p.content_width;
        place["content_height"] = p.content_height;
        return py::make_tuple(to_array(sq.image), place);
      },
      py::arg("image"), py::arg("side") = 256);
  m.def(
      "rotate_k90", [](const U8Array& img, int k) { return to_array(rotate_k90(to_raster(img), k)); },
      py::arg("image"), py::arg("k"));
  m.def(
      "draw_rotations",
      [](double p, std::uint64_t seed, std::size_t n) {
        Rng rng(seed);
        std::vector<int> out(n);
        for (auto& k : out) k = draw_rotation({p}, rng);
        return out;
      },
      py::arg("prob_each"), py::arg("seed"), py::arg("n"));

  // snake
  m.def(
      "snake_unroll",
      [](const U8Array& img, const F64Array& polygon, int out_height, std::optional<int> width, bool smooth_line) {
        StripSpec spec;
        spec.out_height = out_height;
        spec.smooth_centerline = smooth_line;
        if (width) spec.width_mode = WidthMode::Fixed, spec.fixed_width = *width;
        return to_array(unroll(to_raster(img), geometry_from_polygon(to_polygon(polygon)), spec));
      },
      py::arg("image"), py::arg("polygon"), py::arg("out_height") = 64, py::arg("width") = py::none(),
      py::arg("smooth") = false);

  // synth
  m.def(
      "sample_alpha",
      [](std::uint64_t seed, std::size_t n) {
        Rng rng(seed);
        std::vector<double> out(n);
        for (auto& a : out) a = sample_alpha(rng);
        return out;
      },
      py::arg("seed"), py::arg("n"));
  m.def(
      "render_block_word",
      [](const std::string& text, const std::string& kind, double alpha, double bend, const std::string& concavity,
         bool follow_curve, int height) {
        BlockStyle style;
        style.height = height;
        style.follow_curve = follow_curve;
        const RenderedWord w =
            render_block_glyphs(text, default_advances(text, height), make_curve(kind, alpha, bend, concavity), style);
        return py::make_tuple(to_array(w.image), serialize_record(w.record));
      },
      py::arg("text"), py::arg("kind") = "straight", py::arg("alpha") = 0.0, py::arg("bend_angle") = 0.0,
      py::arg("concavity") = "down", py::arg("follow_curve") = false, py::arg("height") = 32);
  m.def(
      "synth_samples",
      [](const std::filesystem::path& corpus, std::uint64_t seed, std::size_t start, std::size_t count,
         const std::optional<std::filesystem::path>& fonts, const std::optional<std::filesystem::path>& backgrounds,
         std::optional<double> curved_frac_target) {
        SynthConfig cfg;
        cfg.corpus_path = corpus;
        cfg.fonts_dir = fonts.value_or(std::filesystem::path{});
        cfg.backgrounds_dir = backgrounds.value_or(std::filesystem::path{});
        cfg.glyph_source = fonts ? GlyphSource::Font : GlyphSource::Block;
        cfg.seed = seed;
        const auto assets = SynthAssets::load(cfg);
        if (curved_frac_target) cfg.curve_prob_given_eligible = calibrate_curve_prob(*curved_frac_target, cfg, *assets);
        const Synthesizer synth(cfg, assets);
        py::list out;
        for (std::size_t i = start; i < start + count; ++i) {
          const SynthSample s = synth.render(i);
          out.append(py::make_tuple(to_array(s.image), serialize_record(s.record)));
        }
        return out;
      },
      py::arg("corpus"), py::arg("seed") = 0, py::arg("start") = 0, py::arg("count") = 1,
      py::arg("fonts") = py::none(), py::arg("backgrounds") = py::none(),
      py::arg("curved_frac_target") = py::none());

  // dataio
  m.def(
      "crop",
      [](const U8Array& img, const F64Array& polygon, int margin) {
        const Cropped c = crop(to_raster(img), to_polygon(polygon), margin);
        return py::make_tuple(to_array(c.image), from_polygon(c.polygon), c.offset_x, c.offset_y);
      },
      py::arg("image"), py::arg("polygon"), py::arg("margin") = 0);
  m.def(
      "mix_draws",
      [](std::size_t real_size, std::size_t synth_size, double ratio, std::uint64_t seed, std::size_t n) {
        std::vector<std::pair<bool, std::size_t>> out;
        for (const MixDraw& d : mix_draws(real_size, synth_size, {ratio, seed}, n))
          out.emplace_back(d.pool == Pool::Real, d.index);
        return out;
      },
      py::arg("real_size"), py::arg("synth_size"), py::arg("ratio"), py::arg("seed"), py::arg("n"),
      "List of (is_real, index) draws.");
  m.def("encode_label", [](const std::string& s) { return LabelCodec().encode(s); }, py::arg("text"));
  m.def("decode_label", [](const std::vector<int>& idx) { return LabelCodec().decode(idx); }, py::arg("indices"));

  // evalkit
  m.def(
      "word_accuracy",
      [](const std::vector<std::string>& preds, const std::vector<std::string>& gts, bool case_sensitive,
         bool alnum_only, int min_len) {
        return word_accuracy(preds, gts, {case_sensitive, alnum_only, min_len});
      },
      py::arg("predictions"), py::arg("ground_truths"), py::arg("case_sensitive") = false,
      py::arg("alnum_only") = true, py::arg("min_len") = 0);
  m.def(
      "micro_average",
      [](const std::vector<std::pair<std::size_t, double>>& rows) {
        std::vector<EvalRow> r;
        for (const auto& [size, acc] : rows) r.push_back({"", size, acc});
        return micro_average(r);
      },
      py::arg("rows"), "rows: (size, accuracy) pairs");
  m.def("vote", [](const std::vector<std::string>& p) { return vote(p); }, py::arg("predictions"));
}
