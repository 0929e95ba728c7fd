#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include <fmt/format.h>

#include "glyph_rasterizer.hpp"
#include "textforge/errors.hpp"
#include "textforge/image_io.hpp"
#include "textforge/synth.hpp"

namespace textforge {

namespace fs = std::filesystem;

void SynthConfig::validate() const {
  const auto prob = [](double p, const char* name) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument(fmt::format("SynthConfig: {} must lie in [0, 1]", name));
  };
  prob(single_word_prob, "single_word_prob");
  prob(curve_prob_given_eligible, "curve_prob_given_eligible");
  prob(circle_vs_parabola_prob, "circle_vs_parabola_prob");
  if (count < 1) throw std::invalid_argument("SynthConfig: count must be >= 1");
  if (!(bend_angle_range[0] > 0.0 && bend_angle_range[0] <= bend_angle_range[1] &&
        bend_angle_range[1] < 2.0 * std::numbers::pi))
    throw std::invalid_argument("SynthConfig: bend_angle_range must lie in (0, 2pi)");
  if (font_px_range[0] < min_font_px || font_px_range[0] > font_px_range[1] || min_font_px < 4)
    throw std::invalid_argument("SynthConfig: bad font size range");
}

namespace {

std::vector<fs::path> list_files(const fs::path& dir, std::initializer_list<std::string_view> exts,
                                 const char* what) {
  if (!fs::is_directory(dir)) throw AssetError(fmt::format("{} directory not found: {}", what, dir.string()));
  std::vector<fs::path> out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    std::string ext = entry.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    if (std::find(exts.begin(), exts.end(), ext) != exts.end()) out.push_back(entry.path());
  }
  std::sort(out.begin(), out.end());
  if (out.empty()) throw AssetError(fmt::format("no {} files in {}", what, dir.string()));
  return out;
}

std::string clean_token(std::string_view tok) {
  const auto is_punct = [](char c) {
    const auto u = static_cast<unsigned char>(c);
    return u < 128 && (std::ispunct(u) != 0);
  };
  while (!tok.empty() && is_punct(tok.front())) tok.remove_prefix(1);
  while (!tok.empty() && is_punct(tok.back())) tok.remove_suffix(1);
  for (char c : tok)
    if (static_cast<unsigned char>(c) < 32) return {};
  return std::string(tok);
}

}  // namespace

SynthAssets::SynthAssets() = default;
SynthAssets::~SynthAssets() = default;
SynthAssets::SynthAssets(SynthAssets&&) noexcept = default;
SynthAssets& SynthAssets::operator=(SynthAssets&&) noexcept = default;

std::size_t SynthAssets::font_count() const { return fonts_ ? fonts_->size() : 0; }

void SynthAssets::set_corpus(const std::vector<std::string>& lines) {
  for (const auto& line : lines) {
    std::vector<std::string> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
      std::size_t j = i;
      while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
      if (j > i) {
        std::string tok = clean_token(std::string_view(line).substr(i, j - i));
        if (!tok.empty()) tokens.push_back(std::move(tok));
      }
      i = j;
    }
    if (tokens.empty()) continue;
    words_.insert(words_.end(), tokens.begin(), tokens.end());
    lines_.push_back(std::move(tokens));
  }
  if (words_.empty()) throw AssetError("corpus contains no words");
}

SynthAssets SynthAssets::from_memory(std::vector<std::string> corpus_lines, std::vector<Raster> backgrounds) {
  SynthAssets assets;
  assets.set_corpus(corpus_lines);
  assets.backgrounds_ = std::move(backgrounds);
  return assets;
}

std::shared_ptr<const SynthAssets> SynthAssets::load(const SynthConfig& config) {
  auto assets = std::make_shared<SynthAssets>();
  std::ifstream in(config.corpus_path);
  if (!in) throw AssetError("cannot read corpus " + config.corpus_path.string());
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) lines.push_back(std::move(line));
  assets->set_corpus(lines);

  if (config.glyph_source == GlyphSource::Font)
    assets->fonts_ = std::make_unique<GlyphRasterizer>(list_files(config.fonts_dir, {".ttf", ".otf"}, "font"));
  if (!config.backgrounds_dir.empty())
    for (const auto& path : list_files(config.backgrounds_dir, {".png", ".jpg", ".jpeg"}, "background"))
      assets->backgrounds_.push_back(read_image(path));
  return assets;
}

double SynthAssets::eligible_fraction(int max_len) const {
  const auto eligible = std::count_if(words_.begin(), words_.end(), [&](const std::string& w) {
    return utf8_length(w) <= static_cast<std::size_t>(max_len);
  });
  return static_cast<double>(eligible) / static_cast<double>(words_.size());
}

double calibrate_curve_prob(double target, const SynthConfig& config, const SynthAssets& assets) {
  const double reachable = config.single_word_prob * assets.eligible_fraction(config.max_curved_len);
  if (!(reachable > 0.0)) return 0.0;
  return std::clamp(target / reachable, 0.0, 1.0);
}

Synthesizer::Synthesizer(SynthConfig config, std::shared_ptr<const SynthAssets> assets)
    : config_(std::move(config)), assets_(std::move(assets)) {
  config_.validate();
  if (!assets_) throw AssetError("synthesizer has no assets");
  if (config_.glyph_source == GlyphSource::Font && assets_->font_count() == 0)
    throw AssetError("font glyphs requested but no fonts loaded");
}

Synthesizer::Synthesizer(SynthConfig config) : Synthesizer(config, SynthAssets::load(config)) {}

namespace {

std::string pick_text(const SynthAssets& assets, Rng& rng, bool single) {
  if (single) return assets.words()[rng.below(assets.words().size())];
  const auto& line = assets.lines()[rng.below(assets.lines().size())];
  const std::size_t want = static_cast<std::size_t>(rng.uniform_int(2, 4));
  const std::size_t n = std::min(want, line.size());
  const std::size_t start = rng.below(line.size() - n + 1);
  std::string text;
  for (std::size_t i = 0; i < n; ++i) text += (i ? " " : "") + line[start + i];
  if (n < 2) text += " " + assets.words()[rng.below(assets.words().size())];
  return text;
}

Raster procedural_background(int height, int width, Rng& rng) {
  std::array<double, 3> a{}, b{};
  for (auto& v : a) v = rng.uniform(0.0, 255.0);
  for (auto& v : b) v = rng.uniform(0.0, 255.0);
  const double angle = rng.uniform(0.0, 2.0 * std::numbers::pi);
  const double dx = std::cos(angle), dy = std::sin(angle);
  const double extent = std::abs(dx) * width + std::abs(dy) * height;
  Raster out(height, width, 3);
  for (int r = 0; r < height; ++r)
    for (int c = 0; c < width; ++c) {
      const double t = std::clamp(((c - width / 2.0) * dx + (r - height / 2.0) * dy) / extent + 0.5, 0.0, 1.0);
      const double noise = rng.uniform(-6.0, 6.0);
      for (int ch = 0; ch < 3; ++ch) out.at(r, c, ch) = to_u8(a[ch] + (b[ch] - a[ch]) * t + noise);
    }
  return out;
}

double mean_luma(const Raster& img) {
  double sum = 0.0;
  for (int r = 0; r < img.height; ++r)
    for (int c = 0; c < img.width; ++c) sum += luma(img, r, c);
  return sum / (static_cast<double>(img.height) * img.width);
}

std::array<std::uint8_t, 3> pick_color(double bg_luma, double min_contrast, Rng& rng) {
  for (int attempt = 0; attempt < 64; ++attempt) {
    const std::array<std::uint8_t, 3> c{static_cast<std::uint8_t>(rng.below(256)),
                                        static_cast<std::uint8_t>(rng.below(256)),
                                        static_cast<std::uint8_t>(rng.below(256))};
    if (std::abs(0.299 * c[0] + 0.587 * c[1] + 0.114 * c[2] - bg_luma) >= min_contrast) return c;
  }
  return bg_luma >= 128.0 ? std::array<std::uint8_t, 3>{0, 0, 0} : std::array<std::uint8_t, 3>{255, 255, 255};
}

}  // namespace

SynthSample Synthesizer::render(std::uint64_t index) const {
  const SynthConfig& cfg = config_;
  const SynthAssets& assets = *assets_;
  Rng rng(cfg.seed, index);

  // All random decisions are drawn up front, in a fixed order.
  const bool single = rng.bernoulli(cfg.single_word_prob);
  const std::string text = pick_text(assets, rng, single);
  const bool eligible = single && utf8_length(text) <= static_cast<std::size_t>(cfg.max_curved_len);
  const bool curve_draw = rng.bernoulli(cfg.curve_prob_given_eligible);
  const bool circle = rng.bernoulli(cfg.circle_vs_parabola_prob);
  const double alpha = sample_alpha(rng, cfg.alpha_negative, cfg.alpha_positive);
  const double bend = rng.uniform(cfg.bend_angle_range[0], cfg.bend_angle_range[1]);
  const Concavity concavity = rng.bernoulli(0.5) ? Concavity::Up : Concavity::Down;
  const std::size_t font = assets.font_count() > 0 ? rng.below(assets.font_count()) : 0;
  int px = rng.uniform_int(cfg.font_px_range[0], cfg.font_px_range[1]);
  const double pad_x_frac = rng.uniform(0.05, 0.35);
  const double pad_y_frac = rng.uniform(0.05, 0.35);
  const std::size_t bg_index = assets.backgrounds().empty() ? 0 : rng.below(assets.backgrounds().size());
  const double crop_u = rng.uniform();
  const double crop_v = rng.uniform();

  const std::vector<std::string> symbols = split_utf8(text);
  while (true) {
    const bool use_font = cfg.glyph_source == GlyphSource::Font;
    const int cell_h = use_font ? GlyphRasterizer::cell_height(px) : px;
    std::vector<GlyphMask> masks;
    std::vector<double> advances;
    for (const auto& s : symbols) {
      GlyphMask g = use_font ? assets.fonts()->glyph(font, s, px)
                             : block_glyph(s, static_cast<int>(block_advance(s, px)), px);
      advances.push_back(g.advance);
      masks.push_back(std::move(g));
    }

    CurveSpec curve = CurveSpec::straight();
    if (eligible && curve_draw) {
      if (circle) {
        double total = 0.0;
        for (double a : advances) total += a;
        const double span = symbols.size() > 1
                                ? total - (advances.front() + advances.back()) / 2.0
                                : advances.front();
        const double max_bend = std::min({cfg.bend_angle_range[1], span / (0.75 * cell_h),
                                          cfg.bend_angle_range[1] * span / total});
        const double eff = std::min(bend, max_bend);
        if (eff >= cfg.bend_angle_range[0]) curve = CurveSpec::circle(eff, concavity);
      } else {
        curve = CurveSpec::parabola(alpha);
      }
    }

    std::vector<CharPlacement> placements = layout_word(text, advances, curve, cell_h);
    double min_x = placements[0].box[0].x, max_x = min_x, min_y = placements[0].box[0].y, max_y = min_y;
    for (const auto& p : placements)
      for (const Point2& v : p.box) {
        min_x = std::min(min_x, v.x);
        max_x = std::max(max_x, v.x);
        min_y = std::min(min_y, v.y);
        max_y = std::max(max_y, v.y);
      }
    const int pad_x = std::max(2, static_cast<int>(std::lround(pad_x_frac * px)));
    const int pad_y = std::max(2, static_cast<int>(std::lround(pad_y_frac * px)));
    const int width = static_cast<int>(std::ceil(max_x - min_x - 1e-9)) + 2 * pad_x;
    const int height = static_cast<int>(std::ceil(max_y - min_y - 1e-9)) + 2 * pad_y;

    Raster canvas;
    if (assets.backgrounds().empty()) {
      Rng bg_rng(cfg.seed ^ 0xB6C0FFEEULL, index);
      canvas = procedural_background(height, width, bg_rng);
    } else {
      const Raster& bg = assets.backgrounds()[bg_index];
      if (bg.width < width || bg.height < height) {
        const int smaller = static_cast<int>(std::floor(px * 0.8));
        if (smaller < cfg.min_font_px)
          throw LayoutOverflow(fmt::format("sample {}: '{}' does not fit background {} at {} px", index, text,
                                           bg_index, cfg.min_font_px));
        px = smaller;
        continue;
      }
      const int x0 = static_cast<int>(crop_u * (bg.width - width + 1));
      const int y0 = static_cast<int>(crop_v * (bg.height - height + 1));
      canvas = Raster(height, width, 3);
      for (int r = 0; r < height; ++r)
        for (int c = 0; c < width; ++c)
          for (int ch = 0; ch < 3; ++ch) canvas.at(r, c, ch) = bg.at(y0 + r, x0 + c, ch);
    }

    const Point2 shift{pad_x - min_x, pad_y - min_y};
    for (auto& p : placements) {
      p.center = p.center + shift;
      for (auto& v : p.box) v = v + shift;
    }
    Rng color_rng(cfg.seed ^ 0xC010C010ULL, index);
    const auto color = pick_color(mean_luma(canvas), cfg.min_contrast, color_rng);
    for (std::size_t i = 0; i < placements.size(); ++i) composite_glyph(canvas, placements[i], masks[i].mask, color);

    std::vector<Quad> boxes;
    for (const auto& p : placements)
      if (p.symbol != " ") boxes.push_back(p.box);

    SynthSample out;
    out.image = std::move(canvas);
    out.record.id = fmt::format("{:08d}", index);
    out.record.image_path = fmt::format("images/{}.png", out.record.id);
    out.record.text = text;
    out.record.polygon = polygon_from_placements(placements, boxes);
    out.record.char_boxes = std::move(boxes);
    out.record.curve = curve;
    out.record.is_curved = curve.kind != CurveKind::Straight;
    return out;
  }
}

SynthSample render_sample(const SynthConfig& config, std::uint64_t index) {
  return Synthesizer(config).render(index);
}

}  // namespace textforge
