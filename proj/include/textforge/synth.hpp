#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "textforge/geometry.hpp"
#include "textforge/raster.hpp"
#include "textforge/record.hpp"
#include "textforge/rng.hpp"

namespace textforge {

struct CharPlacement {
  std::string symbol;  // one UTF-8 encoded code point
  Point2 center;       // pixel space
  double rotation = 0.0;
  double advance = 0.0;
  Quad box{};  // TL, TR, BR, BL
};

enum class GlyphSource { Font, Block };

struct SynthConfig {
  std::filesystem::path fonts_dir;
  std::filesystem::path backgrounds_dir;  // empty: procedural backgrounds
  std::filesystem::path corpus_path;
  int count = 1;
  double single_word_prob = 0.30;
  double curve_prob_given_eligible = 0.35;
  double circle_vs_parabola_prob = 0.5;
  std::array<double, 2> alpha_negative{-0.50, -0.45};
  std::array<double, 2> alpha_positive{0.50, 0.55};
  std::array<double, 2> bend_angle_range{std::numbers::pi / 6.0, 1.9 * std::numbers::pi};
  int max_curved_len = 10;
  std::array<int, 2> font_px_range{24, 40};
  int min_font_px = 12;
  double min_contrast = 60.0;
  GlyphSource glyph_source = GlyphSource::Font;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Parabola coefficient drawn uniformly from the two-interval mixture, each
/// interval chosen with probability 1/2.
double sample_alpha(Rng& rng, const std::array<double, 2>& negative = {-0.50, -0.45},
                    const std::array<double, 2>& positive = {0.50, 0.55});

/// Places characters around the origin. Straight: on y = 0. Parabola: x
/// normalized so the outer char centers sit at +-1, y = alpha x^2 in units of
/// that half-span, rotation atan(2 alpha x). Circle: radius = center span /
/// bend angle, arc apex at the origin. Throws EmptyText.
std::vector<CharPlacement> layout_word(std::string_view text, std::span<const double> advances,
                                       const CurveSpec& curve, double glyph_height);

std::vector<std::string> split_utf8(std::string_view text);
std::size_t utf8_length(std::string_view text);

/// Builds the 10 + 10 point outline from per-character placements and grows
/// it until every listed box vertex lies inside (within `tolerance` px).
ControlPolygon polygon_from_placements(std::span<const CharPlacement> placements,
                                       std::span<const Quad> enclose, double tolerance = 0.5);

/// Largest distance (px) by which any box vertex lies outside the band.
double enclosure_violation(const ControlPolygon& poly, std::span<const Quad> boxes);

/// Ink coverage for one glyph cell, `height` rows x `advance` columns.
struct GlyphMask {
  Raster mask;  // 1 channel, 0..255
  int advance = 0;
};

GlyphMask block_glyph(std::string_view symbol, int advance, int height, double inset_frac = 0.15);

/// Alpha-composites a glyph cell onto `canvas` at the placement's pose.
void composite_glyph(Raster& canvas, const CharPlacement& placement, const Raster& mask,
                     std::span<const std::uint8_t> color);

struct BlockStyle {
  int height = 32;
  int pad = 8;
  std::uint8_t foreground = 0;
  std::uint8_t background = 255;
  double inset_frac = 0.15;
  // Bend each block along the baseline instead of placing it rigidly, so the
  // curved image is a smooth warp of the straight one.
  bool follow_curve = false;
};

struct RenderedWord {
  Raster image;
  SampleRecord record;
  std::vector<CharPlacement> placements;  // canvas pixel coordinates
};

/// Deterministic font-free renderer: each symbol is a filled block.
RenderedWord render_block_glyphs(std::string_view text, std::span<const double> advances,
                                 const CurveSpec& curve, const BlockStyle& style = {});

/// Per-symbol advance used when rendering block glyphs without explicit advances.
double block_advance(std::string_view symbol, double height);

class GlyphRasterizer;

/// Fonts, backgrounds and corpus, decoded once and read-only afterwards.
class SynthAssets {
 public:
  static std::shared_ptr<const SynthAssets> load(const SynthConfig& config);

  const std::vector<std::string>& words() const { return words_; }
  const std::vector<std::vector<std::string>>& lines() const { return lines_; }
  const std::vector<Raster>& backgrounds() const { return backgrounds_; }
  std::size_t font_count() const;
  GlyphRasterizer* fonts() const { return fonts_.get(); }

  /// Fraction of corpus words short enough to be curved.
  double eligible_fraction(int max_len) const;

  static SynthAssets from_memory(std::vector<std::string> corpus_lines, std::vector<Raster> backgrounds);

  SynthAssets();
  ~SynthAssets();
  SynthAssets(SynthAssets&&) noexcept;
  SynthAssets& operator=(SynthAssets&&) noexcept;

 private:
  void set_corpus(const std::vector<std::string>& lines);

  std::vector<std::string> words_;
  std::vector<std::vector<std::string>> lines_;
  std::vector<Raster> backgrounds_;
  std::unique_ptr<GlyphRasterizer> fonts_;
};

/// curve_prob_given_eligible giving the requested overall curved fraction.
double calibrate_curve_prob(double target, const SynthConfig& config, const SynthAssets& assets);

struct SynthSample {
  Raster image;
  SampleRecord record;
};

class Synthesizer {
 public:
  Synthesizer(SynthConfig config, std::shared_ptr<const SynthAssets> assets);
  explicit Synthesizer(SynthConfig config);

  /// Deterministic in (config.seed, index). Throws AssetError, LayoutOverflow.
  SynthSample render(std::uint64_t index) const;

  const SynthConfig& config() const { return config_; }

 private:
  SynthConfig config_;
  std::shared_ptr<const SynthAssets> assets_;
};

SynthSample render_sample(const SynthConfig& config, std::uint64_t index);

}  // namespace textforge
