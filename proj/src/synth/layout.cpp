#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "textforge/errors.hpp"
#include "textforge/synth.hpp"

namespace textforge {

double sample_alpha(Rng& rng, const std::array<double, 2>& negative,
                    const std::array<double, 2>& positive) {
  const auto& range = rng.bernoulli(0.5) ? positive : negative;
  return rng.uniform(range[0], range[1]);
}

std::vector<std::string> split_utf8(std::string_view text) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < text.size();) {
    const auto lead = static_cast<unsigned char>(text[i]);
    std::size_t len = 1;
    if (lead >= 0xF0) len = 4;
    else if (lead >= 0xE0) len = 3;
    else if (lead >= 0xC0) len = 2;
    len = std::min(len, text.size() - i);
    out.emplace_back(text.substr(i, len));
    i += len;
  }
  return out;
}

std::size_t utf8_length(std::string_view text) { return split_utf8(text).size(); }

namespace {

Quad make_box(Point2 center, double rotation, double width, double height) {
  const Point2 t{std::cos(rotation), std::sin(rotation)};
  const Point2 up{std::sin(rotation), -std::cos(rotation)};
  const Point2 hx = t * (width / 2.0);
  const Point2 hy = up * (height / 2.0);
  return {center - hx + hy, center + hx + hy, center + hx - hy, center - hx - hy};
}

}  // namespace

namespace {

// Baseline curve shared by rigid placement and curve-following rendering.
// `u` runs along the straight baseline, centered on the word.
struct Centerline {
  CurveSpec curve;
  double half_span = 0.0;  // parabola normalization: outer char centers
  double radius = 0.0;     // circle

  Point2 point(double u) const {
    switch (curve.kind) {
      case CurveKind::Parabola: {
        const double x = half_span > 0.0 ? u / half_span : 0.0;
        return {u, curve.alpha * x * x * half_span};
      }
      case CurveKind::Circle: {
        const double phi = u / radius;
        const double sag = radius * (1.0 - std::cos(phi));
        return {radius * std::sin(phi), curve.concavity == Concavity::Down ? sag : -sag};
      }
      default:
        return {u, 0.0};
    }
  }

  double rotation(double u) const {
    switch (curve.kind) {
      case CurveKind::Parabola:
        return std::atan(2.0 * curve.alpha * (half_span > 0.0 ? u / half_span : 0.0));
      case CurveKind::Circle:
        return curve.concavity == Concavity::Down ? u / radius : -u / radius;
      default:
        return 0.0;
    }
  }
};

struct Baseline {
  std::vector<std::string> symbols;
  std::vector<double> u;  // char centers
  double total = 0.0;
  Centerline line;
};

Baseline make_baseline(std::string_view text, std::span<const double> advances, const CurveSpec& curve) {
  Baseline b;
  b.symbols = split_utf8(text);
  if (b.symbols.empty()) throw EmptyText("layout_word: empty text");
  if (advances.size() != b.symbols.size())
    throw std::invalid_argument("layout_word: need one advance per symbol");
  for (double a : advances)
    if (!(a > 0.0)) throw std::invalid_argument("layout_word: advances must be positive");
  if (curve.kind == CurveKind::Circle && !(curve.bend_angle > 0.0))
    throw std::invalid_argument("layout_word: bend angle must be positive");

  const std::size_t n = b.symbols.size();
  for (double a : advances) b.total += a;
  b.u.resize(n);
  double run = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    b.u[i] = run + advances[i] / 2.0 - b.total / 2.0;
    run += advances[i];
  }
  const double span = n > 1 ? b.u.back() - b.u.front() : advances.front();
  b.line.curve = curve;
  b.line.half_span = std::max(std::abs(b.u.front()), std::abs(b.u.back()));
  if (curve.kind == CurveKind::Circle) b.line.radius = span / curve.bend_angle;
  return b;
}

}  // namespace

std::vector<CharPlacement> layout_word(std::string_view text, std::span<const double> advances,
                                       const CurveSpec& curve, double glyph_height) {
  const Baseline b = make_baseline(text, advances, curve);
  std::vector<CharPlacement> out(b.symbols.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    CharPlacement& p = out[i];
    p.symbol = b.symbols[i];
    p.advance = advances[i];
    p.center = b.line.point(b.u[i]);
    p.rotation = b.line.rotation(b.u[i]);
    p.box = make_box(p.center, p.rotation, p.advance, glyph_height);
  }
  return out;
}

double enclosure_violation(const ControlPolygon& poly, std::span<const Quad> boxes) {
  const std::vector<Point2> ring = outline(poly);
  double worst = 0.0;
  for (const Quad& q : boxes)
    for (const Point2& v : q)
      if (!point_in_polygon(ring, v)) worst = std::max(worst, distance_to_ring(ring, v));
  return worst;
}

namespace {

Point2 unit(Point2 v) {
  const double len = norm(v);
  return len > 0.0 ? v * (1.0 / len) : Point2{0.0, 0.0};
}

double segment_distance(Point2 a, Point2 b, Point2 p) {
  const Point2 ab = b - a;
  const double len2 = dot(ab, ab);
  const double t = len2 > 0.0 ? std::clamp(dot(p - a, ab) / len2, 0.0, 1.0) : 0.0;
  return distance(a + ab * t, p);
}

// Piecewise-linear envelope of (u, w) points, evaluated at u. `hull` is one
// side of a monotone-chain convex hull, sorted by u.
double envelope_at(const std::vector<Point2>& hull, double u) {
  if (u <= hull.front().x) return hull.front().y;
  for (std::size_t i = 1; i < hull.size(); ++i)
    if (u <= hull[i].x) {
      const double span = hull[i].x - hull[i - 1].x;
      const double t = span > 0.0 ? (u - hull[i - 1].x) / span : 1.0;
      return hull[i - 1].y + t * (hull[i].y - hull[i - 1].y);
    }
  return hull.back().y;
}

// Fallback band for tightly folded layouts (two steep glyphs whose inner
// corners cross): hull envelopes in the frame of the first-to-last chord.
// All column segments are parallel, so the result is always valid.
ControlPolygon hull_band(std::span<const CharPlacement> placements) {
  Point2 axis = placements.back().center - placements.front().center;
  if (norm(axis) < 1e-9) axis = {std::cos(placements.front().rotation), std::sin(placements.front().rotation)};
  axis = unit(axis);
  const Point2 up{axis.y, -axis.x};

  std::vector<Point2> pts;
  for (const auto& p : placements)
    for (const Point2& v : p.box) pts.push_back({dot(v, axis), dot(v, up)});
  std::sort(pts.begin(), pts.end(), [](Point2 a, Point2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });

  const auto half_hull = [&](double sign) {
    std::vector<Point2> h;
    for (const Point2& p : pts) {
      while (h.size() >= 2 && sign * cross(h.back() - h[h.size() - 2], p - h[h.size() - 2]) >= 0.0) h.pop_back();
      h.push_back(p);
    }
    return h;
  };
  const std::vector<Point2> upper = half_hull(1.0);
  const std::vector<Point2> lower = half_hull(-1.0);

  // End columns span the full height so no column collapses to a point.
  double w_min = pts.front().y, w_max = w_min;
  for (const Point2& p : pts) {
    w_min = std::min(w_min, p.y);
    w_max = std::max(w_max, p.y);
  }
  ControlPolygon poly;
  const double u0 = pts.front().x - 0.5;
  const double u1 = pts.back().x + 0.5;
  for (int i = 0; i < kChainPoints; ++i) {
    const double u = u0 + (u1 - u0) * i / (kChainPoints - 1);
    const bool end = i == 0 || i == kChainPoints - 1;
    poly.top[i] = axis * u + up * (end ? w_max : envelope_at(upper, u));
    poly.bottom[i] = axis * u + up * (end ? w_min : envelope_at(lower, u));
  }
  return poly;
}

}  // namespace

namespace {

// Chords between chain samples cut across convex stretches of the outline;
// push the offending chain points outward until every vertex is covered.
void enclose_boxes(ControlPolygon& poly, std::span<const Quad> enclose, double tolerance) {
  constexpr int last = kChainPoints - 1;
  for (int iter = 0; iter < 200; ++iter) {
    bool moved = false;
    const std::vector<Point2> ring = outline(poly);
    for (const Quad& q : enclose) {
      for (const Point2& v : q) {
        if (point_in_polygon(ring, v)) continue;
        const double d = distance_to_ring(ring, v);
        if (d <= tolerance) continue;
        int best = 0;
        double best_d = segment_distance(poly.top[0], poly.top[1], v);
        const auto consider = [&](int id, Point2 a, Point2 b) {
          const double dd = segment_distance(a, b, v);
          if (dd < best_d) {
            best_d = dd;
            best = id;
          }
        };
        for (int i = 0; i < last; ++i) {
          consider(i, poly.top[i], poly.top[i + 1]);
          consider(100 + i, poly.bottom[i], poly.bottom[i + 1]);
        }
        consider(200, poly.top[0], poly.bottom[0]);
        consider(300, poly.top[last], poly.bottom[last]);
        const double push = d + 0.25;
        if (best < 100) {
          for (int i : {best, best + 1})
            poly.top[i] = poly.top[i] + unit(poly.top[i] - poly.bottom[i]) * push;
        } else if (best < 200) {
          for (int i : {best - 100, best - 99})
            poly.bottom[i] = poly.bottom[i] + unit(poly.bottom[i] - poly.top[i]) * push;
        } else if (best == 200) {
          poly.top[0] = poly.top[0] + unit(poly.top[0] - poly.top[1]) * push;
          poly.bottom[0] = poly.bottom[0] + unit(poly.bottom[0] - poly.bottom[1]) * push;
        } else {
          poly.top[last] = poly.top[last] + unit(poly.top[last] - poly.top[last - 1]) * push;
          poly.bottom[last] = poly.bottom[last] + unit(poly.bottom[last] - poly.bottom[last - 1]) * push;
        }
        moved = true;
        break;
      }
      if (moved) break;
    }
    if (!moved) break;
  }
}

}  // namespace

ControlPolygon polygon_from_placements(std::span<const CharPlacement> placements,
                                       std::span<const Quad> enclose, double tolerance) {
  if (placements.empty()) throw EmptyText("polygon_from_placements: no placements");
  std::vector<Point2> top{placements.front().box[0]};
  std::vector<Point2> bottom{placements.front().box[3]};
  for (const auto& p : placements) {
    top.push_back(lerp(p.box[0], p.box[1], 0.5));
    bottom.push_back(lerp(p.box[3], p.box[2], 0.5));
  }
  top.push_back(placements.back().box[1]);
  bottom.push_back(placements.back().box[2]);

  ControlPolygon poly;
  const auto top10 = resample_chain(top, kChainPoints);
  const auto bottom10 = resample_chain(bottom, kChainPoints);
  std::copy(top10.begin(), top10.end(), poly.top.begin());
  std::copy(bottom10.begin(), bottom10.end(), poly.bottom.begin());
  if (!is_valid(poly)) poly = hull_band(placements);

  enclose_boxes(poly, enclose, tolerance);
  return poly;
}

double block_advance(std::string_view symbol, double height) {
  static constexpr std::string_view narrow = "iljtfrI1!.,:;'|";
  static constexpr std::string_view wide = "mwMW@";
  if (symbol == " ") return std::round(0.35 * height);
  if (symbol.size() == 1 && narrow.find(symbol[0]) != std::string_view::npos) return std::round(0.35 * height);
  if (symbol.size() == 1 && wide.find(symbol[0]) != std::string_view::npos) return std::round(0.85 * height);
  return std::round(0.6 * height);
}

GlyphMask block_glyph(std::string_view symbol, int advance, int height, double inset_frac) {
  GlyphMask g{Raster(height, advance, 1, 0), advance};
  if (symbol == " " || symbol.empty()) return g;
  // Vertical extent by symbol class gives the blocks a word-like silhouette.
  double top = 0.0;
  double bottom = 1.0;
  if (symbol.size() == 1) {
    const char c = symbol[0];
    if (c >= 'a' && c <= 'z') {
      static constexpr std::string_view ascender = "bdfhklt";
      static constexpr std::string_view descender = "gjpqy";
      top = ascender.find(c) != std::string_view::npos ? 0.0 : 0.3;
      bottom = descender.find(c) != std::string_view::npos ? 1.0 : 0.8;
    } else if ((c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9')) {
      bottom = 0.8;
    }
  }
  const int inset = static_cast<int>(std::lround(inset_frac * advance));
  const int r0 = static_cast<int>(std::lround(top * height));
  const int r1 = static_cast<int>(std::lround(bottom * height));
  for (int r = r0; r < r1; ++r)
    for (int c = inset; c < advance - inset; ++c) g.mask.at(r, c) = 255;
  return g;
}

void composite_glyph(Raster& canvas, const CharPlacement& placement, const Raster& mask,
                     std::span<const std::uint8_t> color) {
  if (mask.empty()) return;
  const Point2 t{std::cos(placement.rotation), std::sin(placement.rotation)};
  const Point2 up{std::sin(placement.rotation), -std::cos(placement.rotation)};
  double min_x = placement.box[0].x, max_x = min_x, min_y = placement.box[0].y, max_y = min_y;
  for (const Point2& p : placement.box) {
    min_x = std::min(min_x, p.x);
    max_x = std::max(max_x, p.x);
    min_y = std::min(min_y, p.y);
    max_y = std::max(max_y, p.y);
  }
  const int c0 = std::max(0, static_cast<int>(std::floor(min_x)) - 1);
  const int c1 = std::min(canvas.width - 1, static_cast<int>(std::ceil(max_x)) + 1);
  const int r0 = std::max(0, static_cast<int>(std::floor(min_y)) - 1);
  const int r1 = std::min(canvas.height - 1, static_cast<int>(std::ceil(max_y)) + 1);
  const double w = mask.width;
  const double h = mask.height;
  for (int row = r0; row <= r1; ++row) {
    for (int col = c0; col <= c1; ++col) {
      const Point2 d = Point2{col + 0.5, row + 0.5} - placement.center;
      const double u = dot(d, t) + w / 2.0;
      const double v = -dot(d, up) + h / 2.0;
      if (u < 0.0 || u > w || v < 0.0 || v > h) continue;
      const double alpha = sample_bilinear(mask, u - 0.5, v - 0.5, 0) / 255.0;
      if (alpha <= 0.0) continue;
      for (int ch = 0; ch < canvas.channels; ++ch) {
        const double bg = canvas.at(row, col, ch);
        const double fg = color[static_cast<std::size_t>(ch) % color.size()];
        canvas.at(row, col, ch) = to_u8(bg + (fg - bg) * alpha);
      }
    }
  }
}

namespace {

std::vector<Quad> ink_boxes(std::span<const CharPlacement> placements) {
  std::vector<Quad> boxes;
  for (const auto& p : placements)
    if (p.symbol != " " && p.symbol != "\t") boxes.push_back(p.box);
  return boxes;
}

}  // namespace

namespace {

Point2 up_vector(double rotation) { return {std::sin(rotation), -std::cos(rotation)}; }

RenderedWord render_along_curve(std::string_view text, std::span<const double> advances, const CurveSpec& curve,
                                const BlockStyle& style) {
  const Baseline b = make_baseline(text, advances, curve);
  const Centerline& line = b.line;
  const double half_h = style.height / 2.0;
  const double u_lo = -b.total / 2.0;
  const double u_hi = b.total / 2.0;
  const auto offset = [&](double u, double v) { return line.point(u) + up_vector(line.rotation(u)) * v; };

  std::vector<CharPlacement> placements(b.symbols.size());
  for (std::size_t i = 0; i < placements.size(); ++i) {
    const double a0 = b.u[i] - advances[i] / 2.0;
    const double a1 = b.u[i] + advances[i] / 2.0;
    CharPlacement& p = placements[i];
    p.symbol = b.symbols[i];
    p.advance = advances[i];
    p.center = line.point(b.u[i]);
    p.rotation = line.rotation(b.u[i]);
    p.box = {offset(a0, half_h), offset(a1, half_h), offset(a1, -half_h), offset(a0, -half_h)};
  }

  ControlPolygon poly;
  for (int k = 0; k < kChainPoints; ++k) {
    const double u = u_lo + (u_hi - u_lo) * k / (kChainPoints - 1);
    poly.top[k] = offset(u, half_h);
    poly.bottom[k] = offset(u, -half_h);
  }

  // Dense baseline samples: canvas bounds and the starting guess for projection.
  const double step = 0.5;
  const int samples = static_cast<int>(std::ceil((u_hi - u_lo) / step)) + 1;
  std::vector<double> grid_u(samples);
  std::vector<Point2> grid_p(samples);
  double min_x = 1e300, max_x = -1e300, min_y = 1e300, max_y = -1e300;
  for (int k = 0; k < samples; ++k) {
    grid_u[k] = std::min(u_lo + k * step, u_hi);
    grid_p[k] = line.point(grid_u[k]);
    for (double v : {-half_h, half_h}) {
      const Point2 q = offset(grid_u[k], v);
      min_x = std::min(min_x, q.x);
      max_x = std::max(max_x, q.x);
      min_y = std::min(min_y, q.y);
      max_y = std::max(max_y, q.y);
    }
  }
  const Point2 shift{style.pad - std::floor(min_x), style.pad - std::floor(min_y)};
  const int width = static_cast<int>(std::ceil(max_x) - std::floor(min_x)) + 2 * style.pad;
  const int height = static_cast<int>(std::ceil(max_y) - std::floor(min_y)) + 2 * style.pad;

  std::vector<GlyphMask> masks;
  for (std::size_t i = 0; i < b.symbols.size(); ++i)
    masks.push_back(block_glyph(b.symbols[i], std::max(1, static_cast<int>(std::lround(advances[i]))), style.height,
                                style.inset_frac));

  Raster image(height, width, 3, style.background);
  for (int row = 0; row < height; ++row) {
    for (int col = 0; col < width; ++col) {
      const Point2 p = Point2{col + 0.5, row + 0.5} - shift;
      int best = 0;
      double best_d = 1e300;
      for (int k = 0; k < samples; ++k) {
        const Point2 d = p - grid_p[k];
        const double dd = dot(d, d);
        if (dd < best_d) {
          best_d = dd;
          best = k;
        }
      }
      if (best_d > (half_h + 2.0 * step) * (half_h + 2.0 * step) + step * step) continue;
      // Golden-section refinement of the nearest baseline parameter.
      double lo = std::max(u_lo, grid_u[best] - step);
      double hi = std::min(u_hi, grid_u[best] + step);
      const auto dist2 = [&](double u) {
        const Point2 d = p - line.point(u);
        return dot(d, d);
      };
      for (int it = 0; it < 40; ++it) {
        const double m1 = hi - (hi - lo) * 0.6180339887498949;
        const double m2 = lo + (hi - lo) * 0.6180339887498949;
        if (dist2(m1) < dist2(m2)) hi = m2;
        else lo = m1;
      }
      const double u = (lo + hi) / 2.0;
      const Point2 d = p - line.point(u);
      const double along = dot(d, Point2{std::cos(line.rotation(u)), std::sin(line.rotation(u))});
      if (std::abs(along) > 0.5) continue;  // beyond the word ends
      const double v = dot(d, up_vector(line.rotation(u)));

      const auto it = std::upper_bound(b.u.begin(), b.u.end(), u);
      std::size_t i = static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, it - b.u.begin() - 1));
      if (i + 1 < b.u.size() && u - b.u[i] > advances[i] / 2.0) ++i;
      const Raster& mask = masks[i].mask;
      const double mu = u - b.u[i] + mask.width / 2.0;
      const double mv = half_h - v;
      if (mu < 0.0 || mu > mask.width || mv < 0.0 || mv > mask.height) continue;
      const double alpha = sample_bilinear(mask, mu - 0.5, mv - 0.5, 0) / 255.0;
      if (alpha <= 0.0) continue;
      for (int ch = 0; ch < 3; ++ch) {
        const double bg = image.at(row, col, ch);
        image.at(row, col, ch) = to_u8(bg + (style.foreground - bg) * alpha);
      }
    }
  }

  for (auto& p : placements) {
    p.center = p.center + shift;
    for (auto& v : p.box) v = v + shift;
  }
  for (auto& v : poly.top) v = v + shift;
  for (auto& v : poly.bottom) v = v + shift;

  RenderedWord out{std::move(image), {}, std::move(placements)};
  std::vector<Quad> boxes;
  for (const auto& p : out.placements)
    if (p.symbol != " " && p.symbol != "\t") boxes.push_back(p.box);
  enclose_boxes(poly, boxes, 0.5);
  out.record.text = std::string(text);
  out.record.polygon = poly;
  out.record.char_boxes = boxes;
  out.record.curve = curve;
  out.record.is_curved = true;
  return out;
}

}  // namespace

RenderedWord render_block_glyphs(std::string_view text, std::span<const double> advances,
                                 const CurveSpec& curve, const BlockStyle& style) {
  if (style.follow_curve && curve.kind != CurveKind::Straight)
    return render_along_curve(text, advances, curve, style);
  std::vector<CharPlacement> placements = layout_word(text, advances, curve, style.height);
  double min_x = placements[0].box[0].x, max_x = min_x, min_y = placements[0].box[0].y, max_y = min_y;
  for (const auto& p : placements)
    for (const Point2& v : p.box) {
      min_x = std::min(min_x, v.x);
      max_x = std::max(max_x, v.x);
      min_y = std::min(min_y, v.y);
      max_y = std::max(max_y, v.y);
    }
  const Point2 shift{style.pad - min_x, style.pad - min_y};
  const int width = static_cast<int>(std::ceil(max_x - min_x - 1e-9)) + 2 * style.pad;
  const int height = static_cast<int>(std::ceil(max_y - min_y - 1e-9)) + 2 * style.pad;
  for (auto& p : placements) {
    p.center = p.center + shift;
    for (auto& v : p.box) v = v + shift;
  }

  RenderedWord out{Raster(height, width, 3, style.background), {}, std::move(placements)};
  const std::array<std::uint8_t, 1> color{style.foreground};
  for (const auto& p : out.placements) {
    const int adv = static_cast<int>(std::lround(p.advance));
    const GlyphMask g = block_glyph(p.symbol, std::max(adv, 1), style.height, style.inset_frac);
    composite_glyph(out.image, p, g.mask, color);
  }

  const std::vector<Quad> boxes = ink_boxes(out.placements);
  out.record.text = std::string(text);
  out.record.polygon = polygon_from_placements(out.placements, boxes);
  out.record.char_boxes = boxes;
  out.record.curve = curve;
  out.record.is_curved = curve.kind != CurveKind::Straight;
  return out;
}

}  // namespace textforge
