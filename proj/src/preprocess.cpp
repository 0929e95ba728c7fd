#include "textforge/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "textforge/errors.hpp"

namespace textforge {

Raster resize_bilinear(const Raster& img, int out_height, int out_width) {
  if (img.empty()) throw std::invalid_argument("resize: empty image");
  if (out_height < 1 || out_width < 1) throw std::invalid_argument("resize: bad output size");
  Raster out(out_height, out_width, img.channels);
  const double sy = static_cast<double>(img.height) / out_height;
  const double sx = static_cast<double>(img.width) / out_width;
  for (int r = 0; r < out_height; ++r) {
    const double py = (r + 0.5) * sy - 0.5;
    for (int c = 0; c < out_width; ++c) {
      const double px = (c + 0.5) * sx - 0.5;
      for (int ch = 0; ch < img.channels; ++ch)
        out.at(r, c, ch) = to_u8(sample_bilinear(img, px, py, ch));
    }
  }
  return out;
}

Raster fixed_resize(const Raster& img) { return resize_bilinear(img, kFixedHeight, kFixedWidth); }

NormalizedRaster normalize(const Raster& img) {
  NormalizedRaster out{img.height, img.width, img.channels, {}};
  out.data.resize(img.data.size());
  std::transform(img.data.begin(), img.data.end(), out.data.begin(),
                 [](std::uint8_t v) { return (static_cast<float>(v) - 128.0f) / 128.0f; });
  return out;
}

Raster denormalize(const NormalizedRaster& img) {
  Raster out(img.height, img.width, img.channels);
  std::transform(img.data.begin(), img.data.end(), out.data.begin(),
                 [](float v) { return to_u8(static_cast<double>(v) * 128.0 + 128.0); });
  return out;
}

Squarized squarize(const Raster& img, int side) {
  if (img.empty()) throw std::invalid_argument("squarize: empty image");
  if (side < 1) throw std::invalid_argument("squarize: side must be positive");
  const double scale = static_cast<double>(side) / std::max(img.height, img.width);
  const int h = std::clamp(static_cast<int>(std::lround(img.height * scale)), 1, side);
  const int w = std::clamp(static_cast<int>(std::lround(img.width * scale)), 1, side);
  const Raster content = (h == img.height && w == img.width) ? img : resize_bilinear(img, h, w);

  Squarized out{Raster(side, side, img.channels, kPadGrey), {}};
  out.placement = {(side - w) / 2, (side - h) / 2, w, h,
                   static_cast<double>(w) / img.width, static_cast<double>(h) / img.height};
  for (int r = 0; r < h; ++r) {
    const auto src = content.data.begin() + static_cast<std::ptrdiff_t>(content.index(r, 0));
    std::copy(src, src + static_cast<std::ptrdiff_t>(w) * img.channels,
              out.image.data.begin() +
                  static_cast<std::ptrdiff_t>(out.image.index(r + out.placement.offset_y, out.placement.offset_x)));
  }
  return out;
}

ControlPolygon transform(const ControlPolygon& poly, const Placement& placement) {
  ControlPolygon out;
  for (int i = 0; i < kChainPoints; ++i) {
    out.top[i] = placement.apply(poly.top[i]);
    out.bottom[i] = placement.apply(poly.bottom[i]);
  }
  return out;
}

namespace {
int wrap_k(int k) { return ((k % 4) + 4) % 4; }
}  // namespace

Raster rotate_k90(const Raster& img, int k) {
  k = wrap_k(k);
  if (k == 0) return img;
  const int H = img.height;
  const int W = img.width;
  Raster out = (k == 2) ? Raster(H, W, img.channels) : Raster(W, H, img.channels);
  for (int r = 0; r < H; ++r) {
    for (int c = 0; c < W; ++c) {
      int rr = 0;
      int cc = 0;
      switch (k) {
        case 1: rr = W - 1 - c; cc = r; break;
        case 2: rr = H - 1 - r; cc = W - 1 - c; break;
        default: rr = c; cc = H - 1 - r; break;
      }
      for (int ch = 0; ch < img.channels; ++ch) out.at(rr, cc, ch) = img.at(r, c, ch);
    }
  }
  return out;
}

Point2 rotate_point_k90(Point2 p, int k, int width, int height) {
  switch (wrap_k(k)) {
    case 1: return {p.y, width - p.x};
    case 2: return {width - p.x, height - p.y};
    case 3: return {height - p.y, p.x};
    default: return p;
  }
}

Rotated rotate_k90(const Raster& img, int k, const std::optional<ControlPolygon>& polygon) {
  if (polygon && img.height != img.width)
    throw NonSquareInput("rotate_k90: polygon transform requires a square image");
  Rotated out{rotate_k90(img, k), std::nullopt};
  if (polygon) {
    ControlPolygon p;
    for (int i = 0; i < kChainPoints; ++i) {
      p.top[i] = rotate_point_k90(polygon->top[i], k, img.width, img.height);
      p.bottom[i] = rotate_point_k90(polygon->bottom[i], k, img.width, img.height);
    }
    out.polygon = p;
  }
  return out;
}

int draw_rotation(const AugmentPolicy& policy, Rng& rng) {
  if (policy.rot_prob_each < 0.0 || 3.0 * policy.rot_prob_each > 1.0)
    throw std::invalid_argument("AugmentPolicy: need 0 <= 3 * rot_prob_each <= 1");
  const double u = rng.uniform();
  const double p = policy.rot_prob_each;
  if (u < p) return 1;
  if (u < 2.0 * p) return 2;
  if (u < 3.0 * p) return 3;
  return 0;
}

Augmented augment(const Raster& img, const std::optional<ControlPolygon>& polygon,
                  const AugmentPolicy& policy, Rng& rng) {
  const int k = draw_rotation(policy, rng);
  if (k == 0) return {img, polygon, 0};
  Rotated r = rotate_k90(img, k, polygon);
  return {std::move(r.image), std::move(r.polygon), k};
}

Raster downsample_half(const Raster& img) {
  if (img.height < 2 || img.width < 2) throw std::invalid_argument("downsample_half: need H, W >= 2");
  return resize_bilinear(img, img.height / 2, img.width / 2);
}

}  // namespace textforge
