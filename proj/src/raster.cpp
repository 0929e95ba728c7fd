#include "textforge/raster.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace textforge {

Raster::Raster(int h, int w, int c, std::uint8_t fill) : height(h), width(w), channels(c) {
  if (h < 0 || w < 0 || (c != 1 && c != 3)) throw std::invalid_argument("Raster: bad shape");
  data.assign(static_cast<std::size_t>(h) * w * c, fill);
}

double sample_bilinear(const Raster& img, double px, double py, int ch) {
  px = std::clamp(px, 0.0, static_cast<double>(img.width - 1));
  py = std::clamp(py, 0.0, static_cast<double>(img.height - 1));
  const int x0 = static_cast<int>(std::floor(px));
  const int y0 = static_cast<int>(std::floor(py));
  const int x1 = std::min(x0 + 1, img.width - 1);
  const int y1 = std::min(y0 + 1, img.height - 1);
  const double fx = px - x0;
  const double fy = py - y0;
  const double top = img.at(y0, x0, ch) * (1.0 - fx) + img.at(y0, x1, ch) * fx;
  const double bot = img.at(y1, x0, ch) * (1.0 - fx) + img.at(y1, x1, ch) * fx;
  return top * (1.0 - fy) + bot * fy;
}

std::uint8_t to_u8(double v) {
  return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
}

double luma(const Raster& img, int row, int col) {
  if (img.channels == 1) return img.at(row, col);
  return 0.299 * img.at(row, col, 0) + 0.587 * img.at(row, col, 1) + 0.114 * img.at(row, col, 2);
}

Raster to_gray(const Raster& img) {
  if (img.channels == 1) return img;
  Raster out(img.height, img.width, 1);
  for (int r = 0; r < img.height; ++r)
    for (int c = 0; c < img.width; ++c) out.at(r, c) = to_u8(luma(img, r, c));
  return out;
}

}  // namespace textforge
