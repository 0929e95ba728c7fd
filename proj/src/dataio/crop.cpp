#include <algorithm>
#include <cmath>

#include "textforge/dataio.hpp"
#include "textforge/errors.hpp"

namespace textforge {

Cropped crop(const Raster& img, const ControlPolygon& poly, int margin_px) {
  double min_x = poly.top[0].x, max_x = min_x, min_y = poly.top[0].y, max_y = min_y;
  for (const Point2& p : poly.fiducials()) {
    min_x = std::min(min_x, p.x);
    max_x = std::max(max_x, p.x);
    min_y = std::min(min_y, p.y);
    max_y = std::max(max_y, p.y);
  }
  const int x0 = std::max(0, static_cast<int>(std::floor(min_x)) - margin_px);
  const int y0 = std::max(0, static_cast<int>(std::floor(min_y)) - margin_px);
  const int x1 = std::min(img.width, static_cast<int>(std::ceil(max_x)) + margin_px);
  const int y1 = std::min(img.height, static_cast<int>(std::ceil(max_y)) + margin_px);
  if (x1 <= x0 || y1 <= y0) throw EmptyIntersection("crop: polygon does not intersect the image");

  Cropped out{Raster(y1 - y0, x1 - x0, img.channels), {}, x0, y0};
  for (int r = y0; r < y1; ++r) {
    const auto src = img.data.begin() + static_cast<std::ptrdiff_t>(img.index(r, x0));
    std::copy(src, src + static_cast<std::ptrdiff_t>(x1 - x0) * img.channels,
              out.image.data.begin() + static_cast<std::ptrdiff_t>(out.image.index(r - y0, 0)));
  }
  const Point2 shift{static_cast<double>(x0), static_cast<double>(y0)};
  for (int i = 0; i < kChainPoints; ++i) {
    out.polygon.top[i] = poly.top[i] - shift;
    out.polygon.bottom[i] = poly.bottom[i] - shift;
  }
  return out;
}

}  // namespace textforge
