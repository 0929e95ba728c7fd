#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace textforge {

/// Row-major 8-bit image, 1 or 3 interleaved channels.
struct Raster {
  int height = 0;
  int width = 0;
  int channels = 0;
  std::vector<std::uint8_t> data;

  Raster() = default;
  Raster(int h, int w, int c, std::uint8_t fill = 0);

  bool empty() const { return height <= 0 || width <= 0 || data.empty(); }
  std::size_t index(int row, int col, int ch = 0) const {
    return (static_cast<std::size_t>(row) * width + col) * channels + ch;
  }
  std::uint8_t& at(int row, int col, int ch = 0) { return data[index(row, col, ch)]; }
  std::uint8_t at(int row, int col, int ch = 0) const { return data[index(row, col, ch)]; }

  bool operator==(const Raster&) const = default;
};

/// Same shape as a Raster, samples in [-1, 0.9921875].
struct NormalizedRaster {
  int height = 0;
  int width = 0;
  int channels = 0;
  std::vector<float> data;
};

/// Bilinear lookup at continuous pixel coordinates (pixel centers at
/// integer positions). Coordinates outside the image clamp to the border.
double sample_bilinear(const Raster& img, double px, double py, int ch);

std::uint8_t to_u8(double v);

/// Luma (BT.601) of one pixel; for 1-channel rasters the sample itself.
double luma(const Raster& img, int row, int col);

Raster to_gray(const Raster& img);

}  // namespace textforge
