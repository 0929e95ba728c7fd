#include "glyph_rasterizer.hpp"

#include <opencv2/core.hpp>
#include <opencv2/freetype.hpp>

#include <cmath>

#include "textforge/errors.hpp"

namespace textforge {

struct GlyphRasterizer::Face {
  cv::Ptr<cv::freetype::FreeType2> ft;
};

GlyphRasterizer::GlyphRasterizer(std::vector<std::filesystem::path> font_files)
    : files_(std::move(font_files)) {
  for (const auto& path : files_) {
    auto face = std::make_unique<Face>();
    try {
      face->ft = cv::freetype::createFreeType2();
      face->ft->loadFontData(path.string(), 0);
    } catch (const cv::Exception& e) {
      throw AssetError("cannot load font " + path.string() + ": " + e.what());
    }
    faces_.push_back(std::move(face));
  }
}

GlyphRasterizer::~GlyphRasterizer() = default;

int GlyphRasterizer::cell_height(int px) { return static_cast<int>(std::lround(1.15 * px)); }

GlyphMask GlyphRasterizer::glyph(std::size_t font, const std::string& symbol, int px) {
  std::lock_guard lock(mutex_);
  const auto key = std::make_tuple(font, symbol, px);
  if (auto it = cache_.find(key); it != cache_.end()) return it->second;

  auto& ft = faces_.at(font)->ft;
  const int height = cell_height(px);
  int baseline = 0;
  const cv::Size ink = ft->getTextSize(symbol, px, -1, &baseline);
  const int spacing = static_cast<int>(std::lround(0.1 * px));
  const int advance = std::max(ink.width, static_cast<int>(std::lround(0.25 * px))) + spacing;

  GlyphMask g{Raster(height, advance, 1, 0), advance};
  if (symbol != " " && ink.width > 0) {
    cv::Mat cell(height, advance, CV_8UC3, cv::Scalar(0, 0, 0));
    const cv::Point origin(static_cast<int>(std::lround(0.05 * px)), static_cast<int>(std::lround(0.85 * px)));
    ft->putText(cell, symbol, origin, px, cv::Scalar(255, 255, 255), -1, 16, true);
    for (int r = 0; r < height; ++r)
      for (int c = 0; c < advance; ++c) g.mask.at(r, c) = cell.at<cv::Vec3b>(r, c)[0];
  }
  cache_.emplace(key, g);
  return g;
}

}  // namespace textforge
