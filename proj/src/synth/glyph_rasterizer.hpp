#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <tuple>
#include <vector>

#include "textforge/synth.hpp"

namespace textforge {

/// TrueType/OpenType glyph cells. Rendering calls are serialized; results are
/// cached per (font, symbol, pixel size).
class GlyphRasterizer {
 public:
  /// Throws AssetError when a font cannot be loaded.
  explicit GlyphRasterizer(std::vector<std::filesystem::path> font_files);
  ~GlyphRasterizer();

  std::size_t size() const { return files_.size(); }

  /// Cell height for a font pixel size; the baseline sits at 0.85 * px.
  static int cell_height(int px);

  GlyphMask glyph(std::size_t font, const std::string& symbol, int px);

 private:
  struct Face;
  std::vector<std::filesystem::path> files_;
  std::vector<std::unique_ptr<Face>> faces_;
  std::mutex mutex_;
  std::map<std::tuple<std::size_t, std::string, int>, GlyphMask> cache_;
};

}  // namespace textforge
