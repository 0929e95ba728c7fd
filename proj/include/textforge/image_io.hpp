#pragma once

#include <filesystem>

#include "textforge/raster.hpp"

namespace textforge {

/// Decodes PNG/JPEG into an RGB (3-channel) raster. Throws AssetError.
Raster read_image(const std::filesystem::path& path);

/// Lossless PNG with fixed encoder settings so identical rasters give
/// identical bytes. Creates parent directories.
void write_png(const std::filesystem::path& path, const Raster& img);

}  // namespace textforge
