#include "textforge/image_io.hpp"

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include <vector>

#include "textforge/errors.hpp"

namespace textforge {

Raster read_image(const std::filesystem::path& path) {
  cv::Mat m;
  try {
    m = cv::imread(path.string(), cv::IMREAD_COLOR);
  } catch (const cv::Exception& e) {
    throw AssetError("cannot decode image " + path.string() + ": " + e.what());
  }
  if (m.empty() || m.depth() != CV_8U) throw AssetError("cannot decode image " + path.string());
  Raster out(m.rows, m.cols, 3);
  for (int r = 0; r < m.rows; ++r) {
    const auto* row = m.ptr<cv::Vec3b>(r);
    for (int c = 0; c < m.cols; ++c) {
      out.at(r, c, 0) = row[c][2];
      out.at(r, c, 1) = row[c][1];
      out.at(r, c, 2) = row[c][0];
    }
  }
  return out;
}

void write_png(const std::filesystem::path& path, const Raster& img) {
  if (img.empty()) throw std::invalid_argument("write_png: empty raster");
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  cv::Mat m(img.height, img.width, img.channels == 3 ? CV_8UC3 : CV_8UC1);
  for (int r = 0; r < img.height; ++r) {
    auto* row = m.ptr<std::uint8_t>(r);
    for (int c = 0; c < img.width; ++c) {
      if (img.channels == 3) {
        row[3 * c + 0] = img.at(r, c, 2);
        row[3 * c + 1] = img.at(r, c, 1);
        row[3 * c + 2] = img.at(r, c, 0);
      } else {
        row[c] = img.at(r, c);
      }
    }
  }
  const std::vector<int> params{cv::IMWRITE_PNG_COMPRESSION, 6, cv::IMWRITE_PNG_STRATEGY,
                                cv::IMWRITE_PNG_STRATEGY_DEFAULT};
  if (!cv::imwrite(path.string(), m, params)) throw std::runtime_error("cannot write " + path.string());
}

}  // namespace textforge
