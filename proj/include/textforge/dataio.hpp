#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "textforge/geometry.hpp"
#include "textforge/raster.hpp"
#include "textforge/record.hpp"

namespace textforge {

enum class Split { Train, Test };

struct Manifest {
  std::string source_name;
  Split split = Split::Train;
  std::vector<SampleRecord> records;

  bool operator==(const Manifest&) const = default;
};

// --- manifest.jsonl -------------------------------------------------------

std::string serialize_record(const SampleRecord& rec);
SampleRecord parse_record(std::string_view line);

/// One record per line, LF terminated.
std::string serialize_manifest(const Manifest& m);
Manifest parse_manifest(std::string_view text, std::string source_name = {},
                        Split split = Split::Train);

Manifest read_manifest(const std::filesystem::path& path, Split split = Split::Train);
void write_manifest(const std::filesystem::path& path, const Manifest& m);

/// Throws ManifestError on duplicate ids or missing image files.
void validate_manifest(const Manifest& m, const std::filesystem::path& base_dir);

// --- cropping ---------------------------------------------------------------

struct Cropped {
  Raster image;
  ControlPolygon polygon;  // shifted into the crop frame
  int offset_x = 0;
  int offset_y = 0;
};

/// Axis-aligned bounding box of the polygon grown by margin_px and clamped to
/// the image. Throws EmptyIntersection when nothing is left.
Cropped crop(const Raster& img, const ControlPolygon& poly, int margin_px = 0);

// --- real/synthetic mixing --------------------------------------------------

struct MixConfig {
  double real_fraction = 0.15;
  std::uint64_t seed = 0;
};

enum class Pool { Real, Synthetic };

struct MixDraw {
  Pool pool;
  std::size_t index;  // position within the chosen pool
};

/// n draws: real pool with probability p, then uniform within the pool, with
/// replacement. Throws EmptyPool if a pool that can be selected is empty.
std::vector<MixDraw> mix_draws(std::size_t real_size, std::size_t synth_size, const MixConfig& cfg,
                               std::size_t n);

std::vector<SampleRecord> mix_stream(const Manifest& real, const Manifest& synth,
                                     const MixConfig& cfg, std::size_t n);

// --- label codec -------------------------------------------------------------

/// Digits, upper case, lower case, then EOS at index 62.
class LabelCodec {
 public:
  static constexpr int kAlphabetSize = 62;
  static constexpr int kEos = 62;

  LabelCodec();

  std::string_view alphabet() const { return alphabet_; }
  int index_of(char c) const;  // -1 when absent

  /// Appends EOS. Throws UnsupportedSymbol naming every offending character.
  std::vector<int> encode(std::string_view text) const;
  /// Stops at the first EOS.
  std::string decode(const std::vector<int>& indices) const;

 private:
  std::string alphabet_;
  std::array<int, 256> lookup_{};
};

}  // namespace textforge
