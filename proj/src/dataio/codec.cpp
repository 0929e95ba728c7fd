#include <stdexcept>

#include "textforge/dataio.hpp"
#include "textforge/errors.hpp"

namespace textforge {

LabelCodec::LabelCodec() {
  for (char c = '0'; c <= '9'; ++c) alphabet_.push_back(c);
  for (char c = 'A'; c <= 'Z'; ++c) alphabet_.push_back(c);
  for (char c = 'a'; c <= 'z'; ++c) alphabet_.push_back(c);
  lookup_.fill(-1);
  for (int i = 0; i < kAlphabetSize; ++i) lookup_[static_cast<unsigned char>(alphabet_[i])] = i;
}

int LabelCodec::index_of(char c) const { return lookup_[static_cast<unsigned char>(c)]; }

std::vector<int> LabelCodec::encode(std::string_view text) const {
  std::vector<int> out;
  out.reserve(text.size() + 1);
  std::string bad;
  for (char c : text) {
    const int idx = index_of(c);
    if (idx < 0) {
      if (bad.find(c) == std::string::npos) bad.push_back(c);
      continue;
    }
    out.push_back(idx);
  }
  if (!bad.empty()) throw UnsupportedSymbol("unsupported symbol(s) '" + bad + "' in label '" + std::string(text) + "'");
  out.push_back(kEos);
  return out;
}

std::string LabelCodec::decode(const std::vector<int>& indices) const {
  std::string out;
  for (int idx : indices) {
    if (idx == kEos) break;
    if (idx < 0 || idx > kEos) throw std::out_of_range("decode: index " + std::to_string(idx) + " outside [0, 62]");
    out.push_back(alphabet_[static_cast<std::size_t>(idx)]);
  }
  return out;
}

}  // namespace textforge
