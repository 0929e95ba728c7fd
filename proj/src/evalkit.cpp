#include "textforge/evalkit.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <stdexcept>
#include <unordered_map>
#include <utility>

#include "textforge/errors.hpp"

namespace textforge {

std::string normalize_label(std::string_view s, const EvalConfig& cfg) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    const auto u = static_cast<unsigned char>(c);
    if (cfg.alnum_only && !(u < 128 && std::isalnum(u))) continue;
    out.push_back(cfg.case_sensitive ? c : static_cast<char>(u < 128 ? std::tolower(u) : u));
  }
  return out;
}

namespace {

std::size_t utf8_length(std::string_view s) {
  return static_cast<std::size_t>(
      std::count_if(s.begin(), s.end(), [](char c) { return (static_cast<unsigned char>(c) & 0xC0) != 0x80; }));
}

}  // namespace

AccuracyResult score_words(std::span<const std::string> preds, std::span<const std::string> gts,
                           const EvalConfig& cfg) {
  if (cfg.min_len_filter < 0) throw std::invalid_argument("EvalConfig: min_len_filter must be >= 0");
  if (preds.size() != gts.size())
    throw LengthMismatch("word_accuracy: " + std::to_string(preds.size()) + " predictions vs " +
                         std::to_string(gts.size()) + " ground truths");
  AccuracyResult result;
  for (std::size_t i = 0; i < gts.size(); ++i) {
    const std::string gt = normalize_label(gts[i], cfg);
    if (utf8_length(gt) < static_cast<std::size_t>(cfg.min_len_filter)) continue;
    ++result.counted;
    if (normalize_label(preds[i], cfg) == gt) ++result.correct;
  }
  if (result.counted == 0) throw EmptyAfterFilter("word_accuracy: no pairs left after filtering");
  return result;
}

double word_accuracy(std::span<const std::string> preds, std::span<const std::string> gts,
                     const EvalConfig& cfg) {
  return score_words(preds, gts, cfg).accuracy();
}

double micro_average(std::span<const EvalRow> rows) {
  if (rows.empty()) throw EmptyInput("micro_average: no rows");
  double weighted = 0.0;
  double total = 0.0;
  for (const auto& row : rows) {
    if (row.size == 0) throw std::invalid_argument("micro_average: row '" + row.dataset + "' has size 0");
    weighted += row.accuracy * static_cast<double>(row.size);
    total += static_cast<double>(row.size);
  }
  return weighted / total;
}

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::vector<EvalRow> parse_eval_csv(std::string_view text) {
  std::vector<EvalRow> rows;
  std::size_t line_no = 0;
  bool header_allowed = true;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    const std::string_view line = trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    const auto c1 = line.find(',');
    const auto c2 = c1 == std::string_view::npos ? c1 : line.find(',', c1 + 1);
    if (c2 == std::string_view::npos) throw std::invalid_argument("csv line " + std::to_string(line_no) + ": expected dataset,size,accuracy");
    const std::string_view size_s = trim(line.substr(c1 + 1, c2 - c1 - 1));
    const std::string_view acc_s = trim(line.substr(c2 + 1));
    EvalRow row{std::string(trim(line.substr(0, c1))), 0, 0.0};
    const auto r1 = std::from_chars(size_s.data(), size_s.data() + size_s.size(), row.size);
    const auto r2 = std::from_chars(acc_s.data(), acc_s.data() + acc_s.size(), row.accuracy);
    if (r1.ec != std::errc{} || r2.ec != std::errc{}) {
      if (std::exchange(header_allowed, false)) continue;  // header
      throw std::invalid_argument("csv line " + std::to_string(line_no) + ": bad number");
    }
    header_allowed = false;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string vote(std::span<const std::string> predictions) {
  if (predictions.empty()) throw EmptyInput("vote: no predictions");
  std::unordered_map<std::string_view, int> counts;
  for (const auto& p : predictions) ++counts[p];
  const std::string* best = &predictions.front();
  int best_count = 0;
  for (const auto& p : predictions) {
    const int c = counts[p];
    if (c > best_count) {
      best = &p;
      best_count = c;
    }
  }
  return *best;
}

}  // namespace textforge
