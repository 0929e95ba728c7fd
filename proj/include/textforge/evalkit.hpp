#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace textforge {

struct EvalConfig {
  bool case_sensitive = false;
  bool alnum_only = true;
  int min_len_filter = 0;  // 3 for IC03 / IC15
};

/// Applies the configured normalization (alphanumeric filter, case folding).
std::string normalize_label(std::string_view s, const EvalConfig& cfg);

struct AccuracyResult {
  std::size_t correct = 0;
  std::size_t counted = 0;
  double accuracy() const { return counted == 0 ? 0.0 : static_cast<double>(correct) / counted; }
};

/// Exact-match word accuracy over the pairs that survive the length filter.
/// Throws LengthMismatch, EmptyAfterFilter.
AccuracyResult score_words(std::span<const std::string> preds, std::span<const std::string> gts,
                           const EvalConfig& cfg);
double word_accuracy(std::span<const std::string> preds, std::span<const std::string> gts,
                     const EvalConfig& cfg);

struct EvalRow {
  std::string dataset;
  std::size_t size = 0;
  double accuracy = 0.0;
};

/// Size-weighted mean accuracy. Throws EmptyInput.
double micro_average(std::span<const EvalRow> rows);

/// Parses "dataset,size,accuracy" lines; a header line is skipped.
std::vector<EvalRow> parse_eval_csv(std::string_view text);

/// Most frequent prediction; ties go to the earliest-listed candidate.
std::string vote(std::span<const std::string> predictions);

}  // namespace textforge
