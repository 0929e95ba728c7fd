#include <fstream>
#include <iostream>
#include <sstream>
#include <unordered_map>

#include <fmt/format.h>

#include "cli.hpp"
#include "textforge/dataio.hpp"
#include "textforge/errors.hpp"
#include "textforge/evalkit.hpp"

namespace textforge::cli {

namespace {

struct EvalFlags {
  fs::path manifest;
  fs::path predictions;
  bool case_sensitive = false;
  bool keep_punct = false;
  int min_len = 0;
};

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ManifestError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

Command add_evaluate(CLI::App& root, const Globals& g) {
  auto f = std::make_shared<EvalFlags>();
  CLI::App* sub = root.add_subcommand("evaluate", "Word accuracy of predictions against a manifest");
  sub->add_option("--manifest", f->manifest, "Ground-truth manifest.jsonl")->required()->check(CLI::ExistingFile);
  sub->add_option("--pred", f->predictions, "Predictions, id<TAB>text per line")->required()->check(CLI::ExistingFile);
  sub->add_flag("--case-sensitive", f->case_sensitive, "Compare case-sensitively");
  sub->add_flag("--keep-punct", f->keep_punct, "Keep non-alphanumeric characters");
  sub->add_option("--min-len", f->min_len, "Ignore ground truths shorter than this")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();

  return {sub, [sub, f, &g] {
            const Manifest m = read_manifest(f->manifest);
            std::unordered_map<std::string, std::string> by_id;
            for (auto& [id, text] : read_predictions(f->predictions)) by_id.emplace(id, text);

            std::vector<std::string> preds, gts;
            std::size_t missing = 0;
            for (const auto& rec : m.records) {
              const auto it = by_id.find(rec.id);
              missing += it == by_id.end();
              preds.push_back(it == by_id.end() ? std::string{} : it->second);
              gts.push_back(rec.text);
            }
            if (missing > 0) warn(fmt::format("{} records have no prediction and count as wrong", missing));

            const EvalConfig cfg{f->case_sensitive, !f->keep_punct, f->min_len};
            const AccuracyResult r = score_words(preds, gts, cfg);
            std::cout << fmt::format("accuracy {:.4f} ({}/{})\n", r.accuracy(), r.correct, r.counted);
            if (!g.out.empty())
              write_run_metadata(g.out, *sub, g,
                                 {{"records", m.records.size()},
                                  {"counted", r.counted},
                                  {"correct", r.correct},
                                  {"missing", missing},
                                  {"accuracy", r.accuracy()}});
            return kExitOk;
          }};
}

Command add_report(CLI::App& root, const Globals& g) {
  auto files = std::make_shared<std::vector<fs::path>>();
  CLI::App* sub = root.add_subcommand("report", "Size-weighted average accuracy over benchmark rows");
  sub->add_option("csv", *files, "CSV files of dataset,size,accuracy")->required()->check(CLI::ExistingFile);

  return {sub, [sub, files, &g] {
            Json averages = Json::object();
            for (const fs::path& path : *files) {
              const auto rows = parse_eval_csv(slurp(path));
              const double avg = micro_average(rows);
              std::size_t total = 0;
              for (const auto& r : rows) total += r.size;
              std::cout << fmt::format("{}\t{:.3f}\t{:.6f}\t{}\n", path.filename().string(), avg, avg, total);
              averages[path.filename().string()] = avg;
            }
            if (!g.out.empty()) write_run_metadata(g.out, *sub, g, {{"files", files->size()}, {"averages", averages}});
            return kExitOk;
          }};
}

Command add_vote(CLI::App& root, const Globals& g) {
  auto files = std::make_shared<std::vector<fs::path>>();
  CLI::App* sub = root.add_subcommand("vote", "Majority vote over aligned prediction files");
  sub->add_option("predictions", *files, "Prediction files in priority order")->required()->check(CLI::ExistingFile);

  return {sub, [sub, files, &g] {
            const fs::path out = require_out(g);
            std::vector<std::vector<std::pair<std::string, std::string>>> runs;
            for (const fs::path& path : *files) runs.push_back(read_predictions(path));
            const auto& first = runs.front();
            for (std::size_t k = 1; k < runs.size(); ++k) {
              if (runs[k].size() != first.size())
                throw LengthMismatch(fmt::format("{} has {} lines, expected {}", (*files)[k].string(), runs[k].size(),
                                                 first.size()));
              for (std::size_t i = 0; i < first.size(); ++i)
                if (runs[k][i].first != first[i].first)
                  throw ManifestError(fmt::format("{} line {}: id '{}' does not match '{}'", (*files)[k].string(), i + 1,
                                                  runs[k][i].first, first[i].first));
            }

            std::ofstream os(out / "predictions.tsv", std::ios::binary | std::ios::trunc);
            std::vector<std::string> candidates(runs.size());
            for (std::size_t i = 0; i < first.size(); ++i) {
              for (std::size_t k = 0; k < runs.size(); ++k) candidates[k] = runs[k][i].second;
              os << first[i].first << '\t' << vote(candidates) << '\n';
            }
            if (!os) throw ManifestError("cannot write " + (out / "predictions.tsv").string());
            write_run_metadata(out, *sub, g, {{"records", first.size()}, {"models", runs.size()}});
            return kExitOk;
          }};
}

}  // namespace textforge::cli
