#pragma once

#include <cstdint>
#include <exception>
#include <filesystem>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

namespace textforge::cli {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

/// Bad flag combinations detected after parsing.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Globals {
  std::uint64_t seed = 0;
  unsigned jobs = 1;
  fs::path out;
};

using Action = std::function<int()>;

struct Command {
  CLI::App* app = nullptr;
  Action action;
};

/// Each registrar adds one subcommand; the action runs after parsing.
Command add_synth(CLI::App& root, const Globals& g);
Command add_rectify(CLI::App& root, const Globals& g);
Command add_preprocess(CLI::App& root, const Globals& g);
Command add_mix(CLI::App& root, const Globals& g);
Command add_evaluate(CLI::App& root, const Globals& g);
Command add_report(CLI::App& root, const Globals& g);
Command add_vote(CLI::App& root, const Globals& g);

/// Calls fn(i) for i in [0, n) on up to `jobs` threads. The exception from
/// the lowest failing index is rethrown after all workers finish.
void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& fn);

fs::path require_out(const Globals& g);

/// run.json next to the outputs: command, version, seed, jobs, every flag
/// of the subcommand and the record counts.
void write_run_metadata(const fs::path& dir, const CLI::App& sub, const Globals& g, const Json& counts);

/// "id<TAB>text" lines in file order.
std::vector<std::pair<std::string, std::string>> read_predictions(const fs::path& path);

void warn(const std::string& msg);

}  // namespace textforge::cli
