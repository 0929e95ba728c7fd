#include <algorithm>
#include <atomic>
#include <fstream>
#include <iostream>
#include <mutex>
#include <thread>
#include <vector>

#include "cli.hpp"
#include "textforge/errors.hpp"

namespace textforge::cli {

void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::clamp<std::size_t>(jobs, 1, std::max<std::size_t>(n, 1));
  std::atomic<std::size_t> next{0};
  std::mutex mu;
  std::size_t failed_at = n;
  std::exception_ptr failure;

  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(mu);
        if (i < failed_at) failed_at = i, failure = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);
}

fs::path require_out(const Globals& g) {
  if (g.out.empty()) throw UsageError("--out is required for this command");
  fs::create_directories(g.out);
  return g.out;
}

namespace {

void collect_flags(const CLI::App& app, Json& flags) {
  for (const CLI::Option* opt : app.get_options()) {
    if (opt == app.get_help_ptr()) continue;
    const std::string name = opt->get_name();
    const std::string key = name.substr(name.find_first_not_of('-'));
    const auto& res = opt->results();
    if (res.empty()) {
      if (opt->get_type_size() == 0)
        flags[key] = false;
      else
        flags[key] = opt->get_default_str();
    } else if (opt->get_type_size() == 0) {
      flags[key] = true;
    } else if (res.size() == 1) {
      flags[key] = res.front();
    } else {
      flags[key] = res;
    }
  }
}

}  // namespace

void write_run_metadata(const fs::path& dir, const CLI::App& sub, const Globals& g, const Json& counts) {
  Json meta;
  meta["command"] = sub.get_name();
  meta["version"] = TEXTFORGE_VERSION;
  meta["seed"] = g.seed;
  meta["jobs"] = g.jobs;
  Json flags = Json::object();
  collect_flags(sub, flags);
  meta["flags"] = std::move(flags);
  meta["counts"] = counts;
  fs::create_directories(dir);
  std::ofstream out(dir / "run.json", std::ios::binary | std::ios::trunc);
  out << meta.dump(2) << '\n';
  if (!out) throw ManifestError("cannot write " + (dir / "run.json").string());
}

std::vector<std::pair<std::string, std::string>> read_predictions(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ManifestError("cannot open predictions " + path.string());
  std::vector<std::pair<std::string, std::string>> out;
  std::size_t line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos)
      throw ManifestError(path.string() + ":" + std::to_string(line_no) + ": expected id<TAB>text");
    out.emplace_back(line.substr(0, tab), line.substr(tab + 1));
  }
  return out;
}

void warn(const std::string& msg) { std::cerr << "textforge: warning: " << msg << '\n'; }

}  // namespace textforge::cli
