#include <filesystem>
#include <iostream>
#include <thread>
#include <vector>

#include "cli.hpp"

using namespace textforge::cli;

int main(int argc, char** argv) {
  CLI::App app{"Curved scene-text synthesis, rectification and evaluation tools", "textforge"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", TEXTFORGE_VERSION);

  Globals g;
  g.jobs = std::max(1u, std::thread::hardware_concurrency());
  app.add_option("--seed", g.seed, "Base seed")->envname("TEXTFORGE_SEED")->capture_default_str();
  app.add_option("--jobs", g.jobs, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--out", g.out, "Output directory");

  const std::vector<Command> commands{
      add_synth(app, g),  add_rectify(app, g), add_preprocess(app, g), add_mix(app, g),
      add_evaluate(app, g), add_report(app, g), add_vote(app, g),
  };

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  for (const Command& cmd : commands) {
    if (!cmd.app->parsed()) continue;
    try {
      return cmd.action();
    } catch (const UsageError& e) {
      std::cerr << "textforge: " << e.what() << '\n';
      return kExitUsage;
    } catch (const std::exception& e) {
      std::cerr << "textforge: " << e.what() << '\n';
      return kExitData;
    }
  }
  return kExitUsage;
}
