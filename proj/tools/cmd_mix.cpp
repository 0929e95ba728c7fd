#include <fmt/format.h>

#include "cli.hpp"
#include "textforge/dataio.hpp"

namespace textforge::cli {

namespace {

struct MixFlags {
  fs::path real;
  fs::path synth;
  double ratio = 0.15;
  std::size_t count = 0;
};

// Image paths in the merged manifest are relative to the output directory.
std::string rebase(const fs::path& manifest, const std::string& image, const fs::path& out) {
  const fs::path abs = fs::absolute(manifest).parent_path() / image;
  return fs::relative(abs.lexically_normal(), fs::absolute(out)).generic_string();
}

}  // namespace

Command add_mix(CLI::App& root, const Globals& g) {
  auto f = std::make_shared<MixFlags>();
  CLI::App* sub = root.add_subcommand("mix", "Draw a merged real/synthetic training manifest");
  sub->add_option("--real", f->real, "Real manifest.jsonl")->required()->check(CLI::ExistingFile);
  sub->add_option("--synth", f->synth, "Synthetic manifest.jsonl")->required()->check(CLI::ExistingFile);
  sub->add_option("--ratio", f->ratio, "Probability of drawing from the real pool")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  sub->add_option("--count", f->count, "Number of draws")->required();

  return {sub, [sub, f, &g] {
            const fs::path out = require_out(g);
            const Manifest real = read_manifest(f->real);
            const Manifest synth = read_manifest(f->synth);
            const auto draws = mix_draws(real.records.size(), synth.records.size(), {f->ratio, g.seed}, f->count);

            Manifest m{"mix", Split::Train, {}};
            m.records.reserve(draws.size());
            std::size_t n_real = 0;
            for (std::size_t i = 0; i < draws.size(); ++i) {
              const bool is_real = draws[i].pool == Pool::Real;
              n_real += is_real;
              SampleRecord rec = is_real ? real.records[draws[i].index] : synth.records[draws[i].index];
              // Draws are with replacement, so ids get a position prefix.
              rec.id = fmt::format("{:08d}_{}_{}", i, is_real ? "real" : "synth", rec.id);
              rec.image_path = rebase(is_real ? f->real : f->synth, rec.image_path, out);
              m.records.push_back(std::move(rec));
            }
            write_manifest(out / "manifest.jsonl", m);
            write_run_metadata(out, *sub, g,
                               {{"records", m.records.size()}, {"real", n_real}, {"synthetic", m.records.size() - n_real}});
            return kExitOk;
          }};
}

}  // namespace textforge::cli
