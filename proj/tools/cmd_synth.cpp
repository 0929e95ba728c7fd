#include <optional>

#include <fmt/format.h>

#include "cli.hpp"
#include "textforge/dataio.hpp"
#include "textforge/image_io.hpp"
#include "textforge/synth.hpp"

namespace textforge::cli {

namespace {

struct SynthFlags {
  fs::path fonts;
  fs::path backgrounds;
  fs::path corpus;
  int count = 0;
  std::optional<double> curved_frac_target;
  bool block_glyphs = false;
};

}  // namespace

Command add_synth(CLI::App& root, const Globals& g) {
  auto f = std::make_shared<SynthFlags>();
  CLI::App* sub = root.add_subcommand("synth", "Render synthetic word images and manifest.jsonl");
  sub->add_option("--fonts", f->fonts, "Directory of .ttf/.otf fonts");
  sub->add_option("--backgrounds", f->backgrounds, "Directory of background images (default: procedural)");
  sub->add_option("--corpus", f->corpus, "Text corpus, one passage per line")->required();
  sub->add_option("--count", f->count, "Number of samples")->required()->check(CLI::PositiveNumber);
  sub->add_option("--curved-frac-target", f->curved_frac_target,
                  "Calibrate the curve probability to this overall curved fraction")
      ->check(CLI::Range(0.0, 1.0));
  sub->add_flag("--block-glyphs", f->block_glyphs, "Font-free block glyphs");

  return {sub, [sub, f, &g] {
            SynthConfig cfg;
            cfg.fonts_dir = f->fonts;
            cfg.backgrounds_dir = f->backgrounds;
            cfg.corpus_path = f->corpus;
            cfg.count = f->count;
            cfg.seed = g.seed;
            cfg.glyph_source = f->block_glyphs ? GlyphSource::Block : GlyphSource::Font;
            if (!f->block_glyphs && f->fonts.empty()) throw UsageError("synth: --fonts is required unless --block-glyphs");
            try {
              cfg.validate();
            } catch (const std::invalid_argument& e) {
              throw UsageError(e.what());
            }
            const fs::path out = require_out(g);

            const auto assets = SynthAssets::load(cfg);
            if (f->curved_frac_target)
              cfg.curve_prob_given_eligible = calibrate_curve_prob(*f->curved_frac_target, cfg, *assets);
            const Synthesizer synth(cfg, assets);

            Manifest m{"synth", Split::Train, std::vector<SampleRecord>(static_cast<std::size_t>(f->count))};
            parallel_for(m.records.size(), g.jobs, [&](std::size_t i) {
              SynthSample s = synth.render(i);
              write_png(out / s.record.image_path, s.image);
              m.records[i] = std::move(s.record);
            });
            write_manifest(out / "manifest.jsonl", m);

            std::size_t curved = 0;
            for (const auto& r : m.records) curved += r.is_curved;
            write_run_metadata(out, *sub, g,
                               {{"records", m.records.size()},
                                {"curved", curved},
                                {"curve_prob_given_eligible", cfg.curve_prob_given_eligible}});
            return kExitOk;
          }};
}

}  // namespace textforge::cli
