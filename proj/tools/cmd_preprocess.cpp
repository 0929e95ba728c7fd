#include <fmt/format.h>

#include "cli.hpp"
#include "textforge/dataio.hpp"
#include "textforge/image_io.hpp"
#include "textforge/preprocess.hpp"

namespace textforge::cli {

namespace {

struct PreprocessFlags {
  std::string mode;
  int side = 256;
  double rotate_prob = 0.05;
  fs::path manifest;
};

Quad map_quad(const Quad& q, const Placement& p, int k, int side) {
  Quad out{};
  for (std::size_t j = 0; j < q.size(); ++j) out[j] = rotate_point_k90(p.apply(q[j]), k, side, side);
  return out;
}

}  // namespace

Command add_preprocess(CLI::App& root, const Globals& g) {
  auto f = std::make_shared<PreprocessFlags>();
  CLI::App* sub = root.add_subcommand("preprocess", "Resize to recognizer input (fixed 64x256 or squarized)");
  sub->add_option("--mode", f->mode, "squarize or fixed")->required()->check(CLI::IsMember({"squarize", "fixed"}));
  sub->add_option("--side", f->side, "Square side for squarize")->check(CLI::PositiveNumber)->capture_default_str();
  sub->add_option("--rotate-prob", f->rotate_prob, "Probability of each of the 90/180/270 rotations (squarize only)")
      ->check(CLI::Range(0.0, 1.0 / 3.0))
      ->capture_default_str();
  sub->add_option("--manifest", f->manifest, "Input manifest.jsonl")->required()->check(CLI::ExistingFile);

  return {sub, [sub, f, &g] {
            const fs::path out = require_out(g);
            const Manifest in = read_manifest(f->manifest);
            const fs::path base = f->manifest.parent_path();
            const bool square = f->mode == "squarize";
            const AugmentPolicy policy{square ? f->rotate_prob : 0.0};

            Manifest m{"preprocessed", in.split, in.records};
            std::vector<int> rotations(in.records.size(), 0);
            parallel_for(in.records.size(), g.jobs, [&](std::size_t i) {
              SampleRecord& rec = m.records[i];
              const Raster img = read_image(base / rec.image_path);
              Raster result;
              Placement place;
              int k = 0;
              if (square) {
                Squarized sq = squarize(img, f->side);
                place = sq.placement;
                Rng rng(g.seed, i);
                const std::optional<ControlPolygon> poly =
                    rec.polygon ? std::optional(transform(*rec.polygon, place)) : std::nullopt;
                Augmented a = augment(sq.image, poly, policy, rng);
                result = std::move(a.image);
                rec.polygon = a.polygon;
                k = a.k;
              } else {
                result = fixed_resize(img);
                place.scale_x = static_cast<double>(kFixedWidth) / img.width;
                place.scale_y = static_cast<double>(kFixedHeight) / img.height;
                if (rec.polygon) rec.polygon = transform(*rec.polygon, place);
              }
              if (rec.char_boxes)
                for (Quad& q : *rec.char_boxes) q = map_quad(q, place, k, f->side);
              rotations[i] = k;
              rec.image_path = fmt::format("images/{}.png", rec.id);
              write_png(out / rec.image_path, result);
            });
            write_manifest(out / "manifest.jsonl", m);

            std::size_t rotated = 0;
            for (int k : rotations) rotated += k != 0;
            write_run_metadata(out, *sub, g, {{"records", m.records.size()}, {"rotated", rotated}});
            return kExitOk;
          }};
}

}  // namespace textforge::cli
