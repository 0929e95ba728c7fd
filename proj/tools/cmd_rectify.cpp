#include <optional>

#include <fmt/format.h>

#include "cli.hpp"
#include "textforge/dataio.hpp"
#include "textforge/errors.hpp"
#include "textforge/geometry.hpp"
#include "textforge/image_io.hpp"
#include "textforge/snake.hpp"

namespace textforge::cli {

namespace {

struct RectifyFlags {
  std::string method;
  fs::path manifest;
  int height = 64;
  int width = 256;
  int margin = 4;
  bool anisotropic = false;
  bool smooth = false;
};

Raster rectify_one(const RectifyFlags& f, bool fixed_width, const Raster& img, const ControlPolygon& poly) {
  const Cropped c = crop(img, poly, f.margin);
  if (f.method == "tps") {
    GridSpec spec;
    spec.out_height = f.height;
    spec.out_width = f.width;
    spec.isotropic = !f.anisotropic;
    return tps_rectify(c.image, c.polygon, spec);
  }
  StripSpec spec;
  spec.out_height = f.height;
  spec.width_mode = fixed_width ? WidthMode::Fixed : WidthMode::AspectPreserving;
  spec.fixed_width = f.width;
  spec.smooth_centerline = f.smooth;
  return unroll(c.image, geometry_from_polygon(c.polygon), spec);
}

}  // namespace

Command add_rectify(CLI::App& root, const Globals& g) {
  auto f = std::make_shared<RectifyFlags>();
  CLI::App* sub = root.add_subcommand("rectify", "Straighten polygon-annotated text into strips");
  sub->add_option("method", f->method, "tps or snake")->required()->check(CLI::IsMember({"tps", "snake"}));
  sub->add_option("--manifest", f->manifest, "Input manifest.jsonl")->required()->check(CLI::ExistingFile);
  sub->add_option("--height", f->height, "Output height")->check(CLI::PositiveNumber)->capture_default_str();
  CLI::Option* width = sub->add_option("--width", f->width, "Output width (snake: fixes the width)")
                           ->check(CLI::PositiveNumber)
                           ->capture_default_str();
  sub->add_option("--margin", f->margin, "Crop margin around the polygon, px")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  sub->add_flag("--anisotropic", f->anisotropic, "TPS kernel in the unit square instead of output pixels");
  sub->add_flag("--smooth", f->smooth, "Smooth the snake center line");

  return {sub, [sub, f, width, &g] {
            const fs::path out = require_out(g);
            const Manifest in = read_manifest(f->manifest);
            const fs::path base = f->manifest.parent_path();
            const bool fixed_width = width->count() > 0;

            std::vector<std::optional<SampleRecord>> results(in.records.size());
            std::vector<std::string> errors(in.records.size());
            parallel_for(in.records.size(), g.jobs, [&](std::size_t i) {
              const SampleRecord& rec = in.records[i];
              if (!rec.polygon) return;
              try {
                const Raster strip = rectify_one(*f, fixed_width, read_image(base / rec.image_path), *rec.polygon);
                SampleRecord o;
                o.id = rec.id;
                o.image_path = fmt::format("images/{}.png", rec.id);
                o.text = rec.text;
                o.curve = rec.curve;
                o.is_curved = rec.is_curved;
                write_png(out / o.image_path, strip);
                results[i] = std::move(o);
              } catch (const Error& e) {
                errors[i] = e.what();
              }
            });

            Manifest m{"rectified", in.split, {}};
            std::size_t skipped = 0, failed = 0;
            for (std::size_t i = 0; i < results.size(); ++i) {
              if (!in.records[i].polygon) {
                ++skipped;
                warn(fmt::format("record '{}' has no polygon, skipped", in.records[i].id));
              } else if (!results[i]) {
                ++failed;
                warn(fmt::format("record '{}' failed: {}", in.records[i].id, errors[i]));
              } else {
                m.records.push_back(std::move(*results[i]));
              }
            }
            write_manifest(out / "manifest.jsonl", m);
            write_run_metadata(out, *sub, g,
                               {{"input", in.records.size()},
                                {"rectified", m.records.size()},
                                {"skipped", skipped},
                                {"failed", failed}});
            return failed > 0 && m.records.empty() ? kExitData : kExitOk;
          }};
}

}  // namespace textforge::cli
