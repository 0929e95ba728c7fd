#include <stdexcept>

#include "textforge/dataio.hpp"
#include "textforge/errors.hpp"
#include "textforge/rng.hpp"

namespace textforge {

std::vector<MixDraw> mix_draws(std::size_t real_size, std::size_t synth_size, const MixConfig& cfg,
                               std::size_t n) {
  const double p = cfg.real_fraction;
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("MixConfig: real_fraction must lie in [0, 1]");
  if (n > 0 && p > 0.0 && real_size == 0) throw EmptyPool("mix: real pool is empty");
  if (n > 0 && p < 1.0 && synth_size == 0) throw EmptyPool("mix: synthetic pool is empty");

  Rng rng(cfg.seed);
  std::vector<MixDraw> draws;
  draws.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    // p == 1 must never fall through to the synthetic pool, so compare with <.
    const bool real = rng.uniform() < p;
    const std::size_t size = real ? real_size : synth_size;
    draws.push_back({real ? Pool::Real : Pool::Synthetic, static_cast<std::size_t>(rng.below(size))});
  }
  return draws;
}

std::vector<SampleRecord> mix_stream(const Manifest& real, const Manifest& synth,
                                     const MixConfig& cfg, std::size_t n) {
  std::vector<SampleRecord> out;
  out.reserve(n);
  for (const MixDraw& d : mix_draws(real.records.size(), synth.records.size(), cfg, n))
    out.push_back(d.pool == Pool::Real ? real.records[d.index] : synth.records[d.index]);
  return out;
}

}  // namespace textforge
