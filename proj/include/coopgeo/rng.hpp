#pragma once

#include <cstdint>
#include <random>

namespace coopgeo {

// Random stream owned by one replication. Conversions to real numbers are
// done here rather than through <random> distributions so that results are
// identical across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Independent stream for replication `index` of experiment `seed`.
  static Rng substream(std::uint64_t seed, std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index),
                      static_cast<std::uint32_t>(index >> 32), 0x9e3779b9u};
    return Rng(seq);
  }

  std::uint64_t next() { return engine_(); }

  // Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  explicit Rng(std::seed_seq& seq) : engine_(seq) {}

  std::mt19937_64 engine_;
};

}  // namespace coopgeo
