#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace fsc {

/// Deterministic random source. All distribution transforms are implemented
/// here rather than with std:: distributions, whose output is
/// implementation-defined; a (seed, stream) pair therefore reproduces the
/// same draw sequence on any platform.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  /// Uniform double in [0, 1).
  double uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n). Requires n > 0.
  int uniform_int(int n) {
    return static_cast<int>(uniform() * static_cast<double>(n));
  }

  /// Standard normal via Box-Muller (stateless variant: one draw per pair).
  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
  }

  double normal(double mean, double stddev) { return mean + stddev * normal(); }

  std::uint64_t next_u64() { return gen_(); }

private:
  std::mt19937_64 gen_;
};

/// Named sub-streams derived from one run seed. Keeping the streams apart
/// means e.g. changing how many exploration draws happen cannot shift the
/// environment noise sequence.
enum class Stream : std::uint64_t {
  Init = 1,
  EnvNoise = 2,
  Exploration = 3,
  HillClimb = 4,
  Sampling = 5,
  Model = 6,
  Eval = 7,
  Data = 8,
};

std::uint64_t derive_seed(std::uint64_t run_seed, Stream stream);

/// Convenience: a stream-split RNG for one run.
class RngFamily {
public:
  explicit RngFamily(std::uint64_t run_seed) : run_seed_(run_seed) {}
  Rng stream(Stream s) const { return Rng(derive_seed(run_seed_, s)); }
  std::uint64_t run_seed() const { return run_seed_; }

private:
  std::uint64_t run_seed_;
};

}  // namespace fsc
