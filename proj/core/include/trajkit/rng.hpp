#pragma once

#include <cstdint>
#include <random>

namespace trajkit {

/// Deterministic random source used by every generator in the toolkit.
///
/// The raw stream is std::mt19937_64, whose output is specified bit-exactly
/// by the standard. Floating-point draws are derived with fixed transforms
/// (53-bit uniform, Box-Muller normal) so the same seed replays the same
/// values; the normal path additionally depends on libm rounding of
/// log/cos/sin, which is stable on a given platform.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : seed_(seed), gen_(seed) {}

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64() { return gen_(); }

  /// Uniform in [0, 1), 53-bit resolution.
  double uniform01() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Unbiased integer in [0, n) by rejection.
  std::uint64_t below(std::uint64_t n);

  /// Standard normal via Box-Muller (pairs cached).
  double normal();
  double normal(double mean, double stddev) { return mean + stddev * normal(); }

  /// Independent child stream; splitmix64 of (seed, stream index).
  SeededRng derive(std::uint64_t stream) const;

 private:
  std::uint64_t seed_;
  std::mt19937_64 gen_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace trajkit
