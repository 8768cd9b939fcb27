#pragma once

#include <cstdint>
#include <random>

namespace lqg {

/// Mixes a 64-bit state one splitmix64 step and returns the output word.
std::uint64_t splitmix64(std::uint64_t& state);

/// Seed stream splitting rule used by every Monte-Carlo loop: replica k of a
/// run with root seed s draws from derive_seed(s, k).  Replica streams are
/// pairwise distinct and reproducible regardless of scheduling.
std::uint64_t derive_seed(std::uint64_t root, std::uint64_t k);

/// Deterministic random source.  All randomness in the library flows through
/// this class so that (parameters, seed) fully determine every sample.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t bits();
  /// Uniform on [0,1), 53-bit resolution.
  double uniform();
  /// Uniform on (0,1], safe as a log argument.
  double uniform_pos();
  /// Standard normal via Box-Muller on explicit uniforms (no reliance on
  /// std::normal_distribution, whose stream is implementation-defined).
  double gaussian();
  /// Uniform integer in [0, n), rejection-free modulo bias below 2^-11 for
  /// n < 2^53; we use rejection to make it exact.
  std::uint64_t below(std::uint64_t n);

 private:
  std::mt19937_64 eng_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace lqg
