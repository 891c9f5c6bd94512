#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace softtmvn {

/// Per-chain random source. Not thread-safe; give each chain its own.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1); safe to take the log of.
  double uniform_open() {
    double u = 0.0;
    do {
      u = uniform();
    } while (u == 0.0);
    return u;
  }

  double normal() { return normal_(engine_); }

  /// Exponential with rate 1.
  double exponential() { return -std::log(uniform_open()); }

  double gamma(double shape, double scale) { return std::gamma_distribution<double>(shape, scale)(engine_); }

  /// Uniform integer on the closed range [lo, hi].
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(engine_);
  }

  std::mt19937_64& engine() noexcept { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

/// Seed splitting rule: child = splitmix64(seed + (stream + 1) * golden).
/// Used for per-chain and per-replicate streams so that a single 64-bit seed
/// drives every run.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

}  // namespace softtmvn
