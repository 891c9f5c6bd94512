#pragma once

#include <cstdint>
#include <string>

#include "softtmvn/linalg.hpp"

namespace softtmvn {

enum class InitMode {
  kDefault,   // sampler-specific start near the mode (see each sampler)
  kOrigin,    // θ₀ = 0
  kExplicit,  // θ₀ = ChainSpec::init_theta
};

/// Chain configuration. A run performs burn_in + thin·n_samples transitions
/// and keeps every thin-th state after burn-in.
struct ChainSpec {
  std::uint64_t burn_in = 1000;
  std::uint64_t thin = 100;
  std::uint64_t n_samples = 1000;
  std::uint64_t seed = 0;
  InitMode init = InitMode::kDefault;
  Vector init_theta;

  /// Throws std::invalid_argument for thin < 1, n_samples < 1, or an explicit
  /// start of the wrong length.
  void validate(Eigen::Index d) const;
};

/// Thinned draws (one row per retained state) plus run metadata.
struct SampleBatch {
  RowMatrix draws;
  std::uint64_t iterations = 0;
  std::string sampler;
  ChainSpec spec;
  /// Per-coordinate ESS; NaN where undefined (constant column or < 10 draws).
  Vector ess;
};

}  // namespace softtmvn
