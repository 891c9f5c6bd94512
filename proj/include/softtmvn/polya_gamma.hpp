#pragma once

#include "softtmvn/random.hpp"

namespace softtmvn {

/// One PG(1, c) variate together with the tilt that produced it.
struct PgDraw {
  double omega;
  double tilt;
};

/// Exact draw from PG(1, c).
///
/// Devroye-style alternating-series accept/reject on the tilted Jacobi
/// density J*(1, |c|/2), with truncation point 0.64: exponential proposal to
/// the right of the truncation point, truncated inverse Gaussian to the left.
/// The acceptance probability of each proposal is bounded below (above 0.99
/// for every tilt), so the loop terminates in expectation; a cap of 10⁶
/// proposals raises SamplerFailure.
double sample_pg1(double c, Rng& rng);

inline PgDraw draw_pg1(double c, Rng& rng) { return {sample_pg1(c, rng), c}; }

/// E[PG(1, c)] = tanh(c/2) / (2c), with the c → 0 limit 1/4.
double pg1_mean(double c) noexcept;

/// Var[PG(1, c)] = (sinh c − c) / (4 c³ cosh²(c/2)), with the c → 0 limit 1/24.
double pg1_variance(double c) noexcept;

}  // namespace softtmvn
