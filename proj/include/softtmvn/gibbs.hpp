#pragma once

#include <cstdint>
#include <vector>

#include "softtmvn/chain.hpp"
#include "softtmvn/constraints.hpp"
#include "softtmvn/random.hpp"
#include "softtmvn/structured_gauss.hpp"

namespace softtmvn {

/// Each soft constraint read as a logistic observation: row Wᵢ = η aᵢ, label
/// tᵢ = 1(sᵢ = 1), κᵢ = tᵢ − ½.
struct PseudoLogistic {
  RowMatrix w;
  std::vector<int> t;
  Vector kappa;

  static PseudoLogistic from(const SoftTmvnParams& p);
};

struct ChainState {
  Vector theta;
  Vector omega;
  std::uint64_t iteration = 0;
};

/// Unnormalized log γ_η(θ) = −½(θ−μ)ᵀΣ⁻¹(θ−μ) + Σᵢ log σ_η(sᵢ aᵢᵀθ).
double log_density_unnorm(const SoftTmvnParams& p, const Vector& theta);

/// ∇(−log γ_η)(θ) = Σ⁻¹(θ−μ) − Σᵢ η sᵢ σ(−η sᵢ aᵢᵀθ) aᵢ.
Vector grad_neg_log_density(const SoftTmvnParams& p, const Vector& theta);

/// Σ⁻¹ + Σᵢ η² σ(ηaᵢᵀθ)(1 − σ(ηaᵢᵀθ)) aᵢaᵢᵀ.
Matrix hessian_neg_log_density(const SoftTmvnParams& p, const Vector& theta);

/// Starting point for `spec.init`. The default start is μ with the sign of
/// μ_k flipped on every axis-aligned constraint it violates.
Vector initial_theta(const SoftTmvnParams& p, const ChainSpec& spec);

/// One blocked transition: ωᵢ ~ PG(1, Wᵢθ) for all i, then
/// θ ~ N(μ_ω, Σ_ω) drawn as μ̄ + θ̄ with Φ = Ω^{1/2}W and α = Ω^{−1/2}κ.
/// Builds and factorizes the r×r system from scratch every call; run_chain
/// uses SoftTmvnGibbs, which caches the Φ-independent products.
ChainState gibbs_step(const SoftTmvnParams& p, const PseudoLogistic& pl, const ChainState& state, Rng& rng);

/// Blocked Gibbs sampler with AΣ and AΣAᵀ cached, so one transition costs a
/// prior draw plus O(rd + r³). Consumes random numbers in the same order as
/// gibbs_step.
class SoftTmvnGibbs {
 public:
  explicit SoftTmvnGibbs(SoftTmvnParams p);

  const SoftTmvnParams& params() const noexcept { return p_; }

  void step(ChainState& state, Rng& rng) const;

 private:
  SoftTmvnParams p_;
  PseudoLogistic pl_;
  ScaledRowSampler sampler_;
};

/// burn_in + thin·n_samples blocked Gibbs transitions from initial_theta.
SampleBatch run_chain(const SoftTmvnParams& p, const ChainSpec& spec);

/// Unadjusted Langevin update θ − h∇(−log γ_η)(θ) + √(2h) ξ, ξ ~ N(0, I).
/// Biased at any finite h.
Vector lmc_step(const SoftTmvnParams& p, const Vector& theta, double h, Rng& rng);

/// Same update with the noise ξ supplied.
Vector lmc_step_with_noise(const SoftTmvnParams& p, const Vector& theta, double h, const Vector& xi);

SampleBatch run_lmc_chain(const SoftTmvnParams& p, double h, const ChainSpec& spec);

}  // namespace softtmvn
