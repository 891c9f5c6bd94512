#pragma once

// Monotone single-index regression
//
//   y = B̃_M(x̃ᵀα) + ε,   B̃_M(t) = Σⱼ θⱼ B̃_{M,j}(t),   θ = Aψ,
//
// with ψ₁..ψ_M ≥ 0 (softly or exactly), α = β/‖β‖, β ~ N(0, I), and an
// inverse-gamma prior on σ².

#include <cstdint>
#include <vector>

#include "softtmvn/constraints.hpp"
#include "softtmvn/linalg.hpp"
#include "softtmvn/random.hpp"

namespace softtmvn {

/// Bernstein basis B_{M,j}(u) = C(M,j) uʲ (1−u)^{M−j}, j = 0..M, u ∈ [0, 1].
Vector bernstein_basis(int m, double u);

/// B̃_{M,j}(t) = ½ B_{M,j}((t+1)/2) on t ∈ [−1, 1]; entries sum to ½.
Vector transformed_basis(int m, double t);

/// (M+1)×(M+1) lower-triangular matrix of ones: (Aψ)ₖ = ψ₀ + … + ψₖ.
Matrix cumsum_matrix(int m);

struct MsimData {
  RowMatrix x;        // n×p covariates
  Vector y;
  double c = 1.0;     // scaling, max ‖xᵢ‖ of the training covariates
  RowMatrix x_tilde;  // x / c

  /// Scales by max ‖xᵢ‖.
  static MsimData from(RowMatrix x, Vector y);
  /// Scales by a given c (held-out data reuses the training scaling).
  static MsimData with_scale(RowMatrix x, Vector y, double c);
};

struct MsimTruth {
  Vector theta;
  Vector beta;
  Vector alpha;
  double sigma = 0.1;
};

/// The coefficient pattern (−1 ×6, −0.5, 0 ×7, 0.5, 1 ×6) for M = 20; other
/// degrees sample it at j·20/M (rounded).
Vector msim_true_theta(int m);

struct MsimDataset {
  MsimData data;
  MsimTruth truth;
};

/// x ~ N(0, I_p), β₀ ~ N(0, I_p), σ₀ = 0.1, θ₀ = msim_true_theta(M).
MsimDataset gen_msim_data(Eigen::Index n, Eigen::Index p, int m, std::uint64_t seed);

struct MsimHoldout {
  MsimData data;
  Vector signal;  // noiseless B̃_M(x̃ᵀα₀)·θ₀
};

/// Fresh covariates and responses from `truth`, scaled by the training c.
/// Indices x̃ᵀα beyond [−1, 1] are clamped when evaluating the basis.
MsimHoldout gen_msim_holdout(const MsimTruth& truth, Eigen::Index n, double c, std::uint64_t seed);

/// Rows B̃_M(x̃ᵢᵀα)ᵀ, an n×(M+1) matrix.
Matrix basis_matrix(const MsimData& data, const Vector& alpha, int m);

/// ψ | σ², α: N(μ_ψ, Σ_ψ) restricted (softly or exactly) to
/// R × [0, ∞)^M, where Σ_ψ = (DᵀD/σ² + I/v)⁻¹ and μ_ψ = Σ_ψDᵀY/σ², D = B_αA.
struct PsiConditional {
  Vector mu;
  Matrix sigma;
  Matrix precision;
  ConstraintSet constraints;

  SoftTmvnParams soft(double eta) const;
};

PsiConditional psi_conditional(const MsimData& data, const Vector& alpha, double sigma2, int m,
                               double prior_variance = 25.0);

/// Constraint set ψ₁..ψ_M ≥ 0 over R^{M+1}.
ConstraintSet monotone_constraints(int m);

enum class MsimPrior { kSoft, kHard };

struct MsimConfig {
  int m = 20;
  MsimPrior prior = MsimPrior::kSoft;
  double eta = 500.0;
  double prior_variance = 25.0;
  /// Blocked soft-tMVN Gibbs steps per outer sweep (soft prior).
  int inner_steps = 5;
  /// Coordinatewise truncated-normal sweeps per outer sweep (hard prior).
  int hard_sweeps = 5;
  double sigma2_shape = 2.1;
  double sigma2_rate = 1.1;
  double proposal_sd = 0.01;
  std::uint64_t burn_in = 1000;
  std::uint64_t thin = 100;
  std::uint64_t n_samples = 1000;
  std::uint64_t seed = 0;

  void validate() const;
};

struct MsimState {
  Vector psi;
  Vector beta;
  Vector alpha;
  double sigma2 = 1.0;
  std::uint64_t proposals = 0;
  std::uint64_t accepted = 0;
};

/// Starting point: α from the least-squares direction of y on x̃, ψ from the
/// unconstrained conditional mean with negative increments set to 0, σ²
/// from the resulting residuals.
MsimState msim_initial_state(const MsimData& data, const MsimConfig& config);

/// One Metropolis-within-Gibbs sweep: ψ | σ², α; σ² | ψ, α; then a
/// random-walk Metropolis move on β.
void msim_gibbs_sweep(MsimState& state, const MsimData& data, const MsimConfig& config, Rng& rng);

struct MsimFit {
  RowMatrix psi;    // retained ψ draws
  RowMatrix alpha;  // retained α draws
  Vector sigma2;
  double acceptance_rate = 0.0;
  /// Mean per-coordinate ESS; coordinates with undefined ESS are skipped.
  double ess_alpha = 0.0;
  double ess_psi = 0.0;
};

MsimFit fit_msim(const MsimData& data, const MsimConfig& config);

/// Posterior-mean predictions: average over draws s of B̃_M(x̃ᵀα_s)·Aψ_s.
Vector msim_predict(const MsimFit& fit, const MsimData& data);

double mean_squared_error(const Vector& a, const Vector& b);

/// Fraction of ψ draws whose B̃_M decreases somewhere on `grid_points` evenly
/// spaced points of [−1, 1].
double monotonicity_violation_fraction(const RowMatrix& psi_draws, int grid_points = 101);

}  // namespace softtmvn
