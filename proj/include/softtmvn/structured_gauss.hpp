#pragma once

// Exact draws from N((ΦᵀΦ + Σ⁻¹)⁻¹Φᵀα, (ΦᵀΦ + Σ⁻¹)⁻¹) without forming a d×d
// precision. With a prior draw u ~ N(0, Σ) and δ ~ N(0, I_r):
//
//   v = Φu + δ,   (ΦΣΦᵀ + I_r) w = α − v,   θ̄ = u + ΣΦᵀw.
//
// Beyond the prior draw the work is O(r²d) when Σ is cheap to apply, plus an
// O(r³) Cholesky of the r×r system.

#include "softtmvn/covariance.hpp"
#include "softtmvn/linalg.hpp"
#include "softtmvn/random.hpp"

namespace softtmvn {

/// u ~ N(0, Σ).
Vector sample_prior(const CovStructure& cov, Rng& rng);

/// θ̄ ~ N((ΦᵀΦ + Σ⁻¹)⁻¹Φᵀα, (ΦᵀΦ + Σ⁻¹)⁻¹).
Vector sample_posterior(const RowMatrix& phi, const Vector& alpha, const CovStructure& cov, Rng& rng);

/// Same as sample_posterior with the prior draw u supplied by the caller
/// (only δ is drawn from `rng`).
Vector sample_posterior_given_prior(const RowMatrix& phi, const Vector& alpha, const CovStructure& cov,
                                    const Vector& u, Rng& rng);

/// μ̄ = μ − ΣΦᵀ(ΦΣΦᵀ + I_r)⁻¹Φμ  ( = (ΦᵀΦ + Σ⁻¹)⁻¹Σ⁻¹μ ).
Vector mean_shift(const RowMatrix& phi, const CovStructure& cov, const Vector& mu);

/// Factorized r×r system for one fixed Φ; shared by the draw and the mean
/// shift so a Gibbs step factorizes once.
class PosteriorSystem {
 public:
  PosteriorSystem(const RowMatrix& phi, const CovStructure& cov);

  Eigen::Index rows() const noexcept { return phi_.rows(); }
  Eigen::Index dim() const noexcept { return phi_.cols(); }

  /// θ̄ from a given prior draw u and noise δ.
  Vector draw(const Vector& alpha, const Vector& u, const Vector& delta) const;
  Vector shift(const Vector& mu) const;

  /// (ΦΣΦᵀ + I_r), as assembled.
  const Matrix& system() const noexcept { return system_; }

 private:
  RowMatrix phi_;
  RowMatrix sigma_phi_;  // row i is (Σφᵢ)ᵀ
  Matrix system_;
  Eigen::LLT<Matrix> chol_;
};

/// Blocked update for likelihood matrices of the form Φ = diag(s)·B with a
/// fixed B (the pseudo-logistic rows of a soft tMVN). BΣ and BΣBᵀ are cached
/// at construction, so each draw costs one prior draw, O(rd) for the
/// matrix-vector products, and O(r³) for the r×r Cholesky.
class ScaledRowSampler {
 public:
  ScaledRowSampler(RowMatrix base, CovStructure cov);

  Eigen::Index rows() const noexcept { return base_.rows(); }
  Eigen::Index dim() const noexcept { return base_.cols(); }
  const CovStructure& cov() const noexcept { return cov_; }

  /// Returns μ̄ + θ̄ for Φ = diag(scale)·B: a draw from
  /// N((ΦᵀΦ + Σ⁻¹)⁻¹(Φᵀα + Σ⁻¹μ), (ΦᵀΦ + Σ⁻¹)⁻¹). Random draws are consumed
  /// in the same order as sample_posterior (u first, then δ).
  Vector draw(const Vector& scale, const Vector& alpha, const Vector& mu, Rng& rng) const;

 private:
  RowMatrix base_;
  CovStructure cov_;
  RowMatrix base_sigma_;  // row i is (Σbᵢ)ᵀ
  Matrix base_gram_;      // B Σ Bᵀ
};

}  // namespace softtmvn
