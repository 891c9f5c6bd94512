#include "softtmvn/structured_gauss.hpp"

#include <string>

#include "softtmvn/errors.hpp"

namespace softtmvn {
namespace {

Vector standard_normal(Eigen::Index n, Rng& rng) {
  Vector z(n);
  for (Eigen::Index i = 0; i < n; ++i) z(i) = rng.normal();
  return z;
}

// Symmetric A·Bᵀ + I from row-major A, B (each r×d).
Matrix gram_plus_identity(const RowMatrix& a, const RowMatrix& b) {
  const Eigen::Index r = a.rows();
  const auto d = static_cast<std::size_t>(a.cols());
  Matrix m(r, r);
  for (Eigen::Index i = 0; i < r; ++i) {
    for (Eigen::Index j = i; j < r; ++j) {
      const double v = kernels::dot({a.row(i).data(), d}, {b.row(j).data(), d});
      m(i, j) = v;
      m(j, i) = v;
    }
    m(i, i) += 1.0;
  }
  return m;
}

Eigen::LLT<Matrix> factorize_system(const Matrix& m) {
  Eigen::LLT<Matrix> llt(m);
  if (llt.info() != Eigen::Success) {
    // ΦΣΦᵀ + I is SPD in exact arithmetic; failure means corrupted inputs.
    return factorize_spd(m, "likelihood system (Phi Sigma Phi^T + I)");
  }
  return llt;
}

}  // namespace

Vector sample_prior(const CovStructure& cov, Rng& rng) { return cov.sample(rng); }

PosteriorSystem::PosteriorSystem(const RowMatrix& phi, const CovStructure& cov)
    : phi_(phi), sigma_phi_(cov.apply_rows(phi)), system_(gram_plus_identity(phi_, sigma_phi_)) {
  if (phi_.rows() > 0) chol_ = factorize_system(system_);
}

Vector PosteriorSystem::draw(const Vector& alpha, const Vector& u, const Vector& delta) const {
  if (alpha.size() != rows() || delta.size() != rows()) throw DimensionError("posterior draw: alpha/delta length != r");
  if (u.size() != dim()) throw DimensionError("posterior draw: prior draw length != d");
  Vector theta = u;
  if (rows() == 0) return theta;
  Vector v(rows());
  kernels::gemv(view(phi_), as_span(u), as_span(v));
  v += delta;
  const Vector w = chol_.solve(alpha - v);
  kernels::gemv_t(view(sigma_phi_), as_span(w), as_span(theta));
  return theta;
}

Vector PosteriorSystem::shift(const Vector& mu) const {
  if (mu.size() != dim()) throw DimensionError("mean shift: mu length != d");
  Vector out = mu;
  if (rows() == 0) return out;
  Vector phi_mu(rows());
  kernels::gemv(view(phi_), as_span(mu), as_span(phi_mu));
  const Vector w = -chol_.solve(phi_mu);
  kernels::gemv_t(view(sigma_phi_), as_span(w), as_span(out));
  return out;
}

Vector sample_posterior_given_prior(const RowMatrix& phi, const Vector& alpha, const CovStructure& cov,
                                    const Vector& u, Rng& rng) {
  if (phi.cols() != cov.dim()) {
    throw DimensionError("sample_posterior: Phi has " + std::to_string(phi.cols()) + " columns, covariance dimension " +
                         std::to_string(cov.dim()));
  }
  if (alpha.size() != phi.rows()) throw DimensionError("sample_posterior: alpha length != rows of Phi");
  const PosteriorSystem system(phi, cov);
  const Vector delta = standard_normal(phi.rows(), rng);
  return system.draw(alpha, u, delta);
}

Vector sample_posterior(const RowMatrix& phi, const Vector& alpha, const CovStructure& cov, Rng& rng) {
  if (phi.cols() != cov.dim()) {
    throw DimensionError("sample_posterior: Phi has " + std::to_string(phi.cols()) + " columns, covariance dimension " +
                         std::to_string(cov.dim()));
  }
  const Vector u = cov.sample(rng);
  return sample_posterior_given_prior(phi, alpha, cov, u, rng);
}

Vector mean_shift(const RowMatrix& phi, const CovStructure& cov, const Vector& mu) {
  if (phi.cols() != cov.dim() || mu.size() != cov.dim()) throw DimensionError("mean_shift: dimension mismatch");
  return PosteriorSystem(phi, cov).shift(mu);
}

ScaledRowSampler::ScaledRowSampler(RowMatrix base, CovStructure cov)
    : base_(std::move(base)), cov_(std::move(cov)), base_sigma_(cov_.apply_rows(base_)) {
  if (base_.cols() != cov_.dim()) throw DimensionError("scaled-row sampler: B columns != covariance dimension");
  base_gram_ = gram_plus_identity(base_, base_sigma_);
  base_gram_.diagonal().array() -= 1.0;
}

Vector ScaledRowSampler::draw(const Vector& scale, const Vector& alpha, const Vector& mu, Rng& rng) const {
  const Eigen::Index r = rows();
  if (scale.size() != r || alpha.size() != r) throw DimensionError("scaled-row draw: scale/alpha length != r");
  if (mu.size() != dim()) throw DimensionError("scaled-row draw: mu length != d");
  Vector theta = cov_.sample(rng);
  const Vector delta = standard_normal(r, rng);
  if (r == 0) return theta + mu;

  // rhs = α − diag(s)·B(u + μ) − δ
  const Vector shifted = theta + mu;
  Vector proj(r);
  kernels::gemv(view(base_), as_span(shifted), as_span(proj));
  const Vector rhs = alpha - scale.cwiseProduct(proj) - delta;

  Matrix system = scale.asDiagonal() * base_gram_ * scale.asDiagonal();
  system.diagonal().array() += 1.0;
  const Vector w = factorize_system(system).solve(rhs);

  // θ = μ + u + ΣΦᵀw
  const Vector sw = scale.cwiseProduct(w);
  theta = shifted;
  kernels::gemv_t(view(base_sigma_), as_span(sw), as_span(theta));
  return theta;
}

}  // namespace softtmvn
