#include "softtmvn/gibbs.hpp"

#include <algorithm>
#include <cmath>

#include "softtmvn/diagnostics.hpp"
#include "softtmvn/errors.hpp"
#include "softtmvn/polya_gamma.hpp"

namespace softtmvn {
namespace {

constexpr double kOmegaFloor = 1e-300;

void check_theta(const SoftTmvnParams& p, const Vector& theta) {
  if (theta.size() != p.dim()) {
    throw DimensionError("theta has length " + std::to_string(theta.size()) + ", target dimension " +
                         std::to_string(p.dim()));
  }
}

// sᵢ aᵢᵀθ for every row.
Vector signed_projections(const ConstraintSet& c, const Vector& theta) {
  Vector proj(c.size());
  if (c.empty()) return proj;
  kernels::gemv(view(c.rows()), as_span(theta), as_span(proj));
  for (Eigen::Index i = 0; i < c.size(); ++i) proj(i) *= c.sign(i);
  return proj;
}

Vector draw_omega(const RowMatrix& w, const Vector& theta, Rng& rng) {
  Vector tilt(w.rows());
  Vector omega(w.rows());
  if (w.rows() == 0) return omega;
  kernels::gemv(view(w), as_span(theta), as_span(tilt));
  for (Eigen::Index i = 0; i < w.rows(); ++i) omega(i) = sample_pg1(tilt(i), rng);
  return omega;
}

Vector standard_normal(Eigen::Index n, Rng& rng) {
  Vector z(n);
  for (Eigen::Index i = 0; i < n; ++i) z(i) = rng.normal();
  return z;
}

SampleBatch finish_batch(RowMatrix draws, std::uint64_t iterations, const char* label, const ChainSpec& spec) {
  SampleBatch batch;
  batch.ess = ess_per_coordinate(draws);
  batch.draws = std::move(draws);
  batch.iterations = iterations;
  batch.sampler = label;
  batch.spec = spec;
  return batch;
}

}  // namespace

PseudoLogistic PseudoLogistic::from(const SoftTmvnParams& p) {
  const ConstraintSet& c = p.constraints();
  PseudoLogistic pl;
  pl.w = p.eta() * c.rows();
  pl.t.resize(static_cast<std::size_t>(c.size()));
  pl.kappa.resize(c.size());
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    const int t = c.sign(i) == 1 ? 1 : 0;
    pl.t[static_cast<std::size_t>(i)] = t;
    pl.kappa(i) = t - 0.5;
  }
  return pl;
}

double log_density_unnorm(const SoftTmvnParams& p, const Vector& theta) {
  check_theta(p, theta);
  const Vector diff = theta - p.mu();
  const double quad = diff.dot(p.sigma().solve(diff));
  return -0.5 * quad + log_soft_indicator(p.constraints(), theta, p.eta());
}

Vector grad_neg_log_density(const SoftTmvnParams& p, const Vector& theta) {
  check_theta(p, theta);
  Vector grad = p.sigma().solve(theta - p.mu());
  const ConstraintSet& c = p.constraints();
  if (c.empty()) return grad;
  // d/dθ log σ(η s aᵀθ) = η s σ(−η s aᵀθ) a
  Vector coef = signed_projections(c, theta);
  for (Eigen::Index i = 0; i < c.size(); ++i) coef(i) = -p.eta() * c.sign(i) * sigmoid_eta(-coef(i), p.eta());
  kernels::gemv_t(view(c.rows()), as_span(coef), as_span(grad));
  return grad;
}

Matrix hessian_neg_log_density(const SoftTmvnParams& p, const Vector& theta) {
  check_theta(p, theta);
  Matrix h = p.sigma().precision_dense();
  const ConstraintSet& c = p.constraints();
  const Vector proj = signed_projections(c, theta);
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    const double s = sigmoid_eta(proj(i), p.eta());
    const double weight = p.eta() * p.eta() * s * (1.0 - s);
    h.noalias() += weight * c.rows().row(i).transpose() * c.rows().row(i);
  }
  return h;
}

Vector initial_theta(const SoftTmvnParams& p, const ChainSpec& spec) {
  switch (spec.init) {
    case InitMode::kOrigin:
      return Vector::Zero(p.dim());
    case InitMode::kExplicit:
      return spec.init_theta;
    case InitMode::kDefault:
      break;
  }
  Vector theta = p.mu();
  const ConstraintSet& c = p.constraints();
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    if (const auto k = c.axis(i); k && c.sign(i) * theta(*k) < 0.0) theta(*k) = -theta(*k);
  }
  return theta;
}

ChainState gibbs_step(const SoftTmvnParams& p, const PseudoLogistic& pl, const ChainState& state, Rng& rng) {
  check_theta(p, state.theta);
  if (pl.w.rows() != p.constraints().size() || pl.w.cols() != p.dim()) {
    throw DimensionError("gibbs_step: pseudo-logistic rows do not match the constraint set");
  }
  ChainState next;
  next.iteration = state.iteration + 1;
  next.omega = draw_omega(pl.w, state.theta, rng);

  const Eigen::Index r = pl.w.rows();
  RowMatrix phi(r, p.dim());
  Vector alpha(r);
  for (Eigen::Index i = 0; i < r; ++i) {
    const double root = std::sqrt(std::max(next.omega(i), kOmegaFloor));
    phi.row(i) = root * pl.w.row(i);
    alpha(i) = pl.kappa(i) / root;
  }
  const PosteriorSystem system(phi, p.sigma());
  const Vector u = p.sigma().sample(rng);
  const Vector delta = standard_normal(r, rng);
  next.theta = system.shift(p.mu()) + system.draw(alpha, u, delta);
  return next;
}

SoftTmvnGibbs::SoftTmvnGibbs(SoftTmvnParams p)
    : p_(std::move(p)), pl_(PseudoLogistic::from(p_)), sampler_(p_.constraints().rows(), p_.sigma()) {}

void SoftTmvnGibbs::step(ChainState& state, Rng& rng) const {
  state.omega = draw_omega(pl_.w, state.theta, rng);
  const Eigen::Index r = pl_.w.rows();
  // Φ = Ω^{1/2}·ηA = diag(η√ω)·A
  Vector scale(r);
  Vector alpha(r);
  for (Eigen::Index i = 0; i < r; ++i) {
    const double root = std::sqrt(std::max(state.omega(i), kOmegaFloor));
    scale(i) = p_.eta() * root;
    alpha(i) = pl_.kappa(i) / root;
  }
  state.theta = sampler_.draw(scale, alpha, p_.mu(), rng);
  ++state.iteration;
}

SampleBatch run_chain(const SoftTmvnParams& p, const ChainSpec& spec) {
  spec.validate(p.dim());
  const SoftTmvnGibbs sampler(p);
  Rng rng(spec.seed);
  ChainState state{initial_theta(p, spec), Vector::Zero(p.constraints().size()), 0};
  for (std::uint64_t it = 0; it < spec.burn_in; ++it) sampler.step(state, rng);
  RowMatrix draws(static_cast<Eigen::Index>(spec.n_samples), p.dim());
  for (std::uint64_t k = 0; k < spec.n_samples; ++k) {
    for (std::uint64_t it = 0; it < spec.thin; ++it) sampler.step(state, rng);
    draws.row(static_cast<Eigen::Index>(k)) = state.theta.transpose();
  }
  return finish_batch(std::move(draws), state.iteration, "soft-gibbs", spec);
}

Vector lmc_step_with_noise(const SoftTmvnParams& p, const Vector& theta, double h, const Vector& xi) {
  if (!(h > 0.0)) throw std::invalid_argument("lmc step size h must be positive");
  if (xi.size() != p.dim()) throw DimensionError("lmc noise has wrong length");
  return theta - h * grad_neg_log_density(p, theta) + std::sqrt(2.0 * h) * xi;
}

Vector lmc_step(const SoftTmvnParams& p, const Vector& theta, double h, Rng& rng) {
  return lmc_step_with_noise(p, theta, h, standard_normal(p.dim(), rng));
}

SampleBatch run_lmc_chain(const SoftTmvnParams& p, double h, const ChainSpec& spec) {
  spec.validate(p.dim());
  if (!(h > 0.0)) throw std::invalid_argument("lmc step size h must be positive");
  Rng rng(spec.seed);
  Vector theta = initial_theta(p, spec);
  std::uint64_t iterations = 0;
  for (std::uint64_t it = 0; it < spec.burn_in; ++it, ++iterations) theta = lmc_step(p, theta, h, rng);
  RowMatrix draws(static_cast<Eigen::Index>(spec.n_samples), p.dim());
  for (std::uint64_t k = 0; k < spec.n_samples; ++k) {
    for (std::uint64_t it = 0; it < spec.thin; ++it, ++iterations) theta = lmc_step(p, theta, h, rng);
    draws.row(static_cast<Eigen::Index>(k)) = theta.transpose();
  }
  return finish_batch(std::move(draws), iterations, "lmc", spec);
}

}  // namespace softtmvn
