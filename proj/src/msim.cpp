#include "softtmvn/msim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/QR>

#include "softtmvn/diagnostics.hpp"
#include "softtmvn/errors.hpp"
#include "softtmvn/gibbs.hpp"
#include "softtmvn/reference.hpp"

namespace softtmvn {
namespace {

void check_degree(int m) {
  if (m < 1) throw std::invalid_argument("Bernstein degree M must be at least 1, got " + std::to_string(m));
}

// D = B·A: column k of D is the suffix sum Σ_{j≥k} B_{·j}.
Matrix times_cumsum(const Matrix& basis) {
  Matrix d = basis;
  for (Eigen::Index k = d.cols() - 2; k >= 0; --k) d.col(k) += d.col(k + 1);
  return d;
}

Vector cumsum(const Vector& psi) {
  Vector theta(psi.size());
  double acc = 0.0;
  for (Eigen::Index k = 0; k < psi.size(); ++k) theta(k) = acc += psi(k);
  return theta;
}

double residual_ss(const Matrix& basis, const Vector& theta, const Vector& y) { return (y - basis * theta).squaredNorm(); }

PsiConditional conditional_from_basis(const Matrix& basis, const Vector& y, double sigma2, int m, double prior_variance) {
  if (!(sigma2 > 0.0)) throw std::invalid_argument("psi conditional: sigma2 must be positive");
  if (!(prior_variance > 0.0)) throw std::invalid_argument("psi conditional: prior variance must be positive");
  const Matrix d = times_cumsum(basis);
  Matrix precision = d.transpose() * d / sigma2;
  precision.diagonal().array() += 1.0 / prior_variance;
  const auto llt = factorize_spd(precision, "psi conditional precision");
  Matrix sigma = llt.solve(Matrix::Identity(m + 1, m + 1));
  sigma = 0.5 * (sigma + sigma.transpose());
  Vector mu = llt.solve(d.transpose() * y / sigma2);
  return {std::move(mu), std::move(sigma), std::move(precision), monotone_constraints(m)};
}

double mean_finite(const Vector& v) {
  double sum = 0.0;
  int count = 0;
  for (double x : v) {
    if (std::isfinite(x)) {
      sum += x;
      ++count;
    }
  }
  return count == 0 ? std::nan("") : sum / count;
}

}  // namespace

Vector bernstein_basis(int m, double u) {
  check_degree(m);
  if (!(u >= 0.0 && u <= 1.0)) throw std::invalid_argument("bernstein_basis: u must lie in [0, 1]");
  Vector b(m + 1);
  // b_j = C(M, j) uʲ (1−u)^{M−j}, built from the power tables.
  std::vector<double> up(static_cast<std::size_t>(m + 1), 1.0);
  std::vector<double> vp(static_cast<std::size_t>(m + 1), 1.0);
  for (int j = 1; j <= m; ++j) {
    up[static_cast<std::size_t>(j)] = up[static_cast<std::size_t>(j - 1)] * u;
    vp[static_cast<std::size_t>(j)] = vp[static_cast<std::size_t>(j - 1)] * (1.0 - u);
  }
  double binom = 1.0;
  for (int j = 0; j <= m; ++j) {
    b(j) = binom * up[static_cast<std::size_t>(j)] * vp[static_cast<std::size_t>(m - j)];
    binom = binom * (m - j) / (j + 1);
  }
  return b;
}

Vector transformed_basis(int m, double t) {
  if (!(t >= -1.0 && t <= 1.0)) throw std::invalid_argument("transformed_basis: t must lie in [-1, 1]");
  return 0.5 * bernstein_basis(m, std::clamp(0.5 * (t + 1.0), 0.0, 1.0));
}

Matrix cumsum_matrix(int m) {
  check_degree(m);
  return Matrix::Ones(m + 1, m + 1).triangularView<Eigen::Lower>();
}

MsimData MsimData::from(RowMatrix x, Vector y) {
  double c = 0.0;
  for (Eigen::Index i = 0; i < x.rows(); ++i) c = std::max(c, x.row(i).norm());
  if (!(c > 0.0)) throw std::invalid_argument("msim data: all covariate rows are zero");
  return with_scale(std::move(x), std::move(y), c);
}

MsimData MsimData::with_scale(RowMatrix x, Vector y, double c) {
  if (x.rows() != y.size()) throw DimensionError("msim data: X has " + std::to_string(x.rows()) + " rows, y has " +
                                                 std::to_string(y.size()) + " entries");
  if (x.rows() < 1 || x.cols() < 1) throw DimensionError("msim data: empty design");
  if (!(c > 0.0)) throw std::invalid_argument("msim data: scaling c must be positive");
  MsimData d;
  d.x_tilde = x / c;
  d.x = std::move(x);
  d.y = std::move(y);
  d.c = c;
  return d;
}

Vector msim_true_theta(int m) {
  check_degree(m);
  Vector pattern(21);
  pattern << -1, -1, -1, -1, -1, -1, -0.5, 0, 0, 0, 0, 0, 0, 0, 0.5, 1, 1, 1, 1, 1, 1;
  if (m == 20) return pattern;
  Vector theta(m + 1);
  for (int j = 0; j <= m; ++j) theta(j) = pattern(std::lround(20.0 * j / m));
  return theta;
}

namespace {

RowMatrix gaussian_design(Eigen::Index n, Eigen::Index p, Rng& rng) {
  RowMatrix x(n, p);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < p; ++j) x(i, j) = rng.normal();
  }
  return x;
}

Vector signal(const MsimData& data, const MsimTruth& truth) {
  return basis_matrix(data, truth.alpha, static_cast<int>(truth.theta.size()) - 1) * truth.theta;
}

}  // namespace

MsimDataset gen_msim_data(Eigen::Index n, Eigen::Index p, int m, std::uint64_t seed) {
  check_degree(m);
  if (n < 1 || p < 1) throw std::invalid_argument("gen_msim_data: n and p must be positive");
  Rng rng(seed);
  RowMatrix x = gaussian_design(n, p, rng);
  MsimTruth truth;
  truth.beta.resize(p);
  for (Eigen::Index j = 0; j < p; ++j) truth.beta(j) = rng.normal();
  truth.alpha = truth.beta / truth.beta.norm();
  truth.theta = msim_true_theta(m);
  truth.sigma = 0.1;

  MsimData data = MsimData::from(std::move(x), Vector::Zero(n));
  const Vector f = signal(data, truth);
  for (Eigen::Index i = 0; i < n; ++i) data.y(i) = f(i) + truth.sigma * rng.normal();
  return {std::move(data), std::move(truth)};
}

MsimHoldout gen_msim_holdout(const MsimTruth& truth, Eigen::Index n, double c, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("gen_msim_holdout: n must be positive");
  Rng rng(seed);
  RowMatrix x = gaussian_design(n, truth.alpha.size(), rng);
  MsimData data = MsimData::with_scale(std::move(x), Vector::Zero(n), c);
  Vector f = signal(data, truth);
  for (Eigen::Index i = 0; i < n; ++i) data.y(i) = f(i) + truth.sigma * rng.normal();
  return {std::move(data), std::move(f)};
}

Matrix basis_matrix(const MsimData& data, const Vector& alpha, int m) {
  check_degree(m);
  if (alpha.size() != data.x_tilde.cols()) throw DimensionError("basis_matrix: alpha length != number of covariates");
  const Vector t = data.x_tilde * alpha;
  Matrix b(t.size(), m + 1);
  for (Eigen::Index i = 0; i < t.size(); ++i) b.row(i) = transformed_basis(m, std::clamp(t(i), -1.0, 1.0)).transpose();
  return b;
}

SoftTmvnParams PsiConditional::soft(double eta) const {
  return SoftTmvnParams(mu, CovStructure::dense(sigma), constraints, eta);
}

PsiConditional psi_conditional(const MsimData& data, const Vector& alpha, double sigma2, int m,
                               double prior_variance) {
  return conditional_from_basis(basis_matrix(data, alpha, m), data.y, sigma2, m, prior_variance);
}

ConstraintSet monotone_constraints(int m) {
  check_degree(m);
  std::vector<Eigen::Index> coords;
  for (int k = 1; k <= m; ++k) coords.push_back(k);
  return ConstraintSet::axis_aligned(m + 1, coords, std::vector<int>(static_cast<std::size_t>(m), 1));
}

void MsimConfig::validate() const {
  check_degree(m);
  if (!(eta > 0.0)) throw std::invalid_argument("msim config: eta must be positive");
  if (!(prior_variance > 0.0)) throw std::invalid_argument("msim config: prior_variance must be positive");
  if (inner_steps < 1) throw std::invalid_argument("msim config: inner_steps must be at least 1");
  if (hard_sweeps < 1) throw std::invalid_argument("msim config: hard_sweeps must be at least 1");
  if (!(sigma2_shape > 0.0) || !(sigma2_rate > 0.0)) throw std::invalid_argument("msim config: sigma2 prior must be positive");
  if (!(proposal_sd > 0.0)) throw std::invalid_argument("msim config: proposal_sd must be positive");
  if (thin < 1) throw std::invalid_argument("msim config: thin must be at least 1");
  if (n_samples < 1) throw std::invalid_argument("msim config: n_samples must be at least 1");
}

MsimState msim_initial_state(const MsimData& data, const MsimConfig& config) {
  config.validate();
  const Eigen::Index n = data.x_tilde.rows();
  const Eigen::Index p = data.x_tilde.cols();
  Matrix design(n, p + 1);
  design.col(0).setOnes();
  design.rightCols(p) = data.x_tilde;
  const Vector coef = design.colPivHouseholderQr().solve(data.y);
  MsimState s;
  s.beta = coef.tail(p);
  if (!(s.beta.norm() > 0.0) || !s.beta.allFinite()) s.beta = Vector::Unit(p, 0);
  s.beta /= s.beta.norm();
  s.alpha = s.beta;

  const double var_y = (data.y.array() - data.y.mean()).square().mean();
  const Matrix basis = basis_matrix(data, s.alpha, config.m);
  const PsiConditional cond =
      conditional_from_basis(basis, data.y, std::max(var_y, 1e-6), config.m, config.prior_variance);
  s.psi = cond.mu;
  for (Eigen::Index k = 1; k < s.psi.size(); ++k) s.psi(k) = std::max(s.psi(k), 0.0);
  s.sigma2 = std::max(residual_ss(basis, cumsum(s.psi), data.y) / static_cast<double>(n), 1e-6);
  return s;
}

void msim_gibbs_sweep(MsimState& state, const MsimData& data, const MsimConfig& config, Rng& rng) {
  const int m = config.m;
  const Eigen::Index n = data.y.size();
  Matrix basis = basis_matrix(data, state.alpha, m);

  // ψ | σ², α
  const PsiConditional cond = conditional_from_basis(basis, data.y, state.sigma2, m, config.prior_variance);
  if (config.prior == MsimPrior::kSoft) {
    const SoftTmvnGibbs inner(cond.soft(config.eta));
    ChainState chain{state.psi, Vector::Zero(m), 0};
    for (int k = 0; k < config.inner_steps; ++k) inner.step(chain, rng);
    state.psi = std::move(chain.theta);
  } else {
    const TmvnGibbs inner = TmvnGibbs::from_precision(cond.mu, cond.precision, cond.constraints);
    for (int k = 0; k < config.hard_sweeps; ++k) inner.sweep(state.psi, rng);
  }
  const Vector theta = cumsum(state.psi);

  // σ² | ψ, α ~ IG(a + n/2, b + RSS/2)
  double rss = residual_ss(basis, theta, data.y);
  const double shape = config.sigma2_shape + 0.5 * static_cast<double>(n);
  const double rate = config.sigma2_rate + 0.5 * rss;
  state.sigma2 = 1.0 / rng.gamma(shape, 1.0 / rate);

  // β random-walk Metropolis; the likelihood sees only α = β/‖β‖.
  Vector proposal(state.beta.size());
  for (Eigen::Index j = 0; j < proposal.size(); ++j) proposal(j) = state.beta(j) + config.proposal_sd * rng.normal();
  const double norm = proposal.norm();
  ++state.proposals;
  if (norm > 0.0) {
    const Vector alpha_new = proposal / norm;
    const double rss_new = residual_ss(basis_matrix(data, alpha_new, m), theta, data.y);
    const double log_ratio = -(rss_new - rss) / (2.0 * state.sigma2) - 0.5 * (proposal.squaredNorm() - state.beta.squaredNorm());
    if (std::log(rng.uniform_open()) < log_ratio) {
      state.beta = proposal;
      state.alpha = alpha_new;
      ++state.accepted;
    }
  }
}

MsimFit fit_msim(const MsimData& data, const MsimConfig& config) {
  config.validate();
  Rng rng(config.seed);
  MsimState state = msim_initial_state(data, config);
  for (std::uint64_t it = 0; it < config.burn_in; ++it) msim_gibbs_sweep(state, data, config, rng);
  state.proposals = 0;
  state.accepted = 0;

  const auto n = static_cast<Eigen::Index>(config.n_samples);
  MsimFit fit;
  fit.psi.resize(n, config.m + 1);
  fit.alpha.resize(n, data.x_tilde.cols());
  fit.sigma2.resize(n);
  for (Eigen::Index s = 0; s < n; ++s) {
    for (std::uint64_t it = 0; it < config.thin; ++it) msim_gibbs_sweep(state, data, config, rng);
    fit.psi.row(s) = state.psi.transpose();
    fit.alpha.row(s) = state.alpha.transpose();
    fit.sigma2(s) = state.sigma2;
  }
  fit.acceptance_rate = static_cast<double>(state.accepted) / static_cast<double>(state.proposals);
  fit.ess_alpha = mean_finite(ess_per_coordinate(fit.alpha));
  fit.ess_psi = mean_finite(ess_per_coordinate(fit.psi));
  return fit;
}

Vector msim_predict(const MsimFit& fit, const MsimData& data) {
  const int m = static_cast<int>(fit.psi.cols()) - 1;
  if (fit.alpha.cols() != data.x_tilde.cols()) throw DimensionError("msim_predict: covariate count differs from the fit");
  if (fit.psi.rows() == 0) throw std::invalid_argument("msim_predict: fit has no draws");
  Vector pred = Vector::Zero(data.x_tilde.rows());
  for (Eigen::Index s = 0; s < fit.psi.rows(); ++s) {
    const Vector alpha = fit.alpha.row(s).transpose();
    const Vector theta = cumsum(fit.psi.row(s).transpose());
    pred += basis_matrix(data, alpha, m) * theta;
  }
  return pred / static_cast<double>(fit.psi.rows());
}

double mean_squared_error(const Vector& a, const Vector& b) {
  if (a.size() != b.size() || a.size() == 0) throw DimensionError("mean_squared_error: lengths differ or are zero");
  return (a - b).squaredNorm() / static_cast<double>(a.size());
}

double monotonicity_violation_fraction(const RowMatrix& psi_draws, int grid_points) {
  if (grid_points < 2) throw std::invalid_argument("monotonicity check needs at least 2 grid points");
  if (psi_draws.rows() == 0) return 0.0;
  const int m = static_cast<int>(psi_draws.cols()) - 1;
  Matrix basis(grid_points, m + 1);
  for (int g = 0; g < grid_points; ++g) {
    const double t = std::clamp(-1.0 + 2.0 * g / (grid_points - 1), -1.0, 1.0);
    basis.row(g) = transformed_basis(m, t).transpose();
  }
  Eigen::Index violations = 0;
  for (Eigen::Index s = 0; s < psi_draws.rows(); ++s) {
    const Vector f = basis * cumsum(psi_draws.row(s).transpose());
    for (int g = 1; g < grid_points; ++g) {
      // Slack covers rounding in the basis evaluation only.
      if (f(g) < f(g - 1) - 1e-12 * std::max(1.0, std::abs(f(g - 1)))) {
        ++violations;
        break;
      }
    }
  }
  return static_cast<double>(violations) / static_cast<double>(psi_draws.rows());
}

}  // namespace softtmvn
