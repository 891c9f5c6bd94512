#include "softtmvn/reference.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include <boost/math/special_functions/erf.hpp>

#include "softtmvn/diagnostics.hpp"
#include "softtmvn/errors.hpp"

namespace softtmvn {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTailCutoff = 6.0;

// Standard normal on [a, b] with a > kTailCutoff.
double tail_draw(double a, double b, Rng& rng) {
  if (b - a < 1.0 / a) {
    // Narrow interval: uniform proposal, acceptance at least e^{-1}.
    for (;;) {
      const double z = a + (b - a) * rng.uniform();
      if (std::log(rng.uniform_open()) <= 0.5 * (a * a - z * z)) return z;
    }
  }
  const double lambda = 0.5 * (a + std::sqrt(a * a + 4.0));
  for (;;) {
    const double z = a + rng.exponential() / lambda;
    if (z > b) continue;
    const double g = z - lambda;
    if (std::log(rng.uniform_open()) <= -0.5 * g * g) return z;
  }
}

// Standard normal on [a, b] with a ≥ 0, by inverting the upper tail Q.
double upper_draw(double a, double b, Rng& rng) {
  if (a > kTailCutoff) return tail_draw(a, b, rng);
  const double qa = 0.5 * std::erfc(a / M_SQRT2);
  const double qb = std::isinf(b) ? 0.0 : 0.5 * std::erfc(b / M_SQRT2);
  const double q = qb + rng.uniform_open() * (qa - qb);
  const double two_q = std::clamp(2.0 * q, DBL_MIN, 2.0 - DBL_EPSILON);
  return std::clamp(M_SQRT2 * boost::math::erfc_inv(two_q), a, b);
}

// Standard normal on [a, b] with a < 0 < b.
double body_draw(double a, double b, Rng& rng) {
  const double pa = std::isinf(a) ? 0.0 : 0.5 * std::erfc(-a / M_SQRT2);
  const double pb = std::isinf(b) ? 1.0 : 0.5 * std::erfc(-b / M_SQRT2);
  const double p = pa + rng.uniform_open() * (pb - pa);
  const double two_p = std::clamp(2.0 * p, DBL_MIN, 2.0 - DBL_EPSILON);
  return std::clamp(-M_SQRT2 * boost::math::erfc_inv(two_p), a, b);
}

Matrix inverse_spd(const Matrix& a, const char* what) {
  const auto llt = factorize_spd(a, what);
  Matrix inv = llt.solve(Matrix::Identity(a.rows(), a.cols()));
  return 0.5 * (inv + inv.transpose());
}

}  // namespace

double sample_trunc_norm_1d(double mean, double sd, double lo, double hi, Rng& rng) {
  if (!(sd > 0.0) || !std::isfinite(sd)) throw std::invalid_argument("truncated normal: sd must be positive and finite");
  if (!(lo < hi)) throw std::invalid_argument("truncated normal: need lo < hi");
  if (!std::isfinite(mean)) throw std::invalid_argument("truncated normal: mean must be finite");
  const double a = (lo - mean) / sd;
  const double b = (hi - mean) / sd;
  double z = 0.0;
  if (a >= 0.0) {
    z = upper_draw(a, b, rng);
  } else if (b <= 0.0) {
    z = -upper_draw(-b, -a, rng);
  } else {
    z = body_draw(a, b, rng);
  }
  return std::clamp(mean + sd * z, lo, hi);
}

TmvnGibbs::TmvnGibbs(Vector mu, const Matrix& sigma, const ConstraintSet& c)
    : TmvnGibbs(FromPrecision{}, std::move(mu), inverse_spd(sigma, "tMVN covariance"), c) {
  if (sigma.rows() != mu_.size() || sigma.cols() != mu_.size()) throw DimensionError("tMVN Gibbs: sigma is not d×d");
}

TmvnGibbs TmvnGibbs::from_precision(Vector mu, Matrix precision, const ConstraintSet& c) {
  return TmvnGibbs(FromPrecision{}, std::move(mu), std::move(precision), c);
}

TmvnGibbs::TmvnGibbs(FromPrecision, Vector mu, Matrix precision, const ConstraintSet& c)
    : mu_(std::move(mu)),
      precision_(std::move(precision)),
      lo_(static_cast<std::size_t>(mu_.size()), -kInf),
      hi_(static_cast<std::size_t>(mu_.size()), kInf) {
  const Eigen::Index d = mu_.size();
  if (precision_.rows() != d || precision_.cols() != d || c.dim() != d) {
    throw DimensionError("tMVN Gibbs: mu, covariance and constraints disagree on dimension");
  }
  for (Eigen::Index k = 0; k < d; ++k) {
    if (!(precision_(k, k) > 0.0)) throw FactorizationError("tMVN Gibbs precision", static_cast<long>(k + 1));
  }
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    const auto k = c.axis(i);
    if (!k) {
      throw std::invalid_argument("tMVN Gibbs: constraint " + std::to_string(i) +
                                  " is not axis-aligned; use rejection_tmvn for general constraints");
    }
    const auto kk = static_cast<std::size_t>(*k);
    if (c.sign(i) == 1) {
      lo_[kk] = std::max(lo_[kk], 0.0);
    } else {
      hi_[kk] = std::min(hi_[kk], 0.0);
    }
    if (!(lo_[kk] < hi_[kk])) {
      throw std::invalid_argument("tMVN Gibbs: coordinate " + std::to_string(*k) + " is pinned by opposite signs");
    }
  }
}

Vector TmvnGibbs::feasible_start() const {
  Vector theta = mu_;
  for (Eigen::Index k = 0; k < theta.size(); ++k) {
    const auto kk = static_cast<std::size_t>(k);
    if (theta(k) < lo_[kk] || theta(k) > hi_[kk]) theta(k) = -theta(k);
  }
  return theta;
}

void TmvnGibbs::sweep(Vector& theta, Rng& rng) const {
  const Eigen::Index d = dim();
  if (theta.size() != d) throw DimensionError("tMVN Gibbs sweep: theta has wrong length");
  Vector diff = theta - mu_;
  const auto n = static_cast<std::size_t>(d);
  for (Eigen::Index k = 0; k < d; ++k) {
    const double qkk = precision_(k, k);
    // E[θ_k | θ_{−k}] = μ_k − (Q_{k,−k}(θ−μ)_{−k}) / Q_kk
    const double off = kernels::dot({precision_.row(k).data(), n}, as_span(diff)) - qkk * diff(k);
    const double mean = mu_(k) - off / qkk;
    const auto kk = static_cast<std::size_t>(k);
    theta(k) = sample_trunc_norm_1d(mean, 1.0 / std::sqrt(qkk), lo_[kk], hi_[kk], rng);
    diff(k) = theta(k) - mu_(k);
  }
}

SampleBatch gibbs_tmvn(const Vector& mu, const Matrix& sigma, const ConstraintSet& c, const ChainSpec& spec) {
  spec.validate(mu.size());
  const TmvnGibbs sampler(mu, sigma, c);
  Vector theta;
  switch (spec.init) {
    case InitMode::kDefault:
      theta = sampler.feasible_start();
      break;
    case InitMode::kOrigin:
      theta = Vector::Zero(mu.size());
      break;
    case InitMode::kExplicit:
      theta = spec.init_theta;
      if (!hard_indicator(c, theta)) throw std::invalid_argument("tMVN Gibbs: explicit start violates the constraints");
      break;
  }
  Rng rng(spec.seed);
  for (std::uint64_t it = 0; it < spec.burn_in; ++it) sampler.sweep(theta, rng);
  RowMatrix draws(static_cast<Eigen::Index>(spec.n_samples), mu.size());
  for (std::uint64_t s = 0; s < spec.n_samples; ++s) {
    for (std::uint64_t it = 0; it < spec.thin; ++it) sampler.sweep(theta, rng);
    draws.row(static_cast<Eigen::Index>(s)) = theta.transpose();
  }
  SampleBatch batch;
  batch.ess = ess_per_coordinate(draws);
  batch.draws = std::move(draws);
  batch.iterations = spec.burn_in + spec.thin * spec.n_samples;
  batch.sampler = "hard-gibbs";
  batch.spec = spec;
  return batch;
}

RejectionDraw rejection_tmvn(const Vector& mu, const CovStructure& sigma, const ConstraintSet& c, Rng& rng,
                             std::uint64_t max_tries) {
  if (mu.size() != sigma.dim() || mu.size() != c.dim()) throw DimensionError("rejection tMVN: dimension mismatch");
  for (std::uint64_t tries = 1; tries <= max_tries; ++tries) {
    Vector theta = mu + sigma.sample(rng);
    if (hard_indicator(c, theta)) return {std::move(theta), tries};
  }
  throw LowAcceptanceError("rejection tMVN: max_tries exhausted (" + std::to_string(max_tries) +
                           " proposals without an accepted draw)");
}

SampleBatch rejection_tmvn_batch(const Vector& mu, const CovStructure& sigma, const ConstraintSet& c,
                                 const ChainSpec& spec, std::uint64_t max_tries) {
  spec.validate(mu.size());
  Rng rng(spec.seed);
  RowMatrix draws(static_cast<Eigen::Index>(spec.n_samples), mu.size());
  std::uint64_t proposals = 0;
  for (std::uint64_t s = 0; s < spec.n_samples; ++s) {
    auto draw = rejection_tmvn(mu, sigma, c, rng, max_tries);
    proposals += draw.tries;
    draws.row(static_cast<Eigen::Index>(s)) = draw.theta.transpose();
  }
  SampleBatch batch;
  batch.ess = ess_per_coordinate(draws);
  batch.draws = std::move(draws);
  batch.iterations = proposals;
  batch.sampler = "hard-rejection";
  batch.spec = spec;
  return batch;
}

// --- quadrature ------------------------------------------------------------

namespace {

struct Integrals {
  double z = 0.0;
  Vector m1;
  Matrix m2;
};

class LogDensity {
 public:
  explicit LogDensity(const QuadratureTarget& t)
      : t_(t), precision_(inverse_spd(t.sigma, "quadrature covariance")) {}

  double operator()(const double* x) const {
    const Eigen::Index d = t_.mu.size();
    double quad = 0.0;
    for (Eigen::Index i = 0; i < d; ++i) {
      for (Eigen::Index j = 0; j < d; ++j) quad += (x[i] - t_.mu(i)) * precision_(i, j) * (x[j] - t_.mu(j));
    }
    double log_ind = 0.0;
    const ConstraintSet& c = t_.constraints;
    for (Eigen::Index r = 0; r < c.size(); ++r) {
      double proj = 0.0;
      for (Eigen::Index j = 0; j < d; ++j) proj += c.rows()(r, j) * x[j];
      proj *= c.sign(r);
      if (t_.eta) {
        log_ind += log_sigmoid(*t_.eta * proj);
      } else if (proj < 0.0) {
        return -kInf;
      }
    }
    return -0.5 * quad + log_ind;
  }

 private:
  const QuadratureTarget& t_;
  Matrix precision_;
};

// Midpoint sums with `cells[k]` cells on axis k; densities are exp(f − shift).
Integrals integrate(const LogDensity& f, const QuadratureGrid& g, const std::vector<int>& cells, double shift) {
  const std::size_t d = cells.size();
  std::vector<double> h(d);
  double area = 1.0;
  for (std::size_t k = 0; k < d; ++k) {
    h[k] = (g.hi[k] - g.lo[k]) / cells[k];
    area *= h[k];
  }
  const auto dd = static_cast<Eigen::Index>(d);
  Integrals out{0.0, Vector::Zero(dd), Matrix::Zero(dd, dd)};
  double x[2] = {0.0, 0.0};
  const int ny = d == 2 ? cells[1] : 1;
  for (int i = 0; i < cells[0]; ++i) {
    x[0] = g.lo[0] + (i + 0.5) * h[0];
    double z = 0.0;
    double m1[2] = {0.0, 0.0};
    double m2[3] = {0.0, 0.0, 0.0};
    for (int j = 0; j < ny; ++j) {
      if (d == 2) x[1] = g.lo[1] + (j + 0.5) * h[1];
      const double w = std::exp(f(x) - shift);
      z += w;
      m1[0] += w * x[0];
      m2[0] += w * x[0] * x[0];
      if (d == 2) {
        m1[1] += w * x[1];
        m2[1] += w * x[0] * x[1];
        m2[2] += w * x[1] * x[1];
      }
    }
    out.z += z;
    out.m1(0) += m1[0];
    out.m2(0, 0) += m2[0];
    if (d == 2) {
      out.m1(1) += m1[1];
      out.m2(0, 1) += m2[1];
      out.m2(1, 1) += m2[2];
    }
  }
  if (d == 2) out.m2(1, 0) = out.m2(0, 1);
  out.z *= area;
  out.m1 *= area;
  out.m2 *= area;
  return out;
}

// Removes the h² term of the midpoint error.
Integrals richardson(const Integrals& coarse, const Integrals& fine) {
  return {(4.0 * fine.z - coarse.z) / 3.0, (4.0 * fine.m1 - coarse.m1) / 3.0, (4.0 * fine.m2 - coarse.m2) / 3.0};
}

QuadratureMoments normalize(const Integrals& in) {
  QuadratureMoments m;
  m.mean = in.m1 / in.z;
  m.cov = in.m2 / in.z - m.mean * m.mean.transpose();
  m.error_estimate = 0.0;
  return m;
}

double max_shift(const LogDensity& f, const QuadratureGrid& g, const std::vector<int>& cells) {
  const std::size_t d = cells.size();
  double best = -kInf;
  double x[2] = {0.0, 0.0};
  const int ny = d == 2 ? cells[1] : 1;
  for (int i = 0; i < cells[0]; ++i) {
    x[0] = g.lo[0] + (i + 0.5) * (g.hi[0] - g.lo[0]) / cells[0];
    for (int j = 0; j < ny; ++j) {
      if (d == 2) x[1] = g.lo[1] + (j + 0.5) * (g.hi[1] - g.lo[1]) / cells[1];
      best = std::max(best, f(x));
    }
  }
  return best;
}

void check_target(const QuadratureTarget& t) {
  const Eigen::Index d = t.mu.size();
  if (d < 1 || d > 2) throw std::invalid_argument("quadrature_moments: only d = 1 or 2 is supported, got d = " + std::to_string(d));
  if (t.sigma.rows() != d || t.sigma.cols() != d || t.constraints.dim() != d) {
    throw DimensionError("quadrature target: mu, sigma and constraints disagree on dimension");
  }
  if (t.eta && !(*t.eta > 0.0)) throw std::invalid_argument("quadrature target: eta must be positive");
}

}  // namespace

QuadratureGrid QuadratureGrid::covering(const QuadratureTarget& target, int nodes_per_axis) {
  check_target(target);
  const auto d = static_cast<std::size_t>(target.mu.size());
  QuadratureGrid g{std::vector<double>(d), std::vector<double>(d), std::vector<int>(d, nodes_per_axis)};
  for (std::size_t k = 0; k < d; ++k) {
    const auto kk = static_cast<Eigen::Index>(k);
    const double sd = std::sqrt(target.sigma(kk, kk));
    g.lo[k] = target.mu(kk) - 8.0 * sd;
    g.hi[k] = target.mu(kk) + 8.0 * sd;
  }
  if (!target.eta) {
    const ConstraintSet& c = target.constraints;
    for (Eigen::Index i = 0; i < c.size(); ++i) {
      const auto axis = c.axis(i);
      if (!axis) continue;
      const auto k = static_cast<std::size_t>(*axis);
      const double sd = std::sqrt(target.sigma(*axis, *axis));
      if (c.sign(i) == 1) {
        g.lo[k] = 0.0;
        g.hi[k] = std::max(g.hi[k], 8.0 * sd);
      } else {
        g.hi[k] = 0.0;
        g.lo[k] = std::min(g.lo[k], -8.0 * sd);
      }
    }
  }
  return g;
}

QuadratureMoments quadrature_moments(const QuadratureTarget& target, const QuadratureGrid& grid) {
  check_target(target);
  const auto d = static_cast<std::size_t>(target.mu.size());
  if (grid.lo.size() != d || grid.hi.size() != d || grid.nodes.size() != d) {
    throw DimensionError("quadrature grid does not match the target dimension");
  }
  for (std::size_t k = 0; k < d; ++k) {
    if (grid.nodes[k] < 64 || grid.nodes[k] % 2 != 0) {
      throw std::invalid_argument("quadrature grid: node counts must be even and at least 64");
    }
    if (!(grid.lo[k] < grid.hi[k])) throw std::invalid_argument("quadrature grid: empty axis");
  }
  const LogDensity f(target);
  std::vector<int> half(grid.nodes);
  std::vector<int> twice(grid.nodes);
  for (std::size_t k = 0; k < d; ++k) {
    half[k] /= 2;
    twice[k] *= 2;
  }
  const double shift = max_shift(f, grid, half);
  if (!std::isfinite(shift)) throw std::invalid_argument("quadrature: the target has no mass on the grid");

  const Integrals i_half = integrate(f, grid, half, shift);
  const Integrals i_base = integrate(f, grid, grid.nodes, shift);
  const Integrals i_twice = integrate(f, grid, twice, shift);
  QuadratureMoments fine = normalize(richardson(i_base, i_twice));
  const QuadratureMoments coarse = normalize(richardson(i_half, i_base));
  fine.error_estimate =
      std::max((fine.mean - coarse.mean).cwiseAbs().maxCoeff(), (fine.cov - coarse.cov).cwiseAbs().maxCoeff());
  return fine;
}

QuadratureMoments quadrature_moments(const QuadratureTarget& target) {
  return quadrature_moments(target, QuadratureGrid::covering(target));
}

}  // namespace softtmvn
