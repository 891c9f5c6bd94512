#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "softtmvn/errors.hpp"
#include "softtmvn/reference.hpp"
#include "support.hpp"

using namespace softtmvn;
using testing_support::batch_means_se;
using testing_support::column;
using testing_support::ks_critical;
using testing_support::ks_one_sample;
using testing_support::ks_one_sample_critical;
using testing_support::ks_statistic;
using testing_support::mean_se;
using testing_support::normal_cdf;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = 3.14159265358979323846;

double upper_q(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }
double phi(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * kPi); }

Matrix corr2(double rho) {
  Matrix s(2, 2);
  s << 1.0, rho, rho, 1.0;
  return s;
}

std::vector<double> tn_draws(double m, double s, double lo, double hi, std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> out(n);
  for (auto& x : out) x = sample_trunc_norm_1d(m, s, lo, hi, rng);
  return out;
}

ChainSpec spec(std::uint64_t burn, std::uint64_t thin, std::uint64_t n, std::uint64_t seed) {
  ChainSpec c;
  c.burn_in = burn;
  c.thin = thin;
  c.n_samples = n;
  c.seed = seed;
  return c;
}

}  // namespace

TEST(TruncNorm, HalfNormalMean) {
  const auto x = tn_draws(0.0, 1.0, 0.0, kInf, 200000, 1);
  const auto m = mean_se(x);
  EXPECT_NEAR(m.mean, std::sqrt(2.0 / kPi), 4.0 * m.se);
  for (double v : x) ASSERT_GE(v, 0.0);
}

// Property: draws follow the truncated CDF for intervals on either side of,
// straddling, and far from the mean.
TEST(TruncNorm, MatchesCdfAcrossIntervals) {
  struct Case {
    double m, s, lo, hi;
  };
  const Case cases[] = {{0.0, 1.0, -1.0, 2.0}, {1.0, 2.0, -kInf, 0.0}, {-0.5, 0.3, 0.0, kInf},
                        {0.0, 1.0, 3.0, 3.5},  {2.0, 1.0, -kInf, kInf}, {0.0, 1.0, -5.0, -4.0},
                        {0.0, 1.0, 7.0, kInf}, {0.0, 1.0, 8.0, 8.01},   {0.0, 1.0, -kInf, -9.0}};
  std::uint64_t seed = 10;
  for (const auto& c : cases) {
    const auto x = tn_draws(c.m, c.s, c.lo, c.hi, 20000, seed++);
    const double a = (c.lo - c.m) / c.s, b = (c.hi - c.m) / c.s;
    // Tail-side CDF, so far tails keep precision.
    auto cdf = [&](double v) {
      const double z = (v - c.m) / c.s;
      if (a >= 0.0) return (upper_q(a) - upper_q(z)) / (upper_q(a) - upper_q(b));
      if (b <= 0.0) return (upper_q(-z) - upper_q(-a)) / (upper_q(-b) - upper_q(-a));
      return (normal_cdf(z) - normal_cdf(a)) / (normal_cdf(b) - normal_cdf(a));
    };
    EXPECT_LT(ks_one_sample(x, cdf), ks_one_sample_critical(x.size())) << "[" << c.lo << ", " << c.hi << "]";
    for (double v : x) ASSERT_TRUE(v >= c.lo && v <= c.hi);
  }
}

TEST(TruncNorm, FarTailMean) {
  for (double a : {10.0, 20.0, 30.0}) {
    const auto x = tn_draws(0.0, 1.0, a, kInf, 50000, 40 + static_cast<std::uint64_t>(a));
    const auto m = mean_se(x);
    EXPECT_NEAR(m.mean, phi(a) / upper_q(a), 4.0 * m.se) << "a = " << a;
  }
}

TEST(TruncNorm, RejectsBadInput) {
  Rng rng(1);
  EXPECT_THROW(sample_trunc_norm_1d(0.0, 1.0, 1.0, 1.0, rng), std::invalid_argument);
  EXPECT_THROW(sample_trunc_norm_1d(0.0, 0.0, 0.0, 1.0, rng), std::invalid_argument);
  EXPECT_THROW(sample_trunc_norm_1d(0.0, 1.0, 2.0, 1.0, rng), std::invalid_argument);
}

TEST(TmvnGibbs, RejectsGeneralConstraints) {
  RowMatrix a(1, 2);
  a << 1.0, 1.0;
  EXPECT_THROW(TmvnGibbs(Vector::Zero(2), Matrix::Identity(2, 2), ConstraintSet(a, {1})), std::invalid_argument);
  EXPECT_THROW(TmvnGibbs(Vector::Zero(2), Matrix::Identity(2, 2), ConstraintSet::axis_aligned(2, {0, 0}, {1, -1})),
               std::invalid_argument);
}

TEST(TmvnGibbs, FeasibleStart) {
  const TmvnGibbs g((Vector(2) << -1.0, -2.0).finished(), corr2(0.3), ConstraintSet::axis_aligned(2, {0}, {1}));
  EXPECT_EQ(g.feasible_start(), (Vector(2) << 1.0, -2.0).finished());
}

TEST(TmvnGibbs, ExplicitStartMustBeFeasible) {
  ChainSpec c = spec(0, 1, 10, 1);
  c.init = InitMode::kExplicit;
  c.init_theta = (Vector(2) << -1.0, 1.0).finished();
  EXPECT_THROW(gibbs_tmvn(Vector::Zero(2), corr2(0.5), ConstraintSet::positive_orthant(2), c), std::invalid_argument);
}

TEST(TmvnGibbs, MatchesQuadratureOnOrthant) {
  for (double rho : {-0.5, 0.5}) {
    const auto q = quadrature_moments({Vector::Zero(2), corr2(rho), ConstraintSet::positive_orthant(2), std::nullopt});
    const auto batch = gibbs_tmvn(Vector::Zero(2), corr2(rho), ConstraintSet::positive_orthant(2), spec(100, 1, 200000, 2));
    EXPECT_EQ(batch.sampler, "hard-gibbs");
    for (Eigen::Index j = 0; j < 2; ++j) {
      const auto x = column(batch.draws, j);
      EXPECT_NEAR(batch.draws.col(j).mean(), q.mean(j), 5.0 * batch_means_se(x)) << "rho " << rho;
      for (double v : x) ASSERT_GE(v, 0.0);
    }
  }
}

TEST(Rejection, AcceptanceRateOnCorrelatedOrthant) {
  // P(θ ∈ R²₊) = 1/4 + asin(ρ)/(2π) = 1/3 at ρ = 1/2.
  const auto batch =
      rejection_tmvn_batch(Vector::Zero(2), CovStructure::dense(corr2(0.5)), ConstraintSet::positive_orthant(2),
                           spec(0, 1, 30000, 3), 1000000);
  const double rate = 30000.0 / static_cast<double>(batch.iterations);
  const double p = 1.0 / 3.0;
  const double se = std::sqrt(p * (1 - p) / static_cast<double>(batch.iterations));
  EXPECT_NEAR(rate, p, 5.0 * se);
  EXPECT_EQ(batch.sampler, "hard-rejection");
}

TEST(Rejection, AgreesWithGibbsInDistribution) {
  const Vector mu = (Vector(2) << 0.3, -0.2).finished();
  const auto c = ConstraintSet::axis_aligned(2, {0, 1}, {1, -1});
  const auto rej = rejection_tmvn_batch(mu, CovStructure::dense(corr2(0.75)), c, spec(0, 1, 20000, 4), 1000000);
  const auto gib = gibbs_tmvn(mu, corr2(0.75), c, spec(100, 10, 20000, 5));
  for (Eigen::Index j = 0; j < 2; ++j) {
    EXPECT_LT(ks_statistic(column(rej.draws, j), column(gib.draws, j)), ks_critical(20000, 20000));
  }
}

TEST(Rejection, ExhaustedBudgetThrows) {
  // Far-shifted mean: the orthant is essentially unreachable.
  Rng rng(6);
  try {
    rejection_tmvn(Vector::Constant(2, -20.0), CovStructure::diagonal(Vector::Ones(2)),
                   ConstraintSet::positive_orthant(2), rng, 1000);
    FAIL() << "expected LowAcceptanceError";
  } catch (const LowAcceptanceError& e) {
    EXPECT_NE(std::string(e.what()).find("max_tries exhausted"), std::string::npos);
  }
}

TEST(Quadrature, HalfNormal) {
  const auto q = quadrature_moments({Vector::Zero(1), Matrix::Identity(1, 1), ConstraintSet::positive_orthant(1),
                                     std::nullopt});
  EXPECT_NEAR(q.mean(0), std::sqrt(2.0 / kPi), 1e-6);
  EXPECT_NEAR(q.cov(0, 0), 1.0 - 2.0 / kPi, 1e-6);
  EXPECT_LT(q.error_estimate, 1e-6);
}

TEST(Quadrature, UnconstrainedGaussian2d) {
  const Vector mu = (Vector(2) << 0.5, -1.0).finished();
  Matrix s(2, 2);
  s << 2.0, 0.6, 0.6, 1.0;
  const auto q = quadrature_moments({mu, s, ConstraintSet(2), 1.0});
  EXPECT_LT((q.mean - mu).cwiseAbs().maxCoeff(), 1e-7);
  EXPECT_LT((q.cov - s).cwiseAbs().maxCoeff(), 1e-6);
}

// Soft 1-D target against an independent fine trapezoid sum.
TEST(Quadrature, SoftOneDimensional) {
  const double eta = 5.0;
  const auto q = quadrature_moments({Vector::Constant(1, -0.5), Matrix::Identity(1, 1),
                                     ConstraintSet::positive_orthant(1), eta});
  double z = 0.0, m1 = 0.0, m2 = 0.0;
  const int n = 400000;
  const double lo = -10.5, hi = 9.5, h = (hi - lo) / n;
  for (int i = 0; i <= n; ++i) {
    const double x = lo + i * h;
    const double w = (i == 0 || i == n ? 0.5 : 1.0) * std::exp(-0.5 * (x + 0.5) * (x + 0.5)) / (1.0 + std::exp(-eta * x));
    z += w;
    m1 += w * x;
    m2 += w * x * x;
  }
  const double mean = m1 / z;
  EXPECT_NEAR(q.mean(0), mean, 1e-8);
  EXPECT_NEAR(q.cov(0, 0), m2 / z - mean * mean, 1e-8);
}

TEST(Quadrature, RejectsBadInput) {
  const QuadratureTarget t{Vector::Zero(3), Matrix::Identity(3, 3), ConstraintSet(3), std::nullopt};
  EXPECT_THROW(quadrature_moments(t), std::invalid_argument);
  const QuadratureTarget ok{Vector::Zero(1), Matrix::Identity(1, 1), ConstraintSet(1), std::nullopt};
  EXPECT_THROW(quadrature_moments(ok, QuadratureGrid{{-1.0}, {1.0}, {63}}), std::invalid_argument);
  EXPECT_THROW(quadrature_moments(ok, QuadratureGrid{{-1.0}, {1.0}, {32}}), std::invalid_argument);
}
