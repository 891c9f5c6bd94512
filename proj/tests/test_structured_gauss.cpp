#include <gtest/gtest.h>

#include <atomic>
#include <cstdlib>
#include <new>
#include <vector>

#include "softtmvn/errors.hpp"
#include "softtmvn/structured_gauss.hpp"
#include "support.hpp"

using namespace softtmvn;
using testing_support::column;
using testing_support::ks_critical;
using testing_support::ks_statistic;
using testing_support::random_matrix;
using testing_support::random_spd;
using testing_support::random_vector;

// Largest single heap request while tracking is on. Eigen allocates through
// malloc directly, so malloc itself is wrapped (linker --wrap) and operator
// new is routed through it.
namespace {
std::atomic<bool> g_track{false};
std::atomic<std::size_t> g_largest{0};
}  // namespace

extern "C" void* __real_malloc(std::size_t n);
extern "C" void* __wrap_malloc(std::size_t n) {
  if (g_track.load(std::memory_order_relaxed)) {
    std::size_t cur = g_largest.load();
    while (n > cur && !g_largest.compare_exchange_weak(cur, n)) {
    }
  }
  return __real_malloc(n);
}

void* operator new(std::size_t n) {
  if (void* p = std::malloc(n == 0 ? 1 : n)) return p;
  throw std::bad_alloc();
}
void operator delete(void* p) noexcept { std::free(p); }
void operator delete(void* p, std::size_t) noexcept { std::free(p); }

namespace {

struct DenseOracle {
  Matrix cov;
  Vector mean;
};

// Posterior N((ΦᵀΦ + Σ⁻¹)⁻¹(Φᵀα + Σ⁻¹μ), (ΦᵀΦ + Σ⁻¹)⁻¹) by dense inversion.
DenseOracle dense_posterior(const Matrix& phi, const Vector& alpha, const Matrix& sigma, const Vector& mu) {
  const Matrix sigma_inv = sigma.inverse();
  const Matrix prec = phi.transpose() * phi + sigma_inv;
  const Matrix cov = prec.inverse();
  return {cov, cov * (phi.transpose() * alpha + sigma_inv * mu)};
}

RowMatrix draw_many(const RowMatrix& phi, const Vector& alpha, const CovStructure& cov, std::size_t n,
                    std::uint64_t seed) {
  Rng rng(seed);
  RowMatrix out(static_cast<Eigen::Index>(n), cov.dim());
  for (std::size_t i = 0; i < n; ++i) out.row(static_cast<Eigen::Index>(i)) = sample_posterior(phi, alpha, cov, rng);
  return out;
}

void expect_moments(const RowMatrix& draws, const Vector& mean, const Matrix& cov, double z = 5.0) {
  const double n = static_cast<double>(draws.rows());
  const Vector m = draws.colwise().mean().transpose();
  const Matrix centered = draws.rowwise() - m.transpose();
  const Matrix s = centered.transpose() * centered / (n - 1.0);
  for (Eigen::Index j = 0; j < mean.size(); ++j) {
    EXPECT_NEAR(m(j), mean(j), z * std::sqrt(cov(j, j) / n)) << "mean " << j;
    for (Eigen::Index k = 0; k < mean.size(); ++k) {
      const double se = std::sqrt((cov(j, j) * cov(k, k) + cov(j, k) * cov(j, k)) / n);
      EXPECT_NEAR(s(j, k), cov(j, k), z * se) << "cov " << j << "," << k;
    }
  }
}

}  // namespace

TEST(PriorSample, DiagonalMoments) {
  const auto cov = CovStructure::diagonal((Vector(3) << 0.5, 2.0, 4.0).finished());
  Rng rng(1);
  RowMatrix draws(100000, 3);
  for (Eigen::Index i = 0; i < draws.rows(); ++i) draws.row(i) = sample_prior(cov, rng);
  expect_moments(draws, Vector::Zero(3), cov.to_dense());
}

TEST(PriorSample, ProbitBlockMoments) {
  Rng g(2);
  const RowMatrix h = random_matrix(4, 2, g);
  const auto cov = CovStructure::probit_block(h, (Vector(2) << 1.5, 0.7).finished());
  // Dense form assembled test-side.
  Matrix sigma(6, 6);
  const Matrix l = (Vector(2) << 1.5, 0.7).finished().asDiagonal();
  sigma.topLeftCorner(4, 4) = Matrix::Identity(4, 4) + Matrix(h) * l * Matrix(h).transpose();
  sigma.topRightCorner(4, 2) = Matrix(h) * l;
  sigma.bottomLeftCorner(2, 4) = l * Matrix(h).transpose();
  sigma.bottomRightCorner(2, 2) = l;
  EXPECT_LT((cov.to_dense() - sigma).norm(), 1e-12);
  Rng rng(3);
  RowMatrix draws(100000, 6);
  for (Eigen::Index i = 0; i < draws.rows(); ++i) draws.row(i) = sample_prior(cov, rng);
  expect_moments(draws, Vector::Zero(6), sigma);
}

TEST(PriorSample, DenseCorrelated) {
  Matrix sigma(2, 2);
  sigma << 1.0, 0.75, 0.75, 1.0;
  const auto cov = CovStructure::dense(sigma);
  Rng rng(4);
  RowMatrix draws(200000, 2);
  for (Eigen::Index i = 0; i < draws.rows(); ++i) draws.row(i) = sample_prior(cov, rng);
  expect_moments(draws, Vector::Zero(2), sigma);
}

TEST(Posterior, MomentsMatchDenseOracle) {
  Rng g(5);
  const Eigen::Index d = 5, r = 3;
  const Matrix sigma = random_spd(d, g);
  const RowMatrix phi = random_matrix(r, d, g);
  const Vector alpha = random_vector(r, g);
  const auto oracle = dense_posterior(phi, alpha, sigma, Vector::Zero(d));
  const auto draws = draw_many(phi, alpha, CovStructure::dense(sigma), 200000, 6);
  expect_moments(draws, oracle.mean, oracle.cov);
}

TEST(Posterior, MatchesNaiveFactorizationInDistribution) {
  Rng g(7);
  const Eigen::Index d = 4, r = 2;
  const Matrix sigma = random_spd(d, g);
  const RowMatrix phi = random_matrix(r, d, g);
  const Vector alpha = random_vector(r, g);
  const auto oracle = dense_posterior(phi, alpha, sigma, Vector::Zero(d));
  const Eigen::LLT<Matrix> llt(oracle.cov);
  const Matrix lower = llt.matrixL();
  Rng rng(8);
  RowMatrix naive(50000, d);
  for (Eigen::Index i = 0; i < naive.rows(); ++i) naive.row(i) = (oracle.mean + lower * random_vector(d, rng)).transpose();
  const auto fast = draw_many(phi, alpha, CovStructure::dense(sigma), 50000, 9);
  for (Eigen::Index j = 0; j < d; ++j) {
    EXPECT_LT(ks_statistic(column(fast, j), column(naive, j)), ks_critical(50000, 50000)) << "coord " << j;
  }
}

// Property: the r×r route reproduces the dense posterior mean and covariance
// algebraically, over random instances.
TEST(Posterior, WoodburyIdentityHoldsOnRandomInstances) {
  Rng g(10);
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::Index d = 2 + g.uniform_int(0, 10);
    const Eigen::Index r = 1 + g.uniform_int(0, d - 1);
    const Matrix sigma = random_spd(d, g);
    const Matrix phi = random_matrix(r, d, g);
    const Matrix s_phi_t = sigma * phi.transpose();
    const Matrix sys = phi * s_phi_t + Matrix::Identity(r, r);
    const Matrix via_r = sigma - s_phi_t * sys.ldlt().solve(s_phi_t.transpose());
    const Matrix direct = (phi.transpose() * phi + sigma.inverse()).inverse();
    EXPECT_LT((via_r - direct).norm(), 1e-8 * direct.norm()) << "trial " << trial;

    // Library path: draw with δ = 0 and u = 0 gives the posterior mean.
    const Vector alpha = random_vector(r, g);
    const PosteriorSystem system(phi, CovStructure::dense(sigma));
    const Vector mean = system.draw(alpha, Vector::Zero(d), Vector::Zero(r));
    const Vector expect = direct * phi.transpose() * alpha;
    EXPECT_LT((mean - expect).norm(), 1e-8 * (1.0 + expect.norm())) << "trial " << trial;
  }
}

TEST(MeanShift, MatchesDenseFormula) {
  Rng g(11);
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::Index d = 3 + g.uniform_int(0, 5);
    const Eigen::Index r = 1 + g.uniform_int(0, d - 1);
    const Matrix sigma = random_spd(d, g);
    const RowMatrix phi = random_matrix(r, d, g);
    const Vector mu = random_vector(d, g);
    const auto oracle = dense_posterior(phi, Vector::Zero(r), sigma, mu);
    const Vector got = mean_shift(phi, CovStructure::dense(sigma), mu);
    EXPECT_LT((got - oracle.mean).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(Posterior, ZeroRowsIsPriorDraw) {
  const auto cov = CovStructure::diagonal(Vector::Constant(3, 2.0));
  Rng a(12), b(12);
  const Vector x = sample_posterior(RowMatrix(0, 3), Vector(0), cov, a);
  const Vector y = sample_prior(cov, b);
  EXPECT_EQ(x, y);
}

TEST(Posterior, ProbitBlockAvoidsDenseAllocations) {
  Rng g(13);
  const Eigen::Index n = 1500, q = 20, r = 10;
  const RowMatrix h = random_matrix(n, q, g);
  const auto cov = CovStructure::probit_block(h, Vector::Constant(q, 0.5));
  const Eigen::Index d = n + q;
  RowMatrix phi = RowMatrix::Zero(r, d);
  for (Eigen::Index i = 0; i < r; ++i) phi(i, i * 7) = 1.0;
  const Vector alpha = random_vector(r, g);
  Rng rng(14);
  g_largest = 0;
  g_track = true;
  const Vector theta = sample_posterior(phi, alpha, cov, rng);
  g_track = false;
  EXPECT_EQ(theta.size(), d);
  // A d×d double matrix would be 8·d² bytes; the sampler may use O(rd).
  EXPECT_LT(g_largest.load(), static_cast<std::size_t>(8 * r * d * 4));
  EXPECT_LT(g_largest.load(), static_cast<std::size_t>(8 * d * d / 10));
}

TEST(Posterior, ProbitBlockMatchesDense) {
  Rng g(15);
  const RowMatrix h = random_matrix(6, 2, g);
  const auto cov = CovStructure::probit_block(h, Vector::Constant(2, 1.3));
  const RowMatrix phi = random_matrix(3, 8, g);
  const Vector alpha = random_vector(3, g);
  const auto oracle = dense_posterior(phi, alpha, cov.to_dense(), Vector::Zero(8));
  const auto draws = draw_many(phi, alpha, cov, 100000, 16);
  expect_moments(draws, oracle.mean, oracle.cov);
}

TEST(ScaledRowSampler, AgreesWithGenericPath) {
  Rng g(17);
  const Eigen::Index d = 6, r = 4;
  const auto cov = CovStructure::dense(random_spd(d, g));
  const RowMatrix base = random_matrix(r, d, g);
  const ScaledRowSampler sampler(base, cov);
  for (int trial = 0; trial < 20; ++trial) {
    Vector scale(r);
    for (Eigen::Index i = 0; i < r; ++i) scale(i) = 0.1 + 3.0 * g.uniform();
    const Vector alpha = random_vector(r, g);
    const Vector mu = random_vector(d, g);
    const RowMatrix phi = scale.asDiagonal() * base;
    Rng a(100 + trial), b(100 + trial);
    const Vector fast = sampler.draw(scale, alpha, mu, a);
    const Vector slow = sample_posterior(phi, alpha, cov, b) + mean_shift(phi, cov, mu);
    EXPECT_LT((fast - slow).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(Errors, DimensionMismatch) {
  const auto cov = CovStructure::diagonal(Vector::Ones(3));
  Rng rng(18);
  EXPECT_THROW(sample_posterior(RowMatrix::Ones(2, 4), Vector::Zero(2), cov, rng), DimensionError);
  EXPECT_THROW(sample_posterior(RowMatrix::Ones(2, 3), Vector::Zero(3), cov, rng), DimensionError);
  EXPECT_THROW(mean_shift(RowMatrix::Ones(1, 3), cov, Vector::Zero(2)), DimensionError);
}

TEST(Errors, FactorizationNamesMinor) {
  Matrix bad = Matrix::Identity(3, 3);
  bad(2, 2) = -1.0;
  try {
    CovStructure::dense(bad);
    FAIL() << "expected FactorizationError";
  } catch (const FactorizationError& e) {
    EXPECT_EQ(e.minor(), 3);
  }
  try {
    CovStructure::diagonal((Vector(3) << 1.0, 0.0, 1.0).finished());
    FAIL() << "expected FactorizationError";
  } catch (const FactorizationError& e) {
    EXPECT_EQ(e.minor(), 2);
  }
}
