#include <gtest/gtest.h>

#include <cmath>

#include "softtmvn/msim.hpp"
#include "support.hpp"

using namespace softtmvn;
using testing_support::random_matrix;
using testing_support::random_vector;

namespace {

double binom(int n, int k) {
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

// ½ C(M,j) uʲ(1−u)^{M−j} at u = (t+1)/2, built test-side.
Matrix oracle_basis(const RowMatrix& x_tilde, const Vector& alpha, int m) {
  Matrix b(x_tilde.rows(), m + 1);
  for (Eigen::Index i = 0; i < x_tilde.rows(); ++i) {
    const double u = (x_tilde.row(i).dot(alpha) + 1.0) / 2.0;
    for (int j = 0; j <= m; ++j) b(i, j) = 0.5 * binom(m, j) * std::pow(u, j) * std::pow(1.0 - u, m - j);
  }
  return b;
}

}  // namespace

TEST(Basis, BernsteinMatchesFormulaAndSumsToOne) {
  for (int m : {1, 5, 10, 20}) {
    for (double u : {0.0, 0.13, 0.5, 0.99, 1.0}) {
      const Vector b = bernstein_basis(m, u);
      ASSERT_EQ(b.size(), m + 1);
      EXPECT_NEAR(b.sum(), 1.0, 1e-13);
      for (int j = 0; j <= m; ++j) EXPECT_NEAR(b(j), binom(m, j) * std::pow(u, j) * std::pow(1.0 - u, m - j), 1e-14);
    }
  }
  EXPECT_THROW(bernstein_basis(5, 1.5), std::invalid_argument);
}

TEST(Basis, TransformedSumsToHalf) {
  for (double t = -1.0; t <= 1.0; t += 0.125) {
    const Vector b = transformed_basis(20, t);
    EXPECT_NEAR(b.sum(), 0.5, 1e-13);
    EXPECT_LT((b - 0.5 * bernstein_basis(20, (t + 1.0) / 2.0)).norm(), 1e-15);
  }
  EXPECT_THROW(transformed_basis(20, -1.01), std::invalid_argument);
}

TEST(Basis, CumsumMatrix) {
  const Matrix a = cumsum_matrix(4);
  const Vector psi = (Vector(5) << 1.0, 2.0, 0.0, 3.0, -1.0).finished();
  EXPECT_EQ(a * psi, (Vector(5) << 1.0, 3.0, 3.0, 6.0, 5.0).finished());
  EXPECT_EQ(a.triangularView<Eigen::StrictlyUpper>().toDenseMatrix(), Matrix::Zero(5, 5));
}

TEST(Truth, CoefficientPattern) {
  const Vector t = msim_true_theta(20);
  Vector expect(21);
  expect << -1, -1, -1, -1, -1, -1, -0.5, 0, 0, 0, 0, 0, 0, 0, 0.5, 1, 1, 1, 1, 1, 1;
  EXPECT_EQ(t, expect);
  const Vector t10 = msim_true_theta(10);
  ASSERT_EQ(t10.size(), 11);
  for (Eigen::Index j = 1; j < t10.size(); ++j) EXPECT_GE(t10(j), t10(j - 1));
}

TEST(Data, ScaledIndicesInUnitInterval) {
  const auto ds = gen_msim_data(200, 3, 10, 1);
  EXPECT_EQ(ds.data.x.rows(), 200);
  EXPECT_NEAR(ds.truth.alpha.norm(), 1.0, 1e-14);
  EXPECT_NEAR(ds.data.x_tilde.rowwise().norm().maxCoeff(), 1.0, 1e-14);
  Rng g(2);
  for (int trial = 0; trial < 20; ++trial) {
    Vector a = random_vector(3, g);
    a.normalize();
    EXPECT_LE((ds.data.x_tilde * a).cwiseAbs().maxCoeff(), 1.0 + 1e-14);
  }
  const auto again = gen_msim_data(200, 3, 10, 1);
  EXPECT_EQ(again.data.y, ds.data.y);
}

TEST(Data, BasisMatrixMatchesOracle) {
  const auto ds = gen_msim_data(50, 4, 8, 3);
  const Matrix b = basis_matrix(ds.data, ds.truth.alpha, 8);
  EXPECT_LT((b - oracle_basis(ds.data.x_tilde, ds.truth.alpha, 8)).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(Conditional, MatchesDenseOracle) {
  const auto ds = gen_msim_data(80, 3, 6, 4);
  const double s2 = 0.05;
  const auto pc = psi_conditional(ds.data, ds.truth.alpha, s2, 6, 25.0);
  const Matrix d = oracle_basis(ds.data.x_tilde, ds.truth.alpha, 6) * cumsum_matrix(6);
  const Matrix prec = d.transpose() * d / s2 + Matrix::Identity(7, 7) / 25.0;
  const Matrix cov = prec.inverse();
  const Vector mean = cov * d.transpose() * ds.data.y / s2;
  EXPECT_LT((pc.sigma - cov).cwiseAbs().maxCoeff(), 1e-9 * cov.cwiseAbs().maxCoeff());
  EXPECT_LT((pc.precision - prec).cwiseAbs().maxCoeff(), 1e-9 * prec.cwiseAbs().maxCoeff());
  EXPECT_LT((pc.mu - mean).cwiseAbs().maxCoeff(), 1e-8 * (1.0 + mean.norm()));
  ASSERT_EQ(pc.constraints.size(), 6);
  for (Eigen::Index i = 0; i < 6; ++i) {
    EXPECT_EQ(*pc.constraints.axis(i), i + 1);
    EXPECT_EQ(pc.constraints.sign(i), 1);
  }
}

TEST(Prior, InverseGammaDefaultsHaveUnitMeanAndVarianceTen) {
  const MsimConfig c;
  const double a = c.sigma2_shape, b = c.sigma2_rate;
  EXPECT_NEAR(b / (a - 1.0), 1.0, 1e-12);
  EXPECT_NEAR(b * b / ((a - 1.0) * (a - 1.0) * (a - 2.0)), 10.0, 1e-9);
}

TEST(Predict, ConstantThetaGivesHalf) {
  const auto ds = gen_msim_data(30, 2, 5, 5);
  MsimFit fit;
  fit.psi = RowMatrix::Zero(3, 6);
  fit.psi.col(0).setConstant(0.8);  // θ = Aψ ≡ 0.8
  fit.alpha = RowMatrix(3, 2);
  Rng g(6);
  for (int s = 0; s < 3; ++s) fit.alpha.row(s) = random_vector(2, g).normalized().transpose();
  const Vector pred = msim_predict(fit, ds.data);
  EXPECT_LT((pred.array() - 0.4).abs().maxCoeff(), 1e-14);
}

TEST(Predict, TruthReproducesSignal) {
  const auto ds = gen_msim_data(100, 3, 20, 7);
  const auto hold = gen_msim_holdout(ds.truth, 200, ds.data.c, 8);
  MsimFit fit;
  // ψ = A⁻¹θ: first entry θ₀, then successive differences.
  const Vector& theta = ds.truth.theta;
  Vector psi(theta.size());
  psi(0) = theta(0);
  for (Eigen::Index j = 1; j < theta.size(); ++j) psi(j) = theta(j) - theta(j - 1);
  fit.psi = psi.transpose();
  fit.alpha = ds.truth.alpha.transpose();
  EXPECT_LT(mean_squared_error(msim_predict(fit, hold.data), hold.signal), 1e-20);
  EXPECT_EQ(hold.data.c, ds.data.c);
}

TEST(Monotonicity, ViolationFraction) {
  RowMatrix psi(4, 6);
  psi << 0.0, 0.1, 0.2, 0.0, 0.3, 0.1,  //
      -1.0, 0.0, 0.0, 0.0, 0.0, 0.0,    //
      0.0, 0.5, -2.0, 0.5, 0.5, 0.5,    //
      0.0, 0.2, 0.2, 0.2, 0.2, -0.9;
  EXPECT_DOUBLE_EQ(monotonicity_violation_fraction(psi), 0.5);
  EXPECT_EQ(monotonicity_violation_fraction(psi.topRows(2)), 0.0);
}

TEST(Fit, SmallRunShapesAndBookkeeping) {
  const auto ds = gen_msim_data(100, 3, 6, 9);
  MsimConfig c;
  c.m = 6;
  c.burn_in = 50;
  c.thin = 2;
  c.n_samples = 40;
  c.seed = 10;
  const auto fit = fit_msim(ds.data, c);
  EXPECT_EQ(fit.psi.rows(), 40);
  EXPECT_EQ(fit.psi.cols(), 7);
  EXPECT_EQ(fit.alpha.cols(), 3);
  EXPECT_EQ(fit.sigma2.size(), 40);
  EXPECT_GT(fit.sigma2.minCoeff(), 0.0);
  EXPECT_GT(fit.acceptance_rate, 0.0);
  EXPECT_LT(fit.acceptance_rate, 1.0);
  for (Eigen::Index s = 0; s < 40; ++s) EXPECT_NEAR(fit.alpha.row(s).norm(), 1.0, 1e-12);
  const auto again = fit_msim(ds.data, c);
  EXPECT_EQ(again.psi, fit.psi);

  c.prior = MsimPrior::kHard;
  const auto hard = fit_msim(ds.data, c);
  EXPECT_EQ(hard.psi.rightCols(6).minCoeff() >= 0.0, true);
}

TEST(Fit, SweepLeavesBetaScaleOutOfLikelihood) {
  // Doubling β leaves α, hence the conditional of ψ, unchanged.
  const auto ds = gen_msim_data(60, 3, 5, 11);
  const Vector a1 = ds.truth.beta.normalized();
  const Vector a2 = (2.0 * ds.truth.beta).normalized();
  const auto p1 = psi_conditional(ds.data, a1, 0.1, 5);
  const auto p2 = psi_conditional(ds.data, a2, 0.1, 5);
  EXPECT_LT((p1.mu - p2.mu).norm(), 1e-10);
}

TEST(Config, Validation) {
  MsimConfig c;
  EXPECT_NO_THROW(c.validate());
  c.m = 0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = MsimConfig{};
  c.proposal_sd = 0.0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = MsimConfig{};
  c.eta = -1.0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
}
