#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "softtmvn/polya_gamma.hpp"
#include "support.hpp"

using namespace softtmvn;
using testing_support::ks_critical;
using testing_support::ks_statistic;
using testing_support::mean_se;

namespace {

constexpr double kPi = 3.14159265358979323846;

// PG(1, c) = (1 / 2π²) Σₖ gₖ / ((k − ½)² + c²/(4π²)), gₖ ~ Exp(1).
double series_term(int k, double c) { return 1.0 / ((k - 0.5) * (k - 0.5) + c * c / (4.0 * kPi * kPi)); }

double series_mean(double c) {
  double s = 0.0;
  for (int k = 1; k <= 2000000; ++k) s += series_term(k, c);
  return s / (2.0 * kPi * kPi);
}

double series_variance(double c) {
  double s = 0.0;
  for (int k = 1; k <= 200000; ++k) s += series_term(k, c) * series_term(k, c);
  return s / (4.0 * kPi * kPi * kPi * kPi);
}

// Truncated series sampler with the mean of the dropped tail added back.
double series_draw(double c, double tail, Rng& rng, int terms = 400) {
  double s = 0.0;
  for (int k = 1; k <= terms; ++k) s += rng.exponential() * series_term(k, c);
  return (s + tail) / (2.0 * kPi * kPi);
}

double series_tail(double c, int terms = 400) {
  double tail = 0.0;
  for (int k = terms + 1; k <= 2000000; ++k) tail += series_term(k, c);
  return tail;
}

std::vector<double> draws(double c, std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> out(n);
  for (auto& x : out) x = sample_pg1(c, rng);
  return out;
}

}  // namespace

TEST(PgMean, ClosedFormAndLimit) {
  EXPECT_EQ(pg1_mean(0.0), 0.25);
  EXPECT_NEAR(pg1_mean(2.0), std::tanh(1.0) / 4.0, 1e-15);
  EXPECT_NEAR(pg1_mean(2.0), 0.19040, 1e-5);
  EXPECT_EQ(pg1_mean(3.7), pg1_mean(-3.7));
  EXPECT_NEAR(pg1_mean(1e-5), 0.25, 1e-10);
}

TEST(PgMean, MatchesSeriesRepresentation) {
  for (double c : {0.0, 0.5, 2.0, 10.0}) EXPECT_NEAR(pg1_mean(c), series_mean(c), 1e-6);
}

TEST(PgVariance, MatchesSeriesRepresentation) {
  for (double c : {0.0, 1e-3, 0.5, 2.0, 10.0, 100.0}) {
    const double v = series_variance(c);
    EXPECT_NEAR(pg1_variance(c), v, 1e-7 * v) << "c = " << c;
  }
  EXPECT_NEAR(pg1_variance(0.0), 1.0 / 24.0, 1e-15);
}

TEST(PgSampler, MeanAtZeroTilt) {
  const auto x = draws(0.0, 1000000, 1);
  const auto m = mean_se(x);
  EXPECT_NEAR(m.mean, 0.25, 3.0 * m.se);
}

TEST(PgSampler, MeanAtTiltTwo) {
  const auto x = draws(2.0, 1000000, 2);
  const auto m = mean_se(x);
  EXPECT_NEAR(m.mean, std::tanh(1.0) / 4.0, 3.0 * m.se);
}

// Property: for each tilt, the mean of 1e5 draws is within 4 se of the
// closed form, using the series variance as se oracle.
TEST(PgSampler, MomentMatchAcrossTilts) {
  for (double c : {0.0, 0.5, 2.0, 10.0, 100.0, 700.0}) {
    const auto x = draws(c, 100000, 3 + static_cast<std::uint64_t>(c));
    const auto m = mean_se(x);
    const double se = std::sqrt(series_variance(c) / 1e5);
    EXPECT_NEAR(m.mean, pg1_mean(c), 4.0 * se) << "c = " << c;
    EXPECT_NEAR(m.se, se, 0.1 * se) << "c = " << c;
  }
}

TEST(PgSampler, SymmetricInTilt) {
  const auto x = draws(1.5, 100000, 10);
  const auto y = draws(-1.5, 100000, 11);
  EXPECT_LT(ks_statistic(x, y), ks_critical(x.size(), y.size()));
}

TEST(PgSampler, DistributionMatchesSeriesSampler) {
  for (double c : {0.3, 4.0}) {
    const auto x = draws(c, 20000, 20);
    Rng rng(21);
    const double tail = series_tail(c);
    std::vector<double> y(20000);
    for (auto& v : y) v = series_draw(c, tail, rng);
    EXPECT_LT(ks_statistic(x, y), ks_critical(x.size(), y.size())) << "c = " << c;
  }
}

TEST(PgSampler, DrawsArePositive) {
  for (double c : {0.0, 1.0, 50.0, 1000.0}) {
    for (double x : draws(c, 20000, 30)) ASSERT_GT(x, 0.0);
  }
}

TEST(PgSampler, Deterministic) {
  Rng a(99), b(99);
  for (double c : {0.0, -3.0, 12.0, 500.0}) {
    const auto da = draw_pg1(c, a);
    const auto db = draw_pg1(c, b);
    EXPECT_EQ(da.omega, db.omega);
    EXPECT_EQ(da.tilt, c);
  }
}
