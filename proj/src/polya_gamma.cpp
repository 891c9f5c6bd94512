#include "softtmvn/polya_gamma.hpp"

#include <cmath>
#include <numbers>

#include "softtmvn/errors.hpp"

namespace softtmvn {
namespace {

constexpr double kTrunc = 0.64;
constexpr long kMaxProposals = 1'000'000;
constexpr double kPi = std::numbers::pi;

// log Φ(x), accurate far into the lower tail.
double log_norm_cdf(double x) {
  if (x > -30.0) return std::log(0.5 * std::erfc(-x / std::numbers::sqrt2));
  const double x2 = x * x;
  const double series = 1.0 - 1.0 / x2 + 3.0 / (x2 * x2) - 15.0 / (x2 * x2 * x2);
  return -0.5 * x2 - std::log(-x) - 0.5 * std::log(2.0 * kPi) + std::log(series);
}

double log_add_exp(double a, double b) {
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

// n-th coefficient of the alternating series for the Jacobi density,
// piecewise in x around the truncation point.
double series_term(int n, double x) {
  const double k = n + 0.5;
  if (x > kTrunc) return kPi * k * std::exp(-0.5 * k * k * kPi * kPi * x);
  return kPi * k * std::pow(2.0 / (kPi * x), 1.5) * std::exp(-2.0 * k * k / x);
}

// Inverse Gaussian IG(1/z, 1) truncated to (0, trunc).
double truncated_inverse_gaussian(double z, Rng& rng) {
  const double mu = z > 0.0 ? 1.0 / z : HUGE_VAL;
  if (mu > kTrunc) {
    // Proposal from the z = 0 (Lévy) density, corrected by exp(-z² x / 2).
    for (long iter = 0; iter < kMaxProposals; ++iter) {
      double e1 = 0.0;
      double e2 = 0.0;
      do {
        e1 = rng.exponential();
        e2 = rng.exponential();
      } while (e1 * e1 > 2.0 * e2 / kTrunc);
      const double root = 1.0 + kTrunc * e1;
      const double x = kTrunc / (root * root);
      if (rng.uniform() <= std::exp(-0.5 * z * z * x)) return x;
    }
  } else {
    for (long iter = 0; iter < kMaxProposals; ++iter) {
      const double n = rng.normal();
      const double y = n * n;
      const double my = mu * y;
      double x = mu + 0.5 * mu * my - 0.5 * mu * std::sqrt(4.0 * my + my * my);
      if (rng.uniform() > mu / (mu + x)) x = mu * mu / x;
      if (x < kTrunc) return x;
    }
  }
  throw SamplerFailure("truncated inverse Gaussian proposal exceeded 1e6 iterations");
}

}  // namespace

double sample_pg1(double c, Rng& rng) {
  const double z = 0.5 * std::abs(c);
  const double k = kPi * kPi / 8.0 + 0.5 * z * z;

  // Mixture weights of the two proposal pieces, in log space so that large
  // tilts neither overflow nor underflow.
  const double log_right = std::log(kPi / (2.0 * k)) - k * kTrunc;
  const double sqrt_t = std::sqrt(kTrunc);
  const double log_left = std::log(2.0) + log_add_exp(-z + log_norm_cdf((kTrunc * z - 1.0) / sqrt_t),
                                                      z + log_norm_cdf(-(kTrunc * z + 1.0) / sqrt_t));
  const double prob_right = 1.0 / (1.0 + std::exp(log_left - log_right));

  for (long iter = 0; iter < kMaxProposals; ++iter) {
    const double x = rng.uniform() < prob_right ? kTrunc + rng.exponential() / k : truncated_inverse_gaussian(z, rng);

    double s = series_term(0, x);
    const double y = rng.uniform() * s;
    for (int n = 1;; ++n) {
      if (n % 2 == 1) {
        s -= series_term(n, x);
        if (y <= s) return 0.25 * x;
      } else {
        s += series_term(n, x);
        if (y > s) break;
      }
    }
  }
  throw SamplerFailure("PG(1, c) sampler exceeded 1e6 proposals");
}

double pg1_mean(double c) noexcept {
  const double a = std::abs(c);
  if (a < 1e-4) return 0.25 - a * a / 48.0;
  return std::tanh(0.5 * a) / (2.0 * a);
}

double pg1_variance(double c) noexcept {
  const double a = std::abs(c);
  if (a < 1e-2) return 1.0 / 24.0 - a * a / 120.0;
  // sinh(a) / cosh²(a/2) = 2 tanh(a/2), which stays finite for large a.
  const double sech = 1.0 / std::cosh(0.5 * a);
  return (2.0 * std::tanh(0.5 * a) - a * sech * sech) / (4.0 * a * a * a);
}

}  // namespace softtmvn
