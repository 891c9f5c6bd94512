#pragma once

// Test-side oracles and statistics. Nothing here calls into the library's
// samplers; dense linear algebra is done directly with Eigen.

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "softtmvn/linalg.hpp"
#include "softtmvn/random.hpp"

namespace testing_support {

using softtmvn::Matrix;
using softtmvn::RowMatrix;
using softtmvn::Vector;

inline Matrix random_matrix(Eigen::Index rows, Eigen::Index cols, softtmvn::Rng& rng) {
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = rng.normal();
  }
  return m;
}

inline Vector random_vector(Eigen::Index n, softtmvn::Rng& rng) { return random_matrix(n, 1, rng).col(0); }

/// Well-conditioned SPD matrix: GGᵀ/d + 0.5 I.
inline Matrix random_spd(Eigen::Index d, softtmvn::Rng& rng) {
  const Matrix g = random_matrix(d, d, rng);
  Matrix s = g * g.transpose() / static_cast<double>(d);
  s.diagonal().array() += 0.5;
  return 0.5 * (s + s.transpose());
}

struct MeanSe {
  double mean;
  double se;
};

/// Sample mean with the naive iid standard error.
inline MeanSe mean_se(const std::vector<double>& x) {
  double m = 0.0;
  for (double v : x) m += v;
  m /= static_cast<double>(x.size());
  double s = 0.0;
  for (double v : x) s += (v - m) * (v - m);
  s /= static_cast<double>(x.size() - 1);
  return {m, std::sqrt(s / static_cast<double>(x.size()))};
}

inline std::vector<double> column(const RowMatrix& m, Eigen::Index j) {
  std::vector<double> out(static_cast<std::size_t>(m.rows()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) out[static_cast<std::size_t>(i)] = m(i, j);
  return out;
}

/// Two-sample Kolmogorov–Smirnov statistic.
inline double ks_statistic(std::vector<double> x, std::vector<double> y) {
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  const double n = static_cast<double>(x.size());
  const double m = static_cast<double>(y.size());
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] <= v) ++i;
    while (j < y.size() && y[j] <= v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / n - static_cast<double>(j) / m));
  }
  return d;
}

/// Asymptotic two-sample KS critical value at level alpha.
inline double ks_critical(std::size_t n, std::size_t m, double alpha = 0.001) {
  const double c = std::sqrt(-0.5 * std::log(alpha / 2.0));
  return c * std::sqrt(static_cast<double>(n + m) / (static_cast<double>(n) * static_cast<double>(m)));
}

/// One-sample KS statistic against a CDF.
template <class Cdf>
double ks_one_sample(std::vector<double> x, Cdf cdf) {
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = cdf(x[i]);
    d = std::max({d, std::abs(f - static_cast<double>(i) / n), std::abs(static_cast<double>(i + 1) / n - f)});
  }
  return d;
}

inline double ks_one_sample_critical(std::size_t n, double alpha = 0.001) {
  return std::sqrt(-0.5 * std::log(alpha / 2.0)) / std::sqrt(static_cast<double>(n));
}

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

/// Batch-means standard error of the mean for an autocorrelated series.
inline double batch_means_se(const std::vector<double>& x, std::size_t batches = 50) {
  const std::size_t len = x.size() / batches;
  std::vector<double> means;
  for (std::size_t b = 0; b < batches; ++b) {
    double s = 0.0;
    for (std::size_t i = b * len; i < (b + 1) * len; ++i) s += x[i];
    means.push_back(s / static_cast<double>(len));
  }
  return mean_se(means).se;
}

}  // namespace testing_support
