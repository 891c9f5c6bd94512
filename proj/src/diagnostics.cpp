#include "softtmvn/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "softtmvn/errors.hpp"
#include "softtmvn/kernels.hpp"

namespace softtmvn {
namespace {

std::vector<double> sorted_column(const RowMatrix& m, Eigen::Index j) {
  std::vector<double> col(static_cast<std::size_t>(m.rows()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) col[static_cast<std::size_t>(i)] = m(i, j);
  std::sort(col.begin(), col.end());
  return col;
}

void check_same_dim(const RowMatrix& x, const RowMatrix& y, const char* what) {
  if (x.cols() != y.cols()) {
    throw DimensionError(std::string(what) + ": samples have " + std::to_string(x.cols()) + " and " +
                         std::to_string(y.cols()) + " columns");
  }
  if (x.rows() == 0 || y.rows() == 0) throw std::invalid_argument(std::string(what) + ": empty sample");
}

}  // namespace

double w1_empirical_1d(std::span<const double> x, std::span<const double> y) {
  if (x.empty() || y.empty()) throw std::invalid_argument("w1_empirical_1d: empty sample");
  if (!std::is_sorted(x.begin(), x.end()) || !std::is_sorted(y.begin(), y.end())) {
    throw std::invalid_argument("w1_empirical_1d: samples must be sorted");
  }
  if (x.size() == y.size()) return kernels::abs_diff_sum(x, y) / static_cast<double>(x.size());

  // Walk both quantile functions; each step covers the probability mass until
  // the next breakpoint i/n or j/m.
  const double n = static_cast<double>(x.size());
  const double m = static_cast<double>(y.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double prev = 0.0;
  double total = 0.0;
  while (i < x.size() && j < y.size()) {
    const double next_x = static_cast<double>(i + 1) / n;
    const double next_y = static_cast<double>(j + 1) / m;
    const double next = std::min(next_x, next_y);
    total += (next - prev) * std::abs(x[i] - y[j]);
    prev = next;
    if (next_x <= next) ++i;
    if (next_y <= next) ++j;
  }
  return total;
}

std::vector<double> per_coordinate_w1(const RowMatrix& x, const RowMatrix& y) {
  check_same_dim(x, y, "per_coordinate_w1");
  std::vector<double> out(static_cast<std::size_t>(x.cols()));
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    const auto xs = sorted_column(x, j);
    const auto ys = sorted_column(y, j);
    out[static_cast<std::size_t>(j)] = w1_empirical_1d(xs, ys);
  }
  return out;
}

double metric_d(const RowMatrix& x, const RowMatrix& y) {
  const auto w = per_coordinate_w1(x, y);
  double sum = 0.0;
  for (double v : w) sum += v;
  return sum / static_cast<double>(w.size());
}

double metric_xi(const RowMatrix& x, const RowMatrix& y) {
  check_same_dim(x, y, "metric_xi");
  const Eigen::RowVectorXd diff = x.colwise().mean() - y.colwise().mean();
  return diff.squaredNorm() / static_cast<double>(x.cols());
}

double ess(std::span<const double> chain) {
  const std::size_t n = chain.size();
  if (n < 10) throw std::invalid_argument("ess: need at least 10 draws");
  double mean = 0.0;
  for (double v : chain) mean += v;
  mean /= static_cast<double>(n);
  std::vector<double> centered(n);
  for (std::size_t i = 0; i < n; ++i) centered[i] = chain[i] - mean;
  const double c0 = kernels::dot(centered, centered) / static_cast<double>(n);
  if (!(c0 > 0.0)) throw std::invalid_argument("ess: constant series has undefined autocorrelation");

  auto rho = [&](std::size_t lag) {
    const std::span<const double> head(centered.data(), n - lag);
    const std::span<const double> tail(centered.data() + lag, n - lag);
    return kernels::dot(head, tail) / static_cast<double>(n) / c0;
  };

  // Pair sums Γₖ = ρ₂ₖ + ρ₂ₖ₊₁, truncated at the first non-positive pair and
  // forced monotone non-increasing.
  double tau = -1.0;
  double prev_pair = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; 2 * k + 1 < n; ++k) {
    double pair = (k == 0 ? 1.0 : rho(2 * k)) + rho(2 * k + 1);
    if (pair <= 0.0) break;
    pair = std::min(pair, prev_pair);
    tau += 2.0 * pair;
    prev_pair = pair;
  }
  const double nn = static_cast<double>(n);
  if (!(tau > 0.0)) return nn;
  return std::min(nn, nn / tau);
}

Vector ess_per_coordinate(const RowMatrix& draws) {
  Vector out(draws.cols());
  std::vector<double> col(static_cast<std::size_t>(draws.rows()));
  for (Eigen::Index j = 0; j < draws.cols(); ++j) {
    for (Eigen::Index i = 0; i < draws.rows(); ++i) col[static_cast<std::size_t>(i)] = draws(i, j);
    try {
      out(j) = ess(col);
    } catch (const std::invalid_argument&) {
      out(j) = std::numeric_limits<double>::quiet_NaN();
    }
  }
  return out;
}

}  // namespace softtmvn
