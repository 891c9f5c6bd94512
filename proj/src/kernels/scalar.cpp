#include "softtmvn/kernels.hpp"

#include <cmath>

namespace softtmvn::kernels::scalar {

double dot(std::span<const double> x, std::span<const double> y) noexcept {
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) sum += x[i] * y[i];
  return sum;
}

void axpy(double a, std::span<const double> x, std::span<double> y) noexcept {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

void gemv(MatrixView a, std::span<const double> x, std::span<double> y) noexcept {
  for (std::size_t i = 0; i < a.rows; ++i) y[i] = dot(a.row(i), x);
}

void gemv_t(MatrixView a, std::span<const double> x, std::span<double> y) noexcept {
  for (std::size_t i = 0; i < a.rows; ++i) {
    if (x[i] != 0.0) axpy(x[i], a.row(i), y);
  }
}

double abs_diff_sum(std::span<const double> x, std::span<const double> y) noexcept {
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) sum += std::abs(x[i] - y[i]);
  return sum;
}

}  // namespace softtmvn::kernels::scalar
