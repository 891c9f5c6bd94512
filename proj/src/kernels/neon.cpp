// NEON (AArch64 Advanced SIMD) variants. Two doubles per register; always
// available on aarch64 so no runtime probe is needed.

#include "softtmvn/kernels.hpp"

#include <arm_neon.h>

namespace softtmvn::kernels::neon {

double dot(std::span<const double> x, std::span<const double> y) noexcept {
  const std::size_t n = x.size();
  const double* px = x.data();
  const double* py = y.data();
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(px + i), vld1q_f64(py + i));
    acc1 = vfmaq_f64(acc1, vld1q_f64(px + i + 2), vld1q_f64(py + i + 2));
  }
  double sum = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) sum += px[i] * py[i];
  return sum;
}

void axpy(double a, std::span<const double> x, std::span<double> y) noexcept {
  const std::size_t n = x.size();
  const double* px = x.data();
  double* py = y.data();
  const float64x2_t va = vdupq_n_f64(a);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    vst1q_f64(py + i, vfmaq_f64(vld1q_f64(py + i), va, vld1q_f64(px + i)));
  }
  for (; i < n; ++i) py[i] += a * px[i];
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
  const std::size_t n = x.size();
  const double* px = x.data();
  const double* py = y.data();
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    acc = vaddq_f64(acc, vabdq_f64(vld1q_f64(px + i), vld1q_f64(py + i)));
  }
  double sum = vaddvq_f64(acc);
  for (; i < n; ++i) sum += px[i] > py[i] ? px[i] - py[i] : py[i] - px[i];
  return sum;
}

}  // namespace softtmvn::kernels::neon
