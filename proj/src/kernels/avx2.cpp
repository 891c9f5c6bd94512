// AVX2 + FMA variants. This translation unit is compiled with -mavx2 -mfma
// and must only be entered after the dispatcher confirmed CPU support.

#include "softtmvn/kernels.hpp"

#include <immintrin.h>

namespace softtmvn::kernels::avx2 {
namespace {

constexpr std::size_t kWidth = 4;

inline double hsum(__m256d v) noexcept {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d pair = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(pair, _mm_unpackhi_pd(pair, pair)));
}

}  // namespace

double dot(std::span<const double> x, std::span<const double> y) noexcept {
  const std::size_t n = x.size();
  const double* px = x.data();
  const double* py = y.data();
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 * kWidth <= n; i += 2 * kWidth) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(px + i), _mm256_loadu_pd(py + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(px + i + kWidth), _mm256_loadu_pd(py + i + kWidth), acc1);
  }
  for (; i + kWidth <= n; i += kWidth) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(px + i), _mm256_loadu_pd(py + i), acc0);
  }
  double sum = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) sum += px[i] * py[i];
  return sum;
}

void axpy(double a, std::span<const double> x, std::span<double> y) noexcept {
  const std::size_t n = x.size();
  const double* px = x.data();
  double* py = y.data();
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + kWidth <= n; i += kWidth) {
    _mm256_storeu_pd(py + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(px + i), _mm256_loadu_pd(py + i)));
  }
  for (; i < n; ++i) py[i] += a * px[i];
}

void gemv(MatrixView a, std::span<const double> x, std::span<double> y) noexcept {
  for (std::size_t i = 0; i < a.rows; ++i) y[i] = dot(a.row(i), x);
}

void gemv_t(MatrixView a, std::span<const double> x, std::span<double> y) noexcept {
  const std::size_t n = a.cols;
  double* py = y.data();
  std::size_t i = 0;
  // Four source rows per pass so each y block is loaded and stored once.
  for (; i + 4 <= a.rows; i += 4) {
    const double* r0 = a.data + i * n;
    const double* r1 = r0 + n;
    const double* r2 = r1 + n;
    const double* r3 = r2 + n;
    const __m256d c0 = _mm256_set1_pd(x[i]);
    const __m256d c1 = _mm256_set1_pd(x[i + 1]);
    const __m256d c2 = _mm256_set1_pd(x[i + 2]);
    const __m256d c3 = _mm256_set1_pd(x[i + 3]);
    std::size_t j = 0;
    for (; j + kWidth <= n; j += kWidth) {
      __m256d acc = _mm256_loadu_pd(py + j);
      acc = _mm256_fmadd_pd(c0, _mm256_loadu_pd(r0 + j), acc);
      acc = _mm256_fmadd_pd(c1, _mm256_loadu_pd(r1 + j), acc);
      acc = _mm256_fmadd_pd(c2, _mm256_loadu_pd(r2 + j), acc);
      acc = _mm256_fmadd_pd(c3, _mm256_loadu_pd(r3 + j), acc);
      _mm256_storeu_pd(py + j, acc);
    }
    for (; j < n; ++j) {
      py[j] += x[i] * r0[j] + x[i + 1] * r1[j] + x[i + 2] * r2[j] + x[i + 3] * r3[j];
    }
  }
  for (; i < a.rows; ++i) axpy(x[i], a.row(i), y);
}

double abs_diff_sum(std::span<const double> x, std::span<const double> y) noexcept {
  const std::size_t n = x.size();
  const double* px = x.data();
  const double* py = y.data();
  const __m256d sign_mask = _mm256_set1_pd(-0.0);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + kWidth <= n; i += kWidth) {
    const __m256d diff = _mm256_sub_pd(_mm256_loadu_pd(px + i), _mm256_loadu_pd(py + i));
    acc = _mm256_add_pd(acc, _mm256_andnot_pd(sign_mask, diff));
  }
  double sum = hsum(acc);
  for (; i < n; ++i) sum += px[i] > py[i] ? px[i] - py[i] : py[i] - px[i];
  return sum;
}

}  // namespace softtmvn::kernels::avx2
