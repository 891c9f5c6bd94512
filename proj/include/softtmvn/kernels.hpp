#pragma once

// Dense inner-loop kernels used by the structured Gaussian sampler and the
// diagnostics. Every operation has a scalar reference implementation; SIMD
// variants (AVX2+FMA on x86-64, NEON on aarch64) are selected once at startup
// from the CPU's capabilities and can be overridden for equivalence testing.

#include <cstddef>
#include <span>

namespace softtmvn::kernels {

enum class Isa { kScalar, kAvx2, kNeon };

const char* isa_name(Isa isa) noexcept;

/// True when the running CPU (and this build) can execute `isa`.
bool isa_supported(Isa isa) noexcept;

/// Best ISA available on this machine.
Isa detected_isa() noexcept;

Isa active_isa() noexcept;

/// Switches every kernel to `isa`. Throws std::invalid_argument when the ISA
/// is not supported here.
void set_active_isa(Isa isa);

/// Row-major read-only matrix view.
struct MatrixView {
  const double* data = nullptr;
  std::size_t rows = 0;
  std::size_t cols = 0;

  std::span<const double> row(std::size_t i) const noexcept {
    return {data + i * cols, cols};
  }
};

double dot(std::span<const double> x, std::span<const double> y) noexcept;

/// y += a * x
void axpy(double a, std::span<const double> x, std::span<double> y) noexcept;

/// y = A x
void gemv(MatrixView a, std::span<const double> x, std::span<double> y) noexcept;

/// y += A^T x
void gemv_t(MatrixView a, std::span<const double> x, std::span<double> y) noexcept;

/// sum_i |x_i - y_i|
double abs_diff_sum(std::span<const double> x, std::span<const double> y) noexcept;

// Per-ISA entry points. These skip dispatch and are exposed so tests can
// compare every variant against the scalar reference directly.
namespace scalar {
double dot(std::span<const double> x, std::span<const double> y) noexcept;
void axpy(double a, std::span<const double> x, std::span<double> y) noexcept;
void gemv(MatrixView a, std::span<const double> x, std::span<double> y) noexcept;
void gemv_t(MatrixView a, std::span<const double> x, std::span<double> y) noexcept;
double abs_diff_sum(std::span<const double> x, std::span<const double> y) noexcept;
}  // namespace scalar

namespace avx2 {
double dot(std::span<const double> x, std::span<const double> y) noexcept;
void axpy(double a, std::span<const double> x, std::span<double> y) noexcept;
void gemv(MatrixView a, std::span<const double> x, std::span<double> y) noexcept;
void gemv_t(MatrixView a, std::span<const double> x, std::span<double> y) noexcept;
double abs_diff_sum(std::span<const double> x, std::span<const double> y) noexcept;
}  // namespace avx2

namespace neon {
double dot(std::span<const double> x, std::span<const double> y) noexcept;
void axpy(double a, std::span<const double> x, std::span<double> y) noexcept;
void gemv(MatrixView a, std::span<const double> x, std::span<double> y) noexcept;
void gemv_t(MatrixView a, std::span<const double> x, std::span<double> y) noexcept;
double abs_diff_sum(std::span<const double> x, std::span<const double> y) noexcept;
}  // namespace neon

}  // namespace softtmvn::kernels
