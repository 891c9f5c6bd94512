#include <atomic>
#include <stdexcept>
#include <string>

#include "softtmvn/kernels.hpp"

namespace softtmvn::kernels {

// ISAs not compiled into this build still need symbols for the per-ISA entry
// points; they forward to scalar and are never selected by the dispatcher.
#if !defined(SOFTTMVN_HAVE_AVX2)
namespace avx2 {
double dot(std::span<const double> x, std::span<const double> y) noexcept { return scalar::dot(x, y); }
void axpy(double a, std::span<const double> x, std::span<double> y) noexcept { scalar::axpy(a, x, y); }
void gemv(MatrixView a, std::span<const double> x, std::span<double> y) noexcept { scalar::gemv(a, x, y); }
void gemv_t(MatrixView a, std::span<const double> x, std::span<double> y) noexcept { scalar::gemv_t(a, x, y); }
double abs_diff_sum(std::span<const double> x, std::span<const double> y) noexcept {
  return scalar::abs_diff_sum(x, y);
}
}  // namespace avx2
#endif

#if !defined(SOFTTMVN_HAVE_NEON)
namespace neon {
double dot(std::span<const double> x, std::span<const double> y) noexcept { return scalar::dot(x, y); }
void axpy(double a, std::span<const double> x, std::span<double> y) noexcept { scalar::axpy(a, x, y); }
void gemv(MatrixView a, std::span<const double> x, std::span<double> y) noexcept { scalar::gemv(a, x, y); }
void gemv_t(MatrixView a, std::span<const double> x, std::span<double> y) noexcept { scalar::gemv_t(a, x, y); }
double abs_diff_sum(std::span<const double> x, std::span<const double> y) noexcept {
  return scalar::abs_diff_sum(x, y);
}
}  // namespace neon
#endif

namespace {

struct KernelTable {
  Isa isa;
  double (*dot)(std::span<const double>, std::span<const double>) noexcept;
  void (*axpy)(double, std::span<const double>, std::span<double>) noexcept;
  void (*gemv)(MatrixView, std::span<const double>, std::span<double>) noexcept;
  void (*gemv_t)(MatrixView, std::span<const double>, std::span<double>) noexcept;
  double (*abs_diff_sum)(std::span<const double>, std::span<const double>) noexcept;
};

constexpr KernelTable kScalarTable{Isa::kScalar, scalar::dot, scalar::axpy, scalar::gemv, scalar::gemv_t,
                                   scalar::abs_diff_sum};
constexpr KernelTable kAvx2Table{Isa::kAvx2, avx2::dot, avx2::axpy, avx2::gemv, avx2::gemv_t, avx2::abs_diff_sum};
constexpr KernelTable kNeonTable{Isa::kNeon, neon::dot, neon::axpy, neon::gemv, neon::gemv_t, neon::abs_diff_sum};

const KernelTable* table_for(Isa isa) noexcept {
  switch (isa) {
    case Isa::kAvx2:
      return &kAvx2Table;
    case Isa::kNeon:
      return &kNeonTable;
    case Isa::kScalar:
      break;
  }
  return &kScalarTable;
}

std::atomic<const KernelTable*>& active_table() noexcept {
  static std::atomic<const KernelTable*> table{table_for(detected_isa())};
  return table;
}

inline const KernelTable& current() noexcept { return *active_table().load(std::memory_order_relaxed); }

}  // namespace

const char* isa_name(Isa isa) noexcept {
  switch (isa) {
    case Isa::kAvx2:
      return "avx2";
    case Isa::kNeon:
      return "neon";
    case Isa::kScalar:
      break;
  }
  return "scalar";
}

bool isa_supported(Isa isa) noexcept {
  switch (isa) {
    case Isa::kScalar:
      return true;
    case Isa::kAvx2:
#if defined(SOFTTMVN_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Isa::kNeon:
#if defined(SOFTTMVN_HAVE_NEON)
      return true;
#else
      return false;
#endif
  }
  return false;
}

Isa detected_isa() noexcept {
  if (isa_supported(Isa::kAvx2)) return Isa::kAvx2;
  if (isa_supported(Isa::kNeon)) return Isa::kNeon;
  return Isa::kScalar;
}

Isa active_isa() noexcept { return current().isa; }

void set_active_isa(Isa isa) {
  if (!isa_supported(isa)) {
    throw std::invalid_argument(std::string("kernel ISA not supported on this machine: ") + isa_name(isa));
  }
  active_table().store(table_for(isa), std::memory_order_relaxed);
}

double dot(std::span<const double> x, std::span<const double> y) noexcept { return current().dot(x, y); }

void axpy(double a, std::span<const double> x, std::span<double> y) noexcept { current().axpy(a, x, y); }

void gemv(MatrixView a, std::span<const double> x, std::span<double> y) noexcept { current().gemv(a, x, y); }

void gemv_t(MatrixView a, std::span<const double> x, std::span<double> y) noexcept { current().gemv_t(a, x, y); }

double abs_diff_sum(std::span<const double> x, std::span<const double> y) noexcept {
  return current().abs_diff_sum(x, y);
}

}  // namespace softtmvn::kernels
