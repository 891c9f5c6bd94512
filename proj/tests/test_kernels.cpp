#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "softtmvn/kernels.hpp"
#include "softtmvn/random.hpp"

namespace k = softtmvn::kernels;

namespace {

std::vector<double> random_values(std::size_t n, softtmvn::Rng& rng) {
  std::vector<double> v(n);
  for (auto& x : v) x = rng.normal();
  return v;
}

std::vector<k::Isa> supported_isas() {
  std::vector<k::Isa> out;
  for (k::Isa isa : {k::Isa::kScalar, k::Isa::kAvx2, k::Isa::kNeon}) {
    if (k::isa_supported(isa)) out.push_back(isa);
  }
  return out;
}

// Restores the process-wide ISA after a test forces one.
class IsaGuard {
 public:
  IsaGuard() : saved_(k::active_isa()) {}
  ~IsaGuard() { k::set_active_isa(saved_); }

 private:
  k::Isa saved_;
};

double tol(double scale, std::size_t n) { return 1e-13 * scale * static_cast<double>(n + 1); }

}  // namespace

TEST(Kernels, ScalarAlwaysSupportedAndDetectedIsSupported) {
  EXPECT_TRUE(k::isa_supported(k::Isa::kScalar));
  EXPECT_TRUE(k::isa_supported(k::detected_isa()));
}

TEST(Kernels, UnsupportedIsaIsRejected) {
  IsaGuard guard;
  for (k::Isa isa : {k::Isa::kAvx2, k::Isa::kNeon}) {
    if (!k::isa_supported(isa)) {
      EXPECT_THROW(k::set_active_isa(isa), std::invalid_argument);
    }
  }
}

// Every compiled-in variant must agree with the scalar reference, including
// lengths that hit the remainder loop and empty input.
TEST(Kernels, VariantsMatchScalarReference) {
  softtmvn::Rng rng(11);
  IsaGuard guard;
  for (std::size_t n : {0UL, 1UL, 2UL, 3UL, 4UL, 5UL, 7UL, 8UL, 9UL, 15UL, 16UL, 17UL, 31UL, 64UL, 101UL, 1000UL}) {
    const auto x = random_values(n, rng);
    const auto y = random_values(n, rng);
    const double a = rng.normal();

    const double dot_ref = k::scalar::dot(x, y);
    auto axpy_ref = y;
    k::scalar::axpy(a, x, axpy_ref);
    const double abs_ref = k::scalar::abs_diff_sum(x, y);

    for (k::Isa isa : supported_isas()) {
      SCOPED_TRACE(k::isa_name(isa));
      SCOPED_TRACE(n);
      k::set_active_isa(isa);
      EXPECT_NEAR(k::dot(x, y), dot_ref, tol(std::sqrt(static_cast<double>(n)), n));
      auto out = y;
      k::axpy(a, x, out);
      for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(out[i], axpy_ref[i], 1e-14 * (1.0 + std::abs(axpy_ref[i])));
      EXPECT_NEAR(k::abs_diff_sum(x, y), abs_ref, tol(abs_ref, n));
    }
  }
}

TEST(Kernels, MatrixVariantsMatchScalarReference) {
  softtmvn::Rng rng(12);
  IsaGuard guard;
  for (auto [rows, cols] : std::vector<std::pair<std::size_t, std::size_t>>{{1, 1}, {3, 5}, {4, 4}, {5, 9}, {7, 33}, {17, 3}, {64, 100}}) {
    const auto a = random_values(rows * cols, rng);
    const k::MatrixView m{a.data(), rows, cols};
    const auto x = random_values(cols, rng);
    auto xt = random_values(rows, rng);
    xt[0] = 0.0;  // the scalar path skips zero rows; the result must not change
    const auto y0 = random_values(cols, rng);

    std::vector<double> gemv_ref(rows);
    k::scalar::gemv(m, x, gemv_ref);
    auto gemvt_ref = y0;
    k::scalar::gemv_t(m, xt, gemvt_ref);

    for (k::Isa isa : supported_isas()) {
      SCOPED_TRACE(k::isa_name(isa));
      k::set_active_isa(isa);
      std::vector<double> out(rows);
      k::gemv(m, x, out);
      for (std::size_t i = 0; i < rows; ++i) EXPECT_NEAR(out[i], gemv_ref[i], tol(std::sqrt(double(cols)), cols));
      auto outt = y0;
      k::gemv_t(m, xt, outt);
      for (std::size_t j = 0; j < cols; ++j) EXPECT_NEAR(outt[j], gemvt_ref[j], tol(std::sqrt(double(rows)), rows));
    }
  }
}

TEST(Kernels, DotOfKnownVectors) {
  const std::vector<double> x{1, 2, 3, 4, 5};
  const std::vector<double> y{5, 4, 3, 2, 1};
  IsaGuard guard;
  for (k::Isa isa : supported_isas()) {
    k::set_active_isa(isa);
    EXPECT_DOUBLE_EQ(k::dot(x, y), 35.0);
    EXPECT_DOUBLE_EQ(k::abs_diff_sum(x, y), 12.0);
  }
}
