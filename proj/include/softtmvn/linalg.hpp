#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <span>

#include "softtmvn/kernels.hpp"

namespace softtmvn {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

inline std::span<const double> as_span(const Vector& v) noexcept {
  return {v.data(), static_cast<std::size_t>(v.size())};
}
inline std::span<double> as_span(Vector& v) noexcept { return {v.data(), static_cast<std::size_t>(v.size())}; }

inline kernels::MatrixView view(const RowMatrix& m) noexcept {
  return {m.data(), static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols())};
}

/// Cholesky factor of an SPD matrix. Throws FactorizationError naming the
/// first non-positive leading minor.
Eigen::LLT<Matrix> factorize_spd(const Matrix& a, const char* what);

}  // namespace softtmvn
