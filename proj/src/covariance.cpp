#include "softtmvn/covariance.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "softtmvn/errors.hpp"
#include "softtmvn/scenarios.hpp"

namespace softtmvn {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

Vector standard_normal(Eigen::Index n, Rng& rng) {
  Vector z(n);
  for (Eigen::Index i = 0; i < n; ++i) z(i) = rng.normal();
  return z;
}

void check_len(const Vector& x, Eigen::Index d, const char* what) {
  if (x.size() != d) {
    throw DimensionError(std::string(what) + ": vector has length " + std::to_string(x.size()) +
                         ", covariance has dimension " + std::to_string(d));
  }
}

}  // namespace

CovStructure CovStructure::dense(Matrix sigma) {
  if (sigma.rows() != sigma.cols()) throw DimensionError("dense covariance must be square");
  if (!sigma.isApprox(sigma.transpose(), 1e-12)) throw std::invalid_argument("dense covariance must be symmetric");
  auto chol = factorize_spd(sigma, "dense covariance");
  return CovStructure(std::make_shared<const Form>(DenseForm{std::move(sigma), std::move(chol)}));
}

CovStructure CovStructure::diagonal(Vector variances) {
  if (variances.size() < 1) throw DimensionError("diagonal covariance must be non-empty");
  for (Eigen::Index i = 0; i < variances.size(); ++i) {
    if (!(variances(i) > 0.0) || !std::isfinite(variances(i))) {
      throw FactorizationError("diagonal covariance", static_cast<long>(i + 1));
    }
  }
  return CovStructure(std::make_shared<const Form>(DiagonalForm{std::move(variances)}));
}

CovStructure CovStructure::probit_block(RowMatrix h, Vector l) {
  if (h.cols() != l.size()) throw DimensionError("probit block: H must have q = len(L) columns");
  if (h.rows() < 1 || l.size() < 1) throw DimensionError("probit block: N and q must be positive");
  for (Eigen::Index k = 0; k < l.size(); ++k) {
    if (!(l(k) > 0.0) || !std::isfinite(l(k))) {
      throw FactorizationError("probit block L", static_cast<long>(h.rows() + k + 1));
    }
  }
  if (!h.allFinite()) throw std::invalid_argument("probit block: H has non-finite entries");
  return CovStructure(std::make_shared<const Form>(ProbitBlockForm{std::move(h), std::move(l)}));
}

CovStructure CovStructure::kernel_gram(Matrix points, double nu, double scale) {
  if (points.rows() < 1) throw DimensionError("kernel gram: no points");
  if (!(nu > 0.0)) throw std::invalid_argument("kernel gram: smoothness nu must be positive");
  if (!(scale > 0.0)) throw std::invalid_argument("kernel gram: scale must be positive");
  const Eigen::Index n = points.rows();
  Matrix gram(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    gram(i, i) = matern_kernel(0.0, nu, scale);
    for (Eigen::Index j = 0; j < i; ++j) {
      const double k = matern_kernel((points.row(i) - points.row(j)).norm(), nu, scale);
      gram(i, j) = k;
      gram(j, i) = k;
    }
  }
  gram.diagonal().array() += 1e-8 * gram.diagonal().mean();
  auto chol = factorize_spd(gram, "kernel gram matrix");
  return CovStructure(
      std::make_shared<const Form>(KernelGramForm{std::move(points), nu, scale, std::move(gram), std::move(chol)}));
}

CovStructure::Kind CovStructure::kind() const noexcept {
  switch (form_->index()) {
    case 0:
      return Kind::kDense;
    case 1:
      return Kind::kDiagonal;
    case 2:
      return Kind::kProbitBlock;
    default:
      return Kind::kKernelGram;
  }
}

Eigen::Index CovStructure::dim() const noexcept {
  return std::visit(Overloaded{
                        [](const DenseForm& f) { return f.sigma.rows(); },
                        [](const DiagonalForm& f) { return f.variances.size(); },
                        [](const ProbitBlockForm& f) { return f.h.rows() + f.h.cols(); },
                        [](const KernelGramForm& f) { return f.gram.rows(); },
                    },
                    *form_);
}

Vector CovStructure::sample(Rng& rng) const {
  return std::visit(Overloaded{
                        [&](const DenseForm& f) -> Vector {
                          return f.chol.matrixL() * standard_normal(f.sigma.rows(), rng);
                        },
                        [&](const DiagonalForm& f) -> Vector {
                          Vector u(f.variances.size());
                          for (Eigen::Index i = 0; i < u.size(); ++i) u(i) = std::sqrt(f.variances(i)) * rng.normal();
                          return u;
                        },
                        [&](const ProbitBlockForm& f) -> Vector {
                          const Eigen::Index n = f.h.rows();
                          const Eigen::Index q = f.h.cols();
                          Vector u(n + q);
                          for (Eigen::Index i = 0; i < n; ++i) u(i) = rng.normal();
                          for (Eigen::Index k = 0; k < q; ++k) u(n + k) = std::sqrt(f.l(k)) * rng.normal();
                          // u1 = H u2 + z
                          Vector hu(n);
                          kernels::gemv(view(f.h), {u.data() + n, static_cast<std::size_t>(q)}, as_span(hu));
                          u.head(n) += hu;
                          return u;
                        },
                        [&](const KernelGramForm& f) -> Vector {
                          return f.chol.matrixL() * standard_normal(f.gram.rows(), rng);
                        },
                    },
                    *form_);
}

Vector CovStructure::apply(const Vector& x) const {
  check_len(x, dim(), "covariance apply");
  return std::visit(Overloaded{
                        [&](const DenseForm& f) -> Vector { return f.sigma * x; },
                        [&](const DiagonalForm& f) -> Vector { return f.variances.cwiseProduct(x); },
                        [&](const ProbitBlockForm& f) -> Vector {
                          const Eigen::Index n = f.h.rows();
                          const Eigen::Index q = f.h.cols();
                          // t = Hᵀx₁ + x₂;  Σx = [x₁ + H L t; L t]
                          Vector t = x.tail(q);
                          kernels::gemv_t(view(f.h), {x.data(), static_cast<std::size_t>(n)}, as_span(t));
                          t.array() *= f.l.array();
                          Vector out(n + q);
                          kernels::gemv(view(f.h), as_span(t), {out.data(), static_cast<std::size_t>(n)});
                          out.head(n) += x.head(n);
                          out.tail(q) = t;
                          return out;
                        },
                        [&](const KernelGramForm& f) -> Vector { return f.gram * x; },
                    },
                    *form_);
}

RowMatrix CovStructure::apply_rows(const RowMatrix& rows) const {
  if (rows.cols() != dim()) throw DimensionError("covariance apply_rows: column count differs from dimension");
  RowMatrix out(rows.rows(), rows.cols());
  switch (kind()) {
    case Kind::kDense:
      out.noalias() = rows * std::get<DenseForm>(*form_).sigma;
      break;
    case Kind::kKernelGram:
      out.noalias() = rows * std::get<KernelGramForm>(*form_).gram;
      break;
    case Kind::kDiagonal:
      out = rows.array().rowwise() * std::get<DiagonalForm>(*form_).variances.transpose().array();
      break;
    case Kind::kProbitBlock:
      for (Eigen::Index i = 0; i < rows.rows(); ++i) out.row(i) = apply(rows.row(i).transpose()).transpose();
      break;
  }
  return out;
}

Vector CovStructure::solve(const Vector& x) const {
  check_len(x, dim(), "covariance solve");
  return std::visit(Overloaded{
                        [&](const DenseForm& f) -> Vector { return f.chol.solve(x); },
                        [&](const DiagonalForm& f) -> Vector { return x.cwiseQuotient(f.variances); },
                        [&](const ProbitBlockForm& f) -> Vector {
                          const Eigen::Index n = f.h.rows();
                          const Eigen::Index q = f.h.cols();
                          // e = x₁ − H x₂;  Σ⁻¹x = [e; L⁻¹x₂ − Hᵀe]
                          Vector out(n + q);
                          kernels::gemv(view(f.h), {x.data() + n, static_cast<std::size_t>(q)},
                                        {out.data(), static_cast<std::size_t>(n)});
                          out.head(n) = x.head(n) - out.head(n);
                          Vector ht = Vector::Zero(q);
                          kernels::gemv_t(view(f.h), {out.data(), static_cast<std::size_t>(n)}, as_span(ht));
                          out.tail(q) = x.tail(q).cwiseQuotient(f.l) - ht;
                          return out;
                        },
                        [&](const KernelGramForm& f) -> Vector { return f.chol.solve(x); },
                    },
                    *form_);
}

Vector CovStructure::variances() const {
  return std::visit(Overloaded{
                        [](const DenseForm& f) -> Vector { return f.sigma.diagonal(); },
                        [](const DiagonalForm& f) -> Vector { return f.variances; },
                        [](const ProbitBlockForm& f) -> Vector {
                          const Eigen::Index n = f.h.rows();
                          Vector v(n + f.l.size());
                          v.head(n) = (f.h.array().square().rowwise() * f.l.transpose().array()).rowwise().sum() + 1.0;
                          v.tail(f.l.size()) = f.l;
                          return v;
                        },
                        [](const KernelGramForm& f) -> Vector { return f.gram.diagonal(); },
                    },
                    *form_);
}

Matrix CovStructure::to_dense() const {
  return std::visit(Overloaded{
                        [](const DenseForm& f) -> Matrix { return f.sigma; },
                        [](const DiagonalForm& f) -> Matrix { return f.variances.asDiagonal(); },
                        [](const ProbitBlockForm& f) -> Matrix {
                          const Eigen::Index n = f.h.rows();
                          const Eigen::Index q = f.h.cols();
                          const Matrix hl = f.h * f.l.asDiagonal();
                          Matrix s(n + q, n + q);
                          s.topLeftCorner(n, n) = Matrix::Identity(n, n) + hl * f.h.transpose();
                          s.topRightCorner(n, q) = hl;
                          s.bottomLeftCorner(q, n) = hl.transpose();
                          s.bottomRightCorner(q, q) = f.l.asDiagonal();
                          return s;
                        },
                        [](const KernelGramForm& f) -> Matrix { return f.gram; },
                    },
                    *form_);
}

Matrix CovStructure::precision_dense() const {
  const Eigen::Index d = dim();
  Matrix out(d, d);
  for (Eigen::Index j = 0; j < d; ++j) out.col(j) = solve(Vector::Unit(d, j));
  return 0.5 * (out + out.transpose());
}

const RowMatrix& CovStructure::probit_h() const {
  if (kind() != Kind::kProbitBlock) throw std::logic_error("covariance is not a probit block");
  return std::get<ProbitBlockForm>(*form_).h;
}

const Vector& CovStructure::probit_l() const {
  if (kind() != Kind::kProbitBlock) throw std::logic_error("covariance is not a probit block");
  return std::get<ProbitBlockForm>(*form_).l;
}

const Matrix& CovStructure::gram_points() const {
  if (kind() != Kind::kKernelGram) throw std::logic_error("covariance is not a kernel gram");
  return std::get<KernelGramForm>(*form_).points;
}

double CovStructure::gram_nu() const {
  if (kind() != Kind::kKernelGram) throw std::logic_error("covariance is not a kernel gram");
  return std::get<KernelGramForm>(*form_).nu;
}

double CovStructure::gram_scale() const {
  if (kind() != Kind::kKernelGram) throw std::logic_error("covariance is not a kernel gram");
  return std::get<KernelGramForm>(*form_).scale;
}

}  // namespace softtmvn
