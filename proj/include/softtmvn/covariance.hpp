#pragma once

#include <memory>
#include <variant>

#include "softtmvn/linalg.hpp"
#include "softtmvn/random.hpp"

namespace softtmvn {

/// Covariance Σ of a d-dimensional Gaussian in one of four storage forms.
///
/// - Dense: arbitrary SPD matrix, Cholesky factor cached at construction.
/// - Diagonal: positive variances.
/// - ProbitBlock: Σ = [[I_N + H L Hᵀ, H L], [L Hᵀ, L]] with H an N×q matrix
///   and L a positive q-vector (diagonal). Never densified on the sampling
///   path; applying Σ or Σ⁻¹ costs O(N q).
/// - KernelGram: Matérn Gram matrix over a set of points, with jitter
///   1e-8 · mean(diag) added before factorization.
///
/// Instances are immutable and cheap to copy (shared state).
class CovStructure {
 public:
  enum class Kind { kDense, kDiagonal, kProbitBlock, kKernelGram };

  static CovStructure dense(Matrix sigma);
  static CovStructure diagonal(Vector variances);
  static CovStructure probit_block(RowMatrix h, Vector l);
  /// `points` holds one site per row; distances are Euclidean.
  static CovStructure kernel_gram(Matrix points, double nu, double scale);

  Kind kind() const noexcept;
  Eigen::Index dim() const noexcept;

  /// u ~ N(0, Σ).
  Vector sample(Rng& rng) const;

  /// Σ x.
  Vector apply(const Vector& x) const;

  /// Row i of the result is (Σ bᵢ)ᵀ for row bᵢ of `rows`.
  RowMatrix apply_rows(const RowMatrix& rows) const;

  /// Σ⁻¹ x.
  Vector solve(const Vector& x) const;

  /// Diagonal of Σ (marginal variances).
  Vector variances() const;

  /// Explicit Σ. Allocates d×d; intended for small instances and oracles.
  Matrix to_dense() const;

  /// Σ⁻¹ as an explicit matrix (small instances).
  Matrix precision_dense() const;

  // Structure accessors; each throws std::logic_error on the wrong kind.
  const RowMatrix& probit_h() const;
  const Vector& probit_l() const;
  const Matrix& gram_points() const;
  double gram_nu() const;
  double gram_scale() const;

 private:
  struct DenseForm {
    Matrix sigma;
    Eigen::LLT<Matrix> chol;
  };
  struct DiagonalForm {
    Vector variances;
  };
  struct ProbitBlockForm {
    RowMatrix h;
    Vector l;
  };
  struct KernelGramForm {
    Matrix points;
    double nu;
    double scale;
    Matrix gram;
    Eigen::LLT<Matrix> chol;
  };
  using Form = std::variant<DenseForm, DiagonalForm, ProbitBlockForm, KernelGramForm>;

  explicit CovStructure(std::shared_ptr<const Form> form) : form_(std::move(form)) {}

  std::shared_ptr<const Form> form_;
};

}  // namespace softtmvn
