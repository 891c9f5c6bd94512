#pragma once

#include <optional>
#include <vector>

#include <json.hpp>

#include "softtmvn/covariance.hpp"
#include "softtmvn/linalg.hpp"

namespace softtmvn {

/// Homogeneous signed linear constraints sᵢ · (aᵢᵀθ) ≥ 0, i = 1..r, over Rᵈ.
///
/// Rows are kept as given: aᵢ is not normalized, so the effective sharpness of
/// a soft constraint is η‖aᵢ‖. Validation: r ≤ d, each aᵢ has length d, is
/// finite and nonzero, and each sign is exactly +1 or -1.
class ConstraintSet {
 public:
  /// Unconstrained set (r = 0) over Rᵈ.
  explicit ConstraintSet(Eigen::Index d);
  ConstraintSet(RowMatrix a, std::vector<int> signs);

  /// Constraints sᵢ θ_{kᵢ} ≥ 0 on the listed coordinates.
  static ConstraintSet axis_aligned(Eigen::Index d, const std::vector<Eigen::Index>& coords,
                                    const std::vector<int>& signs);

  /// Positive orthant: θⱼ ≥ 0 for every coordinate.
  static ConstraintSet positive_orthant(Eigen::Index d);

  Eigen::Index dim() const noexcept { return d_; }
  Eigen::Index size() const noexcept { return a_.rows(); }
  bool empty() const noexcept { return a_.rows() == 0; }

  /// r×d matrix with rows aᵢᵀ.
  const RowMatrix& rows() const noexcept { return a_; }
  int sign(Eigen::Index i) const { return signs_[static_cast<std::size_t>(i)]; }
  const std::vector<int>& signs() const noexcept { return signs_; }

  /// Coordinate k when row i is a positive multiple of e_k; nullopt otherwise.
  std::optional<Eigen::Index> axis(Eigen::Index i) const;
  bool is_axis_aligned() const;

  /// Same constraints with the rows reordered by `perm` (row i ← perm[i]).
  ConstraintSet permuted(const std::vector<Eigen::Index>& perm) const;

 private:
  Eigen::Index d_;
  RowMatrix a_;
  std::vector<int> signs_;
};

/// Target γ_η ∝ N(θ; μ, Σ) · Πᵢ σ_η(sᵢ aᵢᵀθ).
class SoftTmvnParams {
 public:
  SoftTmvnParams(Vector mu, CovStructure sigma, ConstraintSet constraints, double eta);

  const Vector& mu() const noexcept { return mu_; }
  const CovStructure& sigma() const noexcept { return sigma_; }
  const ConstraintSet& constraints() const noexcept { return constraints_; }
  double eta() const noexcept { return eta_; }
  Eigen::Index dim() const noexcept { return mu_.size(); }

 private:
  Vector mu_;
  CovStructure sigma_;
  ConstraintSet constraints_;
  double eta_;
};

/// σ_η(x) = 1 / (1 + e^{-ηx}); saturates without overflow.
double sigmoid_eta(double x, double eta) noexcept;

/// log σ(z) = -log(1 + e^{-z}), stable for any finite z.
double log_sigmoid(double z) noexcept;

/// True iff sᵢ · (aᵢᵀθ) ≥ 0 for every row. Empty sets accept everything.
bool hard_indicator(const ConstraintSet& c, const Vector& theta);

/// Σᵢ log σ_η(sᵢ · aᵢᵀθ) ≤ 0.
double log_soft_indicator(const ConstraintSet& c, const Vector& theta, double eta);

// JSON document: {"d": int, "rows": [{"sign": ±1, "a": [floats]}]}
void to_json(nlohmann::json& j, const ConstraintSet& c);
/// Parses and validates; throws std::invalid_argument naming the bad field.
ConstraintSet constraints_from_json(const nlohmann::json& j);

}  // namespace softtmvn
