#pragma once

#include <cstdint>
#include <vector>

#include <json.hpp>

#include "softtmvn/constraints.hpp"
#include "softtmvn/covariance.hpp"
#include "softtmvn/linalg.hpp"

namespace softtmvn {

/// Matérn correlation at distance r ≥ 0 with smoothness nu > 0 and length
/// scale `scale`. ν ∈ {1/2, 3/2, 5/2} use closed forms; other ν go through
/// the modified Bessel function K_ν.
double matern_kernel(double r, double nu, double scale);

enum class ScenarioFamily { kProbitGp, kProbitGauss };

struct ScenarioSpec {
  ScenarioFamily family = ScenarioFamily::kProbitGp;
  Eigen::Index n = 100;   // probit-GP: number of sites
  Eigen::Index big_n = 100;  // probit-Gauss: observations N
  Eigen::Index p = 400;   // probit-Gauss: covariates P
  double nu = 0.6;
  double scale = 1.0;
  double lambda_lo = 1.0 / 15.0;
  double lambda_hi = 1.0 / 5.0;
  std::uint64_t seed = 0;
};

/// Probit-GP instance: Matérn Gram on sites 1..n with a three-run sign
/// pattern (+ on [1, ℓ₁], − on (ℓ₁, ℓ₂], + on (ℓ₂, n]). Indices ℓ are 1-based.
struct ProbitGpInstance {
  CovStructure cov;
  ConstraintSet constraints;
  Eigen::Index l1;
  Eigen::Index l2;
};

ProbitGpInstance gen_probit_gp(Eigen::Index n, double nu, double scale, std::uint64_t seed);

/// Probit-Gaussian instance with θ = (Z, β) ∈ R^{N+P}:
/// Σ = [[I + XΛXᵀ, XΛ], [ΛXᵀ, Λ]], first N coordinates sign-constrained by Y.
struct ProbitGaussInstance {
  CovStructure cov;
  ConstraintSet constraints;
  RowMatrix x;
  Vector lambda;
  Vector beta;
  std::vector<int> y;
};

ProbitGaussInstance gen_probit_gauss(Eigen::Index big_n, Eigen::Index p, std::uint64_t seed,
                                     double lambda_lo = 1.0 / 15.0, double lambda_hi = 1.0 / 5.0);

/// Instance as a JSON document (covariance parameters plus constraint set).
nlohmann::ordered_json dump_instance(const ProbitGpInstance& inst);
nlohmann::ordered_json dump_instance(const ProbitGaussInstance& inst);

}  // namespace softtmvn
