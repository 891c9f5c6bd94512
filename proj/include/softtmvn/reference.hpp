#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "softtmvn/chain.hpp"
#include "softtmvn/constraints.hpp"
#include "softtmvn/random.hpp"

namespace softtmvn {

/// Exact draw from N(mean, sd²) restricted to [lo, hi]; either bound may be
/// infinite. Inverse CDF (evaluated on the tail side of the interval) unless
/// the interval lies entirely beyond 6 standard deviations, where exponential
/// proposals are used instead. Throws std::invalid_argument unless lo < hi
/// and sd > 0.
double sample_trunc_norm_1d(double mean, double sd, double lo, double hi, Rng& rng);

/// Coordinatewise Gibbs sampler for the hard tMVN N(μ, Σ)·1_C with
/// axis-aligned C. Each sweep visits coordinates 0..d−1 and draws from the
/// exact univariate truncated-normal full conditional.
class TmvnGibbs {
 public:
  /// Throws std::invalid_argument when C has a row that is not a positive
  /// multiple of a unit vector, or when opposite signs pin a coordinate.
  TmvnGibbs(Vector mu, const Matrix& sigma, const ConstraintSet& c);
  static TmvnGibbs from_precision(Vector mu, Matrix precision, const ConstraintSet& c);

  Eigen::Index dim() const noexcept { return mu_.size(); }

  /// A point of C near μ (μ with violating coordinates sign-flipped).
  Vector feasible_start() const;

  void sweep(Vector& theta, Rng& rng) const;

 private:
  struct FromPrecision {};
  TmvnGibbs(FromPrecision, Vector mu, Matrix precision, const ConstraintSet& c);

  Vector mu_;
  RowMatrix precision_;
  std::vector<double> lo_;
  std::vector<double> hi_;
};

/// burn_in + thin·n_samples sweeps of TmvnGibbs. The default start is
/// TmvnGibbs::feasible_start(); an explicit start must lie in C.
SampleBatch gibbs_tmvn(const Vector& mu, const Matrix& sigma, const ConstraintSet& c, const ChainSpec& spec);

struct RejectionDraw {
  Vector theta;
  std::uint64_t tries;
};

/// Naive accept/reject: propose from N(μ, Σ) until the proposal lies in C.
/// Throws LowAcceptanceError ("max_tries exhausted") after max_tries
/// proposals.
RejectionDraw rejection_tmvn(const Vector& mu, const CovStructure& sigma, const ConstraintSet& c, Rng& rng,
                             std::uint64_t max_tries);

/// n independent rejection draws seeded by `seed`. Draws are iid, so
/// ChainSpec burn-in and thinning do not apply; `spec.n_samples` sets n.
SampleBatch rejection_tmvn_batch(const Vector& mu, const CovStructure& sigma, const ConstraintSet& c,
                                 const ChainSpec& spec, std::uint64_t max_tries);

/// Density for the quadrature oracle: N(μ, Σ) times either the soft
/// indicator with sharpness `eta` or, when eta is empty, the hard indicator.
struct QuadratureTarget {
  Vector mu;
  Matrix sigma;
  ConstraintSet constraints;
  std::optional<double> eta;
};

/// Tensor-product midpoint grid. Each axis k covers [lo[k], hi[k]] with
/// nodes[k] cells.
struct QuadratureGrid {
  std::vector<double> lo;
  std::vector<double> hi;
  std::vector<int> nodes;

  /// ±8 marginal sds around μ. Hard axis-aligned constraints clip the axis at
  /// 0 so the boundary falls on a cell edge.
  static QuadratureGrid covering(const QuadratureTarget& target, int nodes_per_axis = 2048);
};

struct QuadratureMoments {
  Vector mean;
  Matrix cov;
  /// Largest absolute change in any reported moment between the Richardson
  /// estimates at (N/2, N) and (N, 2N) cells.
  double error_estimate;
};

/// Normalized mean and covariance of the target for d ∈ {1, 2}. Midpoint sums
/// at N/2, N and 2N cells per axis are combined by Richardson extrapolation.
QuadratureMoments quadrature_moments(const QuadratureTarget& target, const QuadratureGrid& grid);
QuadratureMoments quadrature_moments(const QuadratureTarget& target);

}  // namespace softtmvn
