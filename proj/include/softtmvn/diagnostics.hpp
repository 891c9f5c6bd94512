#pragma once

#include <span>
#include <vector>

#include "softtmvn/linalg.hpp"

namespace softtmvn {

/// Exact 1-Wasserstein distance between the empirical distributions of two
/// sorted samples. Equal sizes reduce to (1/n) Σ |x₍ᵢ₎ − y₍ᵢ₎|; unequal sizes
/// integrate |F⁻¹ − G⁻¹| over the merged quantile breakpoints. Throws
/// std::invalid_argument on empty or unsorted input.
double w1_empirical_1d(std::span<const double> x_sorted, std::span<const double> y_sorted);

/// Empirical W1 between column j of x and column j of y, for every j.
std::vector<double> per_coordinate_w1(const RowMatrix& x, const RowMatrix& y);

/// D: average of the per-coordinate empirical W1 distances.
double metric_d(const RowMatrix& x, const RowMatrix& y);

/// ξ: squared Euclidean distance between the sample-mean vectors, over d.
double metric_xi(const RowMatrix& x, const RowMatrix& y);

/// Effective sample size n / (1 + 2 Σ ρ̂ₖ) with Geyer's initial monotone
/// positive sequence truncation; clipped to (0, n]. Requires n ≥ 10 and a
/// non-constant series.
double ess(std::span<const double> chain);

/// ESS of every column; NaN where a column is constant or too short.
Vector ess_per_coordinate(const RowMatrix& draws);

}  // namespace softtmvn
