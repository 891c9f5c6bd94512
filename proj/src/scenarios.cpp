#include "softtmvn/scenarios.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "softtmvn/random.hpp"

namespace softtmvn {

double matern_kernel(double r, double nu, double scale) {
  if (!(nu > 0.0)) throw std::invalid_argument("matern_kernel: nu must be positive");
  if (!(scale > 0.0)) throw std::invalid_argument("matern_kernel: scale must be positive");
  if (r < 0.0) throw std::invalid_argument("matern_kernel: negative distance");
  if (r == 0.0) return 1.0;
  const double x = r / scale;
  if (nu == 0.5) return std::exp(-x);
  if (nu == 1.5) {
    const double z = std::sqrt(3.0) * x;
    return (1.0 + z) * std::exp(-z);
  }
  if (nu == 2.5) {
    const double z = std::sqrt(5.0) * x;
    return (1.0 + z + z * z / 3.0) * std::exp(-z);
  }
  const double z = std::sqrt(2.0 * nu) * x;
  // K_ν underflows long after the product is negligible.
  if (z > 700.0) return 0.0;
  const double log_coef = (1.0 - nu) * std::log(2.0) - std::lgamma(nu) + nu * std::log(z);
  return std::exp(log_coef) * std::cyl_bessel_k(nu, z);
}

ProbitGpInstance gen_probit_gp(Eigen::Index n, double nu, double scale, std::uint64_t seed) {
  if (n < 21) throw std::invalid_argument("gen_probit_gp: n must be at least 21, got " + std::to_string(n));
  Rng rng(seed);
  const Eigen::Index l1 = rng.uniform_int(10, n / 2);
  const Eigen::Index l2 = rng.uniform_int(n / 2 + 1, n - 10);

  Matrix sites(n, 1);
  for (Eigen::Index i = 0; i < n; ++i) sites(i, 0) = static_cast<double>(i + 1);

  std::vector<Eigen::Index> coords(static_cast<std::size_t>(n));
  std::vector<int> signs(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index site = i + 1;
    coords[static_cast<std::size_t>(i)] = i;
    signs[static_cast<std::size_t>(i)] = (site > l1 && site <= l2) ? -1 : 1;
  }
  return {CovStructure::kernel_gram(std::move(sites), nu, scale), ConstraintSet::axis_aligned(n, coords, signs), l1,
          l2};
}

ProbitGaussInstance gen_probit_gauss(Eigen::Index big_n, Eigen::Index p, std::uint64_t seed, double lambda_lo,
                                     double lambda_hi) {
  if (big_n < 1 || p < 1) throw std::invalid_argument("gen_probit_gauss: N and P must be positive");
  if (!(lambda_lo > 0.0) || !(lambda_hi >= lambda_lo)) {
    throw std::invalid_argument("gen_probit_gauss: lambda range must satisfy 0 < lo <= hi");
  }
  Rng rng(seed);
  RowMatrix x(big_n, p);
  for (Eigen::Index i = 0; i < big_n; ++i) {
    for (Eigen::Index j = 0; j < p; ++j) x(i, j) = rng.normal();
  }
  Vector lambda(p);
  for (Eigen::Index j = 0; j < p; ++j) lambda(j) = lambda_lo + (lambda_hi - lambda_lo) * rng.uniform();
  Vector beta(p);
  for (Eigen::Index j = 0; j < p; ++j) beta(j) = std::sqrt(lambda(j)) * rng.normal();

  const Vector xb = x * beta;
  std::vector<int> y(static_cast<std::size_t>(big_n));
  std::vector<Eigen::Index> coords(static_cast<std::size_t>(big_n));
  std::vector<int> signs(static_cast<std::size_t>(big_n));
  for (Eigen::Index i = 0; i < big_n; ++i) {
    const double z = xb(i) + rng.normal();
    const auto k = static_cast<std::size_t>(i);
    y[k] = z >= 0.0 ? 1 : 0;
    coords[k] = i;
    signs[k] = y[k] == 1 ? 1 : -1;
  }
  const Eigen::Index d = big_n + p;
  return {CovStructure::probit_block(x, lambda), ConstraintSet::axis_aligned(d, coords, signs), std::move(x),
          std::move(lambda), std::move(beta), std::move(y)};
}

nlohmann::ordered_json dump_instance(const ProbitGpInstance& inst) {
  nlohmann::json constraints = inst.constraints;
  nlohmann::ordered_json j;
  j["family"] = "probit_gp";
  j["n"] = inst.cov.dim();
  j["nu"] = inst.cov.gram_nu();
  j["scale"] = inst.cov.gram_scale();
  j["l1"] = inst.l1;
  j["l2"] = inst.l2;
  j["constraints"] = constraints;
  return j;
}

nlohmann::ordered_json dump_instance(const ProbitGaussInstance& inst) {
  nlohmann::json constraints = inst.constraints;
  std::vector<std::vector<double>> x(static_cast<std::size_t>(inst.x.rows()));
  for (Eigen::Index i = 0; i < inst.x.rows(); ++i) x[static_cast<std::size_t>(i)].assign(inst.x.row(i).begin(), inst.x.row(i).end());
  nlohmann::ordered_json j;
  j["family"] = "probit_gauss";
  j["N"] = inst.x.rows();
  j["P"] = inst.x.cols();
  j["X"] = x;
  j["lambda"] = std::vector<double>(inst.lambda.begin(), inst.lambda.end());
  j["beta"] = std::vector<double>(inst.beta.begin(), inst.beta.end());
  j["y"] = inst.y;
  j["constraints"] = constraints;
  return j;
}

}  // namespace softtmvn
