#include "softtmvn/constraints.hpp"

#include <cmath>
#include <string>

#include "softtmvn/errors.hpp"
#include "softtmvn/kernels.hpp"

namespace softtmvn {
namespace {

void check_theta(const ConstraintSet& c, const Vector& theta) {
  if (theta.size() != c.dim()) {
    throw DimensionError("theta has length " + std::to_string(theta.size()) + ", constraint set has dimension " +
                         std::to_string(c.dim()));
  }
}

}  // namespace

ConstraintSet::ConstraintSet(Eigen::Index d) : d_(d), a_(0, d) {
  if (d < 1) throw std::invalid_argument("constraint set dimension must be positive");
}

ConstraintSet::ConstraintSet(RowMatrix a, std::vector<int> signs) : d_(a.cols()), a_(std::move(a)), signs_(std::move(signs)) {
  if (d_ < 1) throw std::invalid_argument("constraint set dimension must be positive");
  if (static_cast<Eigen::Index>(signs_.size()) != a_.rows()) {
    throw DimensionError("constraint set has " + std::to_string(a_.rows()) + " rows but " +
                         std::to_string(signs_.size()) + " signs");
  }
  if (a_.rows() > d_) {
    throw std::invalid_argument("constraint set has r = " + std::to_string(a_.rows()) + " rows, more than d = " +
                                std::to_string(d_));
  }
  for (Eigen::Index i = 0; i < a_.rows(); ++i) {
    const int s = signs_[static_cast<std::size_t>(i)];
    if (s != 1 && s != -1) throw std::invalid_argument("constraint " + std::to_string(i) + ": sign must be +1 or -1");
    if (!a_.row(i).allFinite()) throw std::invalid_argument("constraint " + std::to_string(i) + ": non-finite entry");
    if (a_.row(i).norm() == 0.0) throw std::invalid_argument("constraint " + std::to_string(i) + ": zero row");
  }
}

ConstraintSet ConstraintSet::axis_aligned(Eigen::Index d, const std::vector<Eigen::Index>& coords,
                                          const std::vector<int>& signs) {
  if (coords.size() != signs.size()) throw DimensionError("axis_aligned: coords and signs differ in length");
  RowMatrix a = RowMatrix::Zero(static_cast<Eigen::Index>(coords.size()), d);
  for (std::size_t i = 0; i < coords.size(); ++i) {
    if (coords[i] < 0 || coords[i] >= d) throw DimensionError("axis_aligned: coordinate out of range");
    a(static_cast<Eigen::Index>(i), coords[i]) = 1.0;
  }
  return ConstraintSet(std::move(a), signs);
}

ConstraintSet ConstraintSet::positive_orthant(Eigen::Index d) {
  std::vector<Eigen::Index> coords(static_cast<std::size_t>(d));
  for (Eigen::Index k = 0; k < d; ++k) coords[static_cast<std::size_t>(k)] = k;
  return axis_aligned(d, coords, std::vector<int>(static_cast<std::size_t>(d), 1));
}

std::optional<Eigen::Index> ConstraintSet::axis(Eigen::Index i) const {
  std::optional<Eigen::Index> found;
  for (Eigen::Index k = 0; k < d_; ++k) {
    const double v = a_(i, k);
    if (v == 0.0) continue;
    if (found || v < 0.0) return std::nullopt;
    found = k;
  }
  return found;
}

bool ConstraintSet::is_axis_aligned() const {
  for (Eigen::Index i = 0; i < size(); ++i) {
    if (!axis(i)) return false;
  }
  return true;
}

ConstraintSet ConstraintSet::permuted(const std::vector<Eigen::Index>& perm) const {
  if (static_cast<Eigen::Index>(perm.size()) != size()) throw DimensionError("permutation has wrong length");
  RowMatrix a(size(), d_);
  std::vector<int> s(perm.size());
  for (std::size_t i = 0; i < perm.size(); ++i) {
    a.row(static_cast<Eigen::Index>(i)) = a_.row(perm[i]);
    s[i] = signs_[static_cast<std::size_t>(perm[i])];
  }
  if (size() == 0) return ConstraintSet(d_);
  return ConstraintSet(std::move(a), std::move(s));
}

SoftTmvnParams::SoftTmvnParams(Vector mu, CovStructure sigma, ConstraintSet constraints, double eta)
    : mu_(std::move(mu)), sigma_(std::move(sigma)), constraints_(std::move(constraints)), eta_(eta) {
  if (mu_.size() != sigma_.dim() || mu_.size() != constraints_.dim()) {
    throw DimensionError("soft tMVN parameters disagree on dimension: mu " + std::to_string(mu_.size()) +
                         ", sigma " + std::to_string(sigma_.dim()) + ", constraints " +
                         std::to_string(constraints_.dim()));
  }
  if (!(eta_ > 0.0) || !std::isfinite(eta_)) throw std::invalid_argument("eta must be a positive finite number");
}

double sigmoid_eta(double x, double eta) noexcept {
  const double z = eta * x;
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double log_sigmoid(double z) noexcept {
  if (z >= 0.0) return -std::log1p(std::exp(-z));
  return z - std::log1p(std::exp(z));
}

bool hard_indicator(const ConstraintSet& c, const Vector& theta) {
  check_theta(c, theta);
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    const double proj = kernels::dot({c.rows().row(i).data(), static_cast<std::size_t>(c.dim())}, as_span(theta));
    if (c.sign(i) * proj < 0.0) return false;
  }
  return true;
}

double log_soft_indicator(const ConstraintSet& c, const Vector& theta, double eta) {
  check_theta(c, theta);
  double sum = 0.0;
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    const double proj = kernels::dot({c.rows().row(i).data(), static_cast<std::size_t>(c.dim())}, as_span(theta));
    sum += log_sigmoid(eta * c.sign(i) * proj);
  }
  return sum;
}

void to_json(nlohmann::json& j, const ConstraintSet& c) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    std::vector<double> a(c.rows().row(i).begin(), c.rows().row(i).end());
    rows.push_back({{"sign", c.sign(i)}, {"a", a}});
  }
  j = nlohmann::json{{"d", c.dim()}, {"rows", rows}};
}

ConstraintSet constraints_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("constraints: expected an object");
  for (const auto& [key, value] : j.items()) {
    if (key != "d" && key != "rows") throw std::invalid_argument("constraints: unknown key '" + key + "'");
  }
  if (!j.contains("d") || !j.at("d").is_number_integer()) {
    throw std::invalid_argument("constraints.d: expected an integer");
  }
  const auto d = j.at("d").get<Eigen::Index>();
  if (!j.contains("rows")) return ConstraintSet(d);
  const auto& rows = j.at("rows");
  if (!rows.is_array()) throw std::invalid_argument("constraints.rows: expected an array");
  if (rows.empty()) return ConstraintSet(d);
  RowMatrix a(static_cast<Eigen::Index>(rows.size()), d);
  std::vector<int> signs;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::string path = "constraints.rows[" + std::to_string(i) + "]";
    const auto& row = rows[i];
    if (!row.is_object() || !row.contains("sign") || !row.contains("a")) {
      throw std::invalid_argument(path + ": expected {\"sign\", \"a\"}");
    }
    for (const auto& [key, value] : row.items()) {
      if (key != "sign" && key != "a") throw std::invalid_argument(path + ": unknown key '" + key + "'");
    }
    if (!row.at("sign").is_number_integer()) throw std::invalid_argument(path + ".sign: expected +1 or -1");
    signs.push_back(row.at("sign").get<int>());
    const auto& coeffs = row.at("a");
    if (!coeffs.is_array() || static_cast<Eigen::Index>(coeffs.size()) != d) {
      throw std::invalid_argument(path + ".a: expected " + std::to_string(d) + " numbers");
    }
    for (Eigen::Index k = 0; k < d; ++k) {
      const auto& v = coeffs[static_cast<std::size_t>(k)];
      if (!v.is_number()) throw std::invalid_argument(path + ".a: non-numeric entry");
      a(static_cast<Eigen::Index>(i), k) = v.get<double>();
    }
  }
  return ConstraintSet(std::move(a), std::move(signs));
}

}  // namespace softtmvn
