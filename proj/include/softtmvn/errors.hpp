#pragma once

#include <stdexcept>
#include <string>

namespace softtmvn {

/// Inputs whose sizes disagree (vector length vs. dimension, matrix shapes).
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A matrix that must be symmetric positive definite failed to factorize.
/// `minor()` is the 1-based order of the first leading principal minor that
/// is not positive; 0 when unknown.
class FactorizationError : public std::runtime_error {
 public:
  FactorizationError(const std::string& what, long minor)
      : std::runtime_error(what + " (leading minor " + std::to_string(minor) + " not positive)"), minor_(minor) {}
  long minor() const noexcept { return minor_; }

 private:
  long minor_;
};

/// Rejection sampling ran out of proposals.
class LowAcceptanceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Internal sampler failure, e.g. an accept/reject loop hitting its safety cap.
class SamplerFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace softtmvn
