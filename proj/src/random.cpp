#include "softtmvn/random.hpp"

#include <string>

#include "softtmvn/errors.hpp"
#include "softtmvn/linalg.hpp"

namespace softtmvn {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
  std::uint64_t z = seed + (stream + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Eigen::LLT<Matrix> factorize_spd(const Matrix& a, const char* what) {
  if (a.rows() != a.cols()) throw DimensionError(std::string(what) + ": matrix is not square");
  Eigen::LLT<Matrix> llt(a);
  if (llt.info() == Eigen::Success) return llt;
  // Positive definiteness of leading minors is monotone, so bisect for the
  // first failing order.
  Eigen::Index lo = 1;
  Eigen::Index hi = a.rows();
  while (lo < hi) {
    const Eigen::Index mid = lo + (hi - lo) / 2;
    Eigen::LLT<Matrix> sub(a.topLeftCorner(mid, mid));
    if (sub.info() == Eigen::Success) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  throw FactorizationError(std::string(what) + " is not positive definite", static_cast<long>(lo));
}

}  // namespace softtmvn
