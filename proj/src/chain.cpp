#include "softtmvn/chain.hpp"

#include <stdexcept>
#include <string>

#include "softtmvn/errors.hpp"

namespace softtmvn {

void ChainSpec::validate(Eigen::Index d) const {
  if (thin < 1) throw std::invalid_argument("chain spec: thin must be at least 1");
  if (n_samples < 1) throw std::invalid_argument("chain spec: n_samples must be at least 1");
  if (init == InitMode::kExplicit && init_theta.size() != d) {
    throw DimensionError("chain spec: init has length " + std::to_string(init_theta.size()) + ", target dimension " +
                         std::to_string(d));
  }
}

}  // namespace softtmvn
