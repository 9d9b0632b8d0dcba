#pragma once

#include "boxlab/model.hpp"

#include <span>
#include <vector>

namespace boxlab {

// One tensor factor: a vector over |parties| parties whose k-th party carries
// the label parties[k].
struct TensorFactor {
  std::span<const Rational> coords;
  std::vector<int> parties;
};

// Product vector over target_order.size() parties; result party j carries label
// target_order[j]. The factor labels must partition target_order. Coordinate
// (a, x) of the result is the product of the factor coordinates at the
// restricted events.
RationalVector tensor_compose(int inputs, int outputs, const std::vector<TensorFactor>& factors,
                              std::span<const int> target_order);

// Sequential product s_1 (x) s_2 (x) ..., parties in argument order.
StateRep tensor_product(const std::vector<StateRep>& states);

}  // namespace boxlab
