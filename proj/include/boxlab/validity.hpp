#pragma once

#include "boxlab/model.hpp"

#include <span>
#include <vector>

namespace boxlab {

// e is an effect iff both e and (u - e) have nonnegative representations, i.e.
// e + sum_j w_j r_j >= 0 and (u - e) + sum_j w'_j r_j >= 0 are feasible.
bool is_valid_effect(const Scenario& scenario, const EffectRep& e);

// Convexity modulo no-signalling moves: exists lambda >= 0 summing to one and
// free w with e = sum_i lambda_i known_i + sum_j w_j r_j. Moves are exactly the
// kernel of the fingerprint map, so this is decided on fingerprints. Known
// vectors must be effects. False for an empty known set.
bool in_convex_hull(const EffectRep& e, std::span<const EffectRep> known);
bool in_convex_hull(const Scenario& scenario, const SparseVector& e,
                    std::span<const SparseVector> known);

// Reusable set of known effect fingerprints for repeated hull queries.
class HullIndex {
 public:
  explicit HullIndex(const Scenario& scenario);

  void add(const SparseVector& rep);
  void add(Fingerprint fingerprint);
  std::size_t size() const noexcept { return members_.size(); }

  bool contains(const Fingerprint& target) const;

 private:
  struct Member {
    Fingerprint values;
    Bits support;
    Bits ones;
  };
  Scenario scenario_;
  std::vector<Member> members_;
};

}  // namespace boxlab
