#pragma once

#include "boxlab/bits.hpp"
#include "boxlab/rational.hpp"
#include "boxlab/scenario.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace boxlab {

// Coordinate representation of an effect. Many representations denote the same
// effect; they differ by no-signalling moves.
struct EffectRep {
  Scenario scenario;
  RationalVector coords;

  EffectRep() = default;
  EffectRep(Scenario s, RationalVector c);

  bool operator==(const EffectRep&) const = default;
};

// A conditional distribution P(a|x) laid out in flat-index order.
struct StateRep {
  Scenario scenario;
  RationalVector coords;

  StateRep() = default;
  StateRep(Scenario s, RationalVector c);

  bool operator==(const StateRep&) const = default;
};

// Sparse coordinates. Used by catalogs and identity sets, which hold tens of
// thousands of short vectors.
struct SparseVector {
  std::vector<std::uint32_t> index;  // strictly increasing
  RationalVector value;              // nonzero

  static SparseVector from_dense(const RationalVector& dense);
  static SparseVector from_bits(const Bits& bits);
  RationalVector to_dense(std::size_t dimension) const;
  bool is_01_valued() const;
  Bits support(std::size_t dimension) const;

  bool operator==(const SparseVector&) const = default;
};

// Values of an effect on every local deterministic state, in det-state order.
struct Fingerprint {
  RationalVector values;

  bool is_01_valued() const;
  bool all_ones() const;
  Bits to_bits() const;  // requires is_01_valued()
  static Fingerprint from_bits(const Bits& bits);

  friend bool operator==(const Fingerprint&, const Fingerprint&) = default;
  friend bool operator<(const Fingerprint& a, const Fingerprint& b) { return a.values < b.values; }
};

struct FingerprintHash {
  std::size_t operator()(const Fingerprint& f) const noexcept { return hash_rationals(f.values); }
};

// r with <r, s> = 0 on every no-signalling state: +1 on the n_O entries where the
// moving party uses input 0, -1 where it uses the alternative input, with all
// other parties' outcomes and settings held fixed.
struct NsMove {
  std::vector<std::uint32_t> plus;
  std::vector<std::uint32_t> minus;

  std::vector<int> dense(std::size_t dimension) const;
};

EffectRep zero_effect(const Scenario& scenario);
// The {0,1} identity in which every party uses input 0.
EffectRep identity_effect(const Scenario& scenario);
EffectRep standard_basis_effect(const Scenario& scenario, std::size_t index);
// Builds a representation from (weight, "abc|xyz") terms.
EffectRep effect_from_terms(const Scenario& scenario,
                            const std::vector<std::pair<Rational, std::string>>& terms);

bool is_01_valued(const EffectRep& e);
bool is_nonnegative(const RationalVector& v);

Rational inner(const EffectRep& e, const StateRep& s);
Rational inner(const SparseVector& e, const StateRep& s);

std::vector<StateRep> local_deterministic_states(const Scenario& scenario);
// Coordinates at which the given local deterministic state equals one.
std::vector<std::uint32_t> det_state_support(const Scenario& scenario, std::size_t det_index);

std::vector<NsMove> ns_generators(const Scenario& scenario);

Fingerprint fingerprint(const EffectRep& e);
Fingerprint fingerprint(const Scenario& scenario, const SparseVector& e);

// Positivity, normalization at the all-zero setting, and every no-signalling equality.
bool is_valid_state(const StateRep& s);
// Fingerprint equals the all-ones vector.
bool is_identity(const EffectRep& e);

// Precomputed incidence tables between coordinates and deterministic states.
class Geometry {
 public:
  explicit Geometry(const Scenario& scenario);

  const Scenario& scenario() const noexcept { return scenario_; }
  std::span<const std::uint32_t> det_support(std::size_t det) const {
    return {det_support_.data() + det * support_size_, support_size_};
  }
  // Deterministic states that put weight one on the given coordinate.
  const Bits& coordinate_cover(std::size_t coord) const { return cover_[coord]; }
  const std::vector<NsMove>& moves() const noexcept { return moves_; }

  // Fingerprint of a {0,1} representation whose support is contained in a
  // nonnegative identity representation, so every value is 0 or 1.
  Bits subset_fingerprint(const Bits& rep) const;
  // True when the coordinate covers of the support partition the det states.
  bool is_01_identity(const Bits& rep) const;

 private:
  Scenario scenario_;
  std::size_t support_size_;
  std::vector<std::uint32_t> det_support_;
  std::vector<Bits> cover_;
  std::vector<NsMove> moves_;
};

}  // namespace boxlab
