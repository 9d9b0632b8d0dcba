#pragma once

#include "boxlab/model.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace boxlab {

// Element of the relabelling group: party p goes to party_perm[p], its input x to
// input_perms[p][x], and outcome a of that input to output_perms[p][x][a].
struct Relabelling {
  std::vector<int> party_perm;
  std::vector<std::vector<int>> input_perms;
  std::vector<std::vector<std::vector<int>>> output_perms;

  static Relabelling identity(const Scenario& scenario);
  bool compatible(const Scenario& scenario) const;

  bool operator==(const Relabelling&) const = default;
};

// (g . h)(v) = g(h(v)).
Relabelling compose(const Relabelling& g, const Relabelling& h);
Relabelling inverse(const Relabelling& g);

// Image position of every coordinate: (g v)[map[i]] = v[i].
std::vector<std::uint32_t> coordinate_map(const Scenario& scenario, const Relabelling& g);
// Image of every local deterministic state under g, so that
// fingerprint(g e)[map[i]] = fingerprint(e)[i].
std::vector<std::uint32_t> det_state_map(const Scenario& scenario, const Relabelling& g);

EffectRep apply_relabelling(const Relabelling& g, const EffectRep& e);
StateRep apply_relabelling(const Relabelling& g, const StateRep& s);
SparseVector apply_map(const std::vector<std::uint32_t>& map, const SparseVector& v);
Bits apply_map(const std::vector<std::uint32_t>& map, const Bits& bits);
Fingerprint apply_map(const std::vector<std::uint32_t>& map, const Fingerprint& f);

// Party transposition and cycle, plus input and output transpositions and
// cycles on party 0 (outputs at input 0). Together they generate the group.
std::vector<Relabelling> group_generators(const Scenario& scenario);

// Visits every group element exactly once.
void for_each_relabelling(const Scenario& scenario,
                          const std::function<void(const Relabelling&)>& visit);

struct CanonicalForm {
  Fingerprint fingerprint;
  Relabelling witness;  // fingerprint(apply_relabelling(witness, e)) == fingerprint
};

// Lexicographic minimum of fingerprint(g e) over the whole group.
CanonicalForm canonical_form(const EffectRep& e);
// Number of distinct fingerprints in the orbit of e.
std::uint64_t orbit_size(const EffectRep& e);

// Generator tables shared by the bitset orbit routines.
class SymmetryTables {
 public:
  explicit SymmetryTables(const Scenario& scenario);

  const std::vector<Relabelling>& generators() const noexcept { return generators_; }
  const std::vector<std::vector<std::uint32_t>>& det_maps() const noexcept { return det_maps_; }
  const std::vector<std::vector<std::uint32_t>>& coord_maps() const noexcept { return coord_maps_; }

  // Orbit of a {0,1} fingerprint, first element is the input.
  std::vector<Bits> fingerprint_orbit(const Bits& fingerprint) const;
  // Orbit of a {0,1} representation under coordinate permutations.
  std::vector<Bits> representation_orbit(const Bits& rep) const;

 private:
  std::vector<Relabelling> generators_;
  std::vector<std::vector<std::uint32_t>> det_maps_;
  std::vector<std::vector<std::uint32_t>> coord_maps_;
};

// Every group element as a coordinate map and det-state map, for exhaustive
// canonicalization in the symmetry-reduced enumerations.
class GroupTable {
 public:
  explicit GroupTable(const Scenario& scenario);

  std::size_t order() const noexcept { return order_; }
  // Lexicographic minimum image of a {0,1} fingerprint; also reports how many
  // group elements fix the input.
  Bits canonical_fingerprint(const Bits& fingerprint, std::size_t* stabilizer = nullptr) const;
  Bits canonical_representation(const Bits& rep, std::size_t* stabilizer = nullptr) const;

  // Coordinate carried to position i by element g.
  std::uint32_t coordinate_preimage(std::size_t g, std::size_t i) const {
    return coord_.inverse[i * order_ + g];
  }

 private:
  // Per position t: inverse[t*order + g] is the preimage of t under g, and
  // by_source lists the elements of each position grouped by that preimage,
  // with group i of position t at by_source[t*order + start[t*(width+1) + i]].
  struct PositionTable {
    std::size_t width = 0;
    std::vector<std::uint32_t> inverse;
    std::vector<std::uint32_t> by_source;
    std::vector<std::uint32_t> start;

    void index_sources(std::size_t order);
    Bits canonical(const Bits& bits, std::size_t order, std::size_t* stabilizer) const;
  };

  std::size_t order_ = 0;
  PositionTable det_;
  PositionTable coord_;
};

}  // namespace boxlab
