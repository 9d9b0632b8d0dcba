#pragma once

#include "boxlab/enumeration.hpp"
#include "boxlab/model.hpp"

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace boxlab {

// Catalog files:
//   #boxlab v1 scenario N=<n> nI=<i> nO=<o>
//   class=<int> wiring=<0|1> det=<0|1> orbit=<int> v=<r_1> ... <r_dim>
// Blank lines and lines starting with "##" are ignored. Annotations before v=
// are optional on input; a record may carry scale=<p/q>, multiplying every value.
Catalog parse_catalog(std::istream& in, std::vector<std::size_t>* record_lines = nullptr);
Catalog read_catalog(const std::string& path, std::vector<std::size_t>* record_lines = nullptr);
std::string format_catalog(const Catalog& catalog);
void write_catalog(const Catalog& catalog, const std::string& path);

// State files use the header "#boxlab v1 state N=<n> nI=<i> nO=<o>" and one
// "v=" record per state; each record is checked to be a valid state.
std::vector<StateRep> parse_states(std::istream& in);
std::vector<StateRep> read_states(const std::string& path);
StateRep read_state(const std::string& path);
std::string format_states(const std::vector<StateRep>& states);

// Effect fixtures are catalog files; every record must pass is_valid_effect.
std::vector<EffectRep> read_effects(const std::string& path);
EffectRep read_effect(const std::string& path);

// Writes to a sibling temporary file and renames it over the target.
void atomic_write(const std::string& path, const std::string& content);

enum class FrVariant { Disjunctive, Maximal, Weighted };
FrVariant parse_fr_variant(const std::string& name);

// One edge per identity representation over the flat-index event list.
struct Hypergraph {
  Scenario scenario;
  std::vector<std::string> vertices;
  std::vector<RationalVector> edges;
};

// Disjunctive keeps every {0,1} representation, maximal only the wiring ones,
// weighted additionally keeps fractional representations.
Hypergraph export_fr_product(const IdentitySet& identities, FrVariant variant);
std::string format_hypergraph(const Hypergraph& graph);

}  // namespace boxlab
