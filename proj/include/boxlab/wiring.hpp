#pragma once

#include "boxlab/model.hpp"

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace boxlab {

// Effects summing to the identity. labels[k] names the outcome of effects[k].
struct Measurement {
  Scenario scenario;
  std::vector<EffectRep> effects;
  std::vector<std::string> labels;

  // Throws DomainError unless the effects are valid and sum to the identity.
  void validate() const;
};

// A {0,1} wiring identity representation whose unit entries (atoms) are
// assigned to outcome labels 0..m-1.
struct WiringMeasurement {
  Bits base;
  std::vector<int> assignment;  // one label per atom, atoms in ascending coordinate order

  Measurement induced(const Scenario& scenario, int outcomes) const;
};

// Restricts a representation to setting 0 and the given outcome of one party.
// Entries at other settings of that party must vanish.
EffectRep condition_effect(const EffectRep& e, int party, int outcome);

struct WiringOptions {
  // Every {0,1} representation on two parties is a wiring, so the recursion
  // may stop there. Disable to recurse down to single parties.
  bool two_party_shortcut = true;
};

// Recursive structural test: some party sees a single input on the whole
// support, and every outcome-conditioned remainder is again a wiring.
bool is_wiring_representation(const EffectRep& e, WiringOptions options = {});
bool is_wiring_representation(const Scenario& scenario, const Bits& support, WiringOptions options = {});

// {0,1} wiring identity representations of the scenario, in closure order.
std::vector<Bits> wiring_bases(const Scenario& scenario);

// Calls visit for every base and every assignment of its atoms to m labels.
// Labels may stay unused. Returning false from visit stops the iteration.
void for_each_wiring_measurement(const Scenario& scenario, int outcomes,
                                 const std::function<bool(const WiringMeasurement&)>& visit);

}  // namespace boxlab
