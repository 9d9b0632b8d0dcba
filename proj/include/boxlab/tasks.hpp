#pragma once

#include "boxlab/enumeration.hpp"
#include "boxlab/model.hpp"
#include "boxlab/wiring.hpp"

#include <optional>
#include <string>
#include <vector>

namespace boxlab {

// Known states with prior weights.
struct Ensemble {
  std::vector<StateRep> states;
  RationalVector weights;

  static Ensemble uniform(std::vector<StateRep> states);
  // Throws DomainError on mixed scenarios, negative weights or weights not summing to one.
  void validate() const;
};

// ---- state discrimination ----

struct DistanceResult {
  Rational distance;
  SparseVector witness;  // effect attaining the maximum; <witness, s1 - s2> = distance
};

// max |<e,s1> - <e,s2>| over the catalog's effects (orbit-expanded if reduced).
// Catalog entries and their complements are both scanned.
DistanceResult boxworld_distance(const StateRep& s1, const StateRep& s2, const Catalog& effects,
                                 bool wiring_only = false);

// Sum_k weight_k <e_k, s_{guess[k]}>. Without a map, effect k guesses state k.
Rational guessing_probability(const Ensemble& ensemble, const Measurement& measurement,
                              const std::vector<int>& guess = {});

struct WiringGuess {
  Rational value;
  Bits base;                // wiring identity representation attaining the value
  std::vector<int> guess;   // state guessed at each atom of the base
};

// Best deterministic wiring measurement: each atom of each wiring base is
// assigned to the state maximizing weight_k <atom, s_k>.
WiringGuess max_guessing_wirings(const Ensemble& ensemble);

struct AdvantageResult {
  bool feasible = false;
  StateRep s1, s2;
  Rational mu;  // <e, s1 - s2>
  Rational nu;  // max over wiring effects of <w, s1 - s2>
};

// min nu over pairs of states with <e, s1 - s2> = mu and <w, s1 - s2> <= nu for
// every wiring effect w of the catalog. Without mu, mu is a variable and mu - nu
// is maximized. Wiring rows are added lazily by a separating scan.
AdvantageResult advantage_lp(const EffectRep& e, const Catalog& wiring_rows,
                             std::optional<Rational> mu = Rational(1));

// ---- nonlocality without entanglement ----

struct NlweFixture {
  Ensemble ensemble;          // eight product states, uniform
  Measurement measurement;    // eight single-event effects, outcome k guesses state k
  Measurement best_wiring;    // printed wiring attaining the wiring optimum
};

NlweFixture nlwe_fixture();

// ---- nonlocality distillation on two 2-input 2-output parties ----

enum class CrossSection { I, III };

struct CrossSectionPoint {
  CrossSection section = CrossSection::I;
  Rational eta;
  Rational omega;
};

CrossSection parse_cross_section(const std::string& name);  // "I" or "III"

// Local deterministic box a = mu x + nu, b = sigma y + tau, index 1 + tau + 2 sigma + 4 nu + 8 mu.
StateRep local_box(int index);
// Extremal nonlocal box a + b = xy + mu x + nu y + sigma, index 1 + sigma + 2 nu + 4 mu.
StateRep nonlocal_box(int index);
StateRep cross_section_state(const CrossSectionPoint& point);

// E00 + E01 + E10 - E11 with E_xy = P(a = b|xy) - P(a != b|xy).
Rational chsh(const StateRep& box);

// Final CHSH of the reference three-copy protocol as a closed-form polynomial.
Rational reference_chsh_polynomial(CrossSection section, const Rational& eta, const Rational& omega);

struct DistillationProtocol {
  int copies = 0;
  EffectRep alice[2];
  EffectRep bob[2];

  // Throws DomainError unless all four effects are valid on the copies-party scenario.
  void validate() const;
};

// Printed three-copy protocol.
DistillationProtocol reference_protocol();

struct DistillResult {
  StateRep output;  // P'(ab|xy)
  Rational chsh;
};

// Applies the protocol to base^(x)copies with parties ordered A1 B1 A2 B2 ...
DistillResult distill(const DistillationProtocol& protocol, const StateRep& base);

struct AlicePair {
  SparseVector e0, e1;
};

struct SearchResult {
  DistillationProtocol protocol;
  Rational chsh;
  std::size_t pair_index = 0;
  std::size_t pairs_scanned = 0;
};

// All ordered pairs of the catalog's effects (orbit-expanded if reduced).
std::vector<AlicePair> alice_pairs(const Catalog& candidates);

// For each Alice pair solves Bob's optimal effects exactly; returns the best
// protocol (lowest pair index on ties). Pairs are scanned in parallel.
SearchResult distillation_search(const StateRep& base, int copies, const std::vector<AlicePair>& pairs);

struct GridRow {
  Rational eta, omega, chsh_initial, chsh_final, polynomial;
};

// Reference protocol on every point eta, omega in {0, 1/steps, ..., 1} with eta + omega <= 1.
std::vector<GridRow> distillation_grid(CrossSection section, int steps);

// CSV with exact rationals, or decimals when as_float is set.
std::string format_grid_csv(const std::vector<GridRow>& rows, bool as_float);

std::string format_rational(const Rational& value, bool as_float);

}  // namespace boxlab
