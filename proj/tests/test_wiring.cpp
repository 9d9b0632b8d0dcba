#include "doctest.h"

#include "boxlab/enumeration.hpp"
#include "boxlab/errors.hpp"
#include "boxlab/io.hpp"
#include "boxlab/relabelling.hpp"
#include "boxlab/wiring.hpp"
#include "oracles.hpp"

#include <random>
#include <set>
#include <unordered_set>

using namespace boxlab;
using oracle::tree_supports;

namespace {

const std::string kFixtures = BOXLAB_FIXTURE_DIR;

// Value of a {0,1} support on every deterministic state, from the strategies directly.
Bits direct_fingerprint(const Scenario& sc, const Bits& support) {
  Bits out(sc.det_state_count());
  for (std::size_t d = 0; d < sc.det_state_count(); ++d) {
    const auto strategies = decode_det_state(sc, d);
    int hits = 0;
    support.for_each_set([&](std::size_t i) {
      const Event ev = inverse_index(sc, i);
      bool agree = true;
      for (int p = 0; p < sc.parties; ++p)
        if (decode_strategy(sc, strategies[p])[ev.settings[p]] != ev.outcomes[p]) agree = false;
      hits += agree;
    });
    REQUIRE(hits <= 1);
    if (hits) out.set(d);
  }
  return out;
}

Relabelling random_relabelling(const Scenario& sc, std::mt19937& rng) {
  Relabelling g = Relabelling::identity(sc);
  std::shuffle(g.party_perm.begin(), g.party_perm.end(), rng);
  for (auto& inputs : g.input_perms) std::shuffle(inputs.begin(), inputs.end(), rng);
  for (auto& per_party : g.output_perms)
    for (auto& outputs : per_party) std::shuffle(outputs.begin(), outputs.end(), rng);
  return g;
}

}  // namespace

TEST_CASE("conditioning the two-step wiring example") {
  const Scenario sc(2, 2, 2);
  // First party measures input 0, second uses its outcome as input, output is the parity.
  const EffectRep even = effect_from_terms(sc, {{Rational(1), "00|00"}, {Rational(1), "11|01"}});
  CHECK(even.coords[0] == 1);
  CHECK(even.coords[7] == 1);
  const Scenario single(1, 2, 2);
  CHECK(condition_effect(even, 0, 0) == standard_basis_effect(single, index_of_label(single, "0|0")));
  CHECK(condition_effect(even, 0, 1) == standard_basis_effect(single, index_of_label(single, "1|1")));
  CHECK_THROWS_AS(condition_effect(even, 1, 0), DomainError);
  CHECK_THROWS_AS(condition_effect(standard_basis_effect(single, 0), 0, 0), DomainError);
}

TEST_CASE("conditioning the all-zero-inputs identity") {
  for (const Scenario& sc : {Scenario(2, 2, 2), Scenario(3, 2, 2), Scenario(3, 2, 3)}) {
    const Scenario reduced(sc.parties - 1, sc.inputs, sc.outputs);
    for (int p = 0; p < sc.parties; ++p)
      for (int a = 0; a < sc.outputs; ++a) CHECK(condition_effect(identity_effect(sc), p, a) == identity_effect(reduced));
  }
}

TEST_CASE("classifier on fixtures") {
  const EffectRep e1 = read_effect(kFixtures + "/e1.txt");
  CHECK_FALSE(is_wiring_representation(e1));
  CHECK(is_wiring_representation(read_effect(kFixtures + "/e1_wiring.txt")));
  CHECK(is_wiring_representation(standard_basis_effect(Scenario(3, 2, 2), 17)));
  CHECK(is_wiring_representation(identity_effect(Scenario(4, 2, 2))));
  CHECK_THROWS_AS(is_wiring_representation(read_effect(kFixtures + "/f1.txt")), DomainError);

  // Catalog flags for the discrimination effects.
  const Scenario sc(3, 2, 2);
  const auto catalog = enumerate_effects_01(sc);
  const Bits fe1 = fingerprint(e1).to_bits();
  const Bits fw = fingerprint(read_effect(kFixtures + "/e1_wiring.txt")).to_bits();
  int found = 0;
  for (const auto& e : catalog.entries) {
    if (e.fingerprint == fe1) {
      CHECK_FALSE(e.wiring);
      ++found;
    }
    if (e.fingerprint == fw) {
      CHECK(e.wiring);
      ++found;
    }
  }
  CHECK(found == 2);
}

TEST_CASE("literal classifier matches sequential procedures on two parties") {
  const Scenario sc(2, 2, 2);
  const auto trees = tree_supports(sc);
  const auto ids = enumerate_identity_reps_01(sc);
  CHECK(trees.size() == ids.reps.size());
  WiringOptions literal;
  literal.two_party_shortcut = false;
  for (const auto& r : ids.reps) {
    const Bits s = r.coords.support(sc.dimension());
    CHECK(trees.count(s));
    CHECK(is_wiring_representation(sc, s, literal));
  }
}

TEST_CASE("wiring identity representations match sequential procedures on three parties") {
  const Scenario sc(3, 2, 2);
  const auto trees = tree_supports(sc);
  CHECK(trees.size() == 680);
  const auto ids = enumerate_identity_reps_01(sc);
  std::set<Bits> flagged;
  for (const auto& r : ids.reps) {
    const Bits s = r.coords.support(sc.dimension());
    WiringOptions literal;
    literal.two_party_shortcut = false;
    CHECK(r.wiring == is_wiring_representation(sc, s, literal));
    CHECK(r.wiring == (trees.count(s) == 1));
    if (r.wiring) flagged.insert(s);
  }
  CHECK(flagged == trees);
  const auto bases = wiring_bases(sc);
  CHECK(std::set<Bits>(bases.begin(), bases.end()) == trees);
}

TEST_CASE("wiring effects match sub-procedures of sequential procedures") {
  const Scenario sc(3, 2, 2);
  std::unordered_set<Bits, BitsHash> from_trees;
  for (const auto& tree : tree_supports(sc)) {
    const auto leaves = tree.positions();
    for (unsigned mask = 0; mask < (1U << leaves.size()); ++mask) {
      Bits subset(sc.dimension());
      for (std::size_t i = 0; i < leaves.size(); ++i)
        if ((mask >> i) & 1U) subset.set(leaves[i]);
      from_trees.insert(direct_fingerprint(sc, subset));
    }
  }
  const auto catalog = enumerate_effects_01(sc);
  std::unordered_set<Bits, BitsHash> flagged;
  for (const auto& e : catalog.entries)
    if (e.wiring) flagged.insert(e.fingerprint);
  CHECK(from_trees.size() == 26838);
  CHECK(flagged == from_trees);
}

TEST_CASE("classifier is invariant under relabelling") {
  const Scenario sc(3, 2, 2);
  std::mt19937 rng(7);
  const auto ids = enumerate_identity_reps_01(sc);
  WiringOptions literal;
  literal.two_party_shortcut = false;
  for (const auto& r : ids.reps) {
    const EffectRep e(sc, r.coords.to_dense(sc.dimension()));
    for (int t = 0; t < 3; ++t) {
      const EffectRep moved = apply_relabelling(random_relabelling(sc, rng), e);
      CHECK(is_wiring_representation(moved, literal) == r.wiring);
    }
  }
}

TEST_CASE("conditioning a wiring representation gives wiring representations") {
  WiringOptions literal;
  literal.two_party_shortcut = false;
  std::mt19937 rng(11);
  const auto ids = enumerate_identity_reps_01(Scenario(3, 2, 2));
  int checked = 0;
  for (const auto& r : ids.reps) {
    if (!r.wiring) continue;
    const EffectRep e(ids.scenario, r.coords.to_dense(ids.scenario.dimension()));
    for (int p = 0; p < 3; ++p) {
      bool input_zero = true;
      for (std::size_t i = 0; i < e.coords.size(); ++i)
        if (!is_zero(e.coords[i]) && inverse_index(ids.scenario, i).settings[p] != 0) input_zero = false;
      if (!input_zero) continue;
      for (int a = 0; a < 2; ++a) {
        const EffectRep c = condition_effect(e, p, a);
        CHECK(is_identity(c));
        CHECK(is_wiring_representation(c, literal));
        ++checked;
      }
    }
  }
  CHECK(checked > 0);
  // Any unit subset of a wiring representation passes the classifier.
  for (const auto& base : wiring_bases(Scenario(3, 2, 2))) {
    const auto atoms = base.positions();
    Bits subset(base.size());
    for (std::size_t i = 0; i < atoms.size(); ++i)
      if (rng() & 1U) subset.set(atoms[i]);
    CHECK(is_wiring_representation(Scenario(3, 2, 2), subset, literal));
  }
}

TEST_CASE("wiring measurements") {
  int visits = 0;
  for_each_wiring_measurement(Scenario(1, 2, 2), 2, [&](const WiringMeasurement& wm) {
    wm.induced(Scenario(1, 2, 2), 2).validate();
    ++visits;
    return true;
  });
  CHECK(visits == 8);

  const Scenario sc(3, 2, 2);
  std::uint64_t count = 0;
  for_each_wiring_measurement(sc, 2, [&](const WiringMeasurement&) {
    ++count;
    return true;
  });
  CHECK(count == tree_supports(sc).size() * 256);

  int stopped = 0;
  for_each_wiring_measurement(sc, 2, [&](const WiringMeasurement&) { return ++stopped < 5; });
  CHECK(stopped == 5);

  // A sampled measurement is valid and labels its atoms as assigned.
  bool first = true;
  for_each_wiring_measurement(sc, 3, [&](const WiringMeasurement& wm) {
    if (first) {
      WiringMeasurement copy = wm;
      for (std::size_t i = 0; i < copy.assignment.size(); ++i) copy.assignment[i] = static_cast<int>(i % 3);
      const Measurement m = copy.induced(sc, 3);
      m.validate();
      CHECK(m.effects.size() == 3);
      first = false;
    }
    return false;
  });
  CHECK_THROWS_AS(for_each_wiring_measurement(sc, 0, [](const WiringMeasurement&) { return true; }), DomainError);

  Measurement broken;
  broken.scenario = sc;
  broken.effects = {standard_basis_effect(sc, 0)};
  CHECK_THROWS_AS(broken.validate(), DomainError);
}
