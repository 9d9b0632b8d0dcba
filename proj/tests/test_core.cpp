#include "doctest.h"

#include "boxlab/errors.hpp"
#include "boxlab/model.hpp"
#include "boxlab/relabelling.hpp"
#include "boxlab/tensor.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

using namespace boxlab;

namespace {

Relabelling random_relabelling(const Scenario& sc, std::mt19937& rng) {
  Relabelling g = Relabelling::identity(sc);
  std::shuffle(g.party_perm.begin(), g.party_perm.end(), rng);
  for (auto& p : g.input_perms) std::shuffle(p.begin(), p.end(), rng);
  for (auto& per_input : g.output_perms)
    for (auto& t : per_input) std::shuffle(t.begin(), t.end(), rng);
  return g;
}

EffectRep random_01(const Scenario& sc, std::mt19937& rng) {
  EffectRep e = zero_effect(sc);
  for (auto& c : e.coords) c = static_cast<long>(rng() % 2);
  return e;
}

}  // namespace

TEST_CASE("scenario dimensions") {
  const Scenario s(3, 2, 2);
  CHECK(s.dimension() == 64);
  CHECK(s.det_state_count() == 64);
  CHECK(s.symmetry_group_order() == 3072);
  CHECK(Scenario(2, 2, 2).symmetry_group_order() == 128);
  CHECK(Scenario(2, 3, 2).det_state_count() == 64);
  CHECK(Scenario(2, 3, 2).dimension() == 36);
  CHECK_THROWS_AS(Scenario(0, 2, 2), DomainError);
}

TEST_CASE("flat_index") {
  const Scenario bi(2, 2, 2);
  CHECK(flat_index(bi, std::vector{0, 0}, std::vector{0, 0}) == 0);
  CHECK(flat_index(bi, std::vector{1, 1}, std::vector{0, 1}) == 7);
  CHECK(flat_index(Scenario(3, 2, 2), std::vector{1, 1, 0}, std::vector{0, 0, 1}) == 14);
  CHECK_THROWS_AS(flat_index(bi, std::vector{2, 0}, std::vector{0, 0}), DomainError);
  CHECK_THROWS_AS(flat_index(bi, std::vector{0, 0}, std::vector{0, 2}), DomainError);

  for (const Scenario& sc : {Scenario(3, 2, 2), Scenario(2, 3, 2), Scenario(2, 2, 3)}) {
    for (std::size_t i = 0; i < sc.dimension(); ++i) {
      const Event e = inverse_index(sc, i);
      REQUIRE(flat_index(sc, e.outcomes, e.settings) == i);
    }
  }
  CHECK(label_of_index(Scenario(3, 2, 2), 14) == "110|001");
  CHECK(index_of_label(Scenario(3, 2, 2), "110|001") == 14);
}

TEST_CASE("local deterministic states") {
  const auto single = local_deterministic_states(Scenario(1, 2, 2));
  REQUIRE(single.size() == 4);
  auto as_ints = [](const StateRep& s) {
    std::vector<int> v;
    for (const auto& c : s.coords) v.push_back(static_cast<int>(c.get_num().get_si()));
    return v;
  };
  CHECK(as_ints(single[0]) == std::vector{1, 0, 1, 0});
  CHECK(as_ints(single[1]) == std::vector{1, 0, 0, 1});
  CHECK(as_ints(single[2]) == std::vector{0, 1, 1, 0});
  CHECK(as_ints(single[3]) == std::vector{0, 1, 0, 1});
  CHECK(local_deterministic_states(Scenario(2, 2, 2)).size() == 16);
  const auto tri = local_deterministic_states(Scenario(3, 2, 2));
  CHECK(tri.size() == 64);
  for (const auto& s : tri) CHECK(is_valid_state(s));
}

TEST_CASE("no-signalling generators") {
  CHECK(ns_generators(Scenario(2, 2, 2)).size() == 8);
  CHECK(ns_generators(Scenario(3, 2, 2)).size() == 48);
  CHECK(ns_generators(Scenario(2, 3, 3)).size() == 2 * 9 * 2);
  const auto single = ns_generators(Scenario(1, 2, 2));
  REQUIRE(single.size() == 1);
  CHECK(single[0].dense(4) == std::vector{1, 1, -1, -1});

  // Alice cannot signal to Bob at y = 0, b = 0.
  const Scenario bi(2, 2, 2);
  std::vector<int> alice(16, 0);
  alice[index_of_label(bi, "00|00")] = 1;
  alice[index_of_label(bi, "10|00")] = 1;
  alice[index_of_label(bi, "00|10")] = -1;
  alice[index_of_label(bi, "10|10")] = -1;
  const auto gens = ns_generators(bi);
  CHECK(std::any_of(gens.begin(), gens.end(), [&](const NsMove& r) { return r.dense(16) == alice; }));

  for (const Scenario& sc : {Scenario(2, 2, 2), Scenario(3, 2, 2), Scenario(2, 3, 2), Scenario(2, 2, 3)}) {
    const auto dets = local_deterministic_states(sc);
    for (const auto& r : ns_generators(sc)) {
      REQUIRE(r.plus.size() == static_cast<std::size_t>(sc.outputs));
      REQUIRE(r.minus.size() == static_cast<std::size_t>(sc.outputs));
      for (const auto& s : dets) {
        Rational acc;
        for (auto k : r.plus) acc += s.coords[k];
        for (auto k : r.minus) acc -= s.coords[k];
        REQUIRE(acc == 0);
      }
    }
  }
}

TEST_CASE("inner product") {
  const Scenario sc(2, 2, 2);
  StateRep s(sc, RationalVector(16));
  for (std::size_t k = 0; k < 16; ++k) s.coords[k] = make_rational(static_cast<long>(k), 7);
  for (std::size_t k = 0; k < 16; ++k) CHECK(inner(standard_basis_effect(sc, k), s) == s.coords[k]);
  CHECK_THROWS_AS(inner(zero_effect(Scenario(1, 2, 2)), s), DomainError);
}

TEST_CASE("fingerprint identifies effects modulo moves") {
  const Scenario single(1, 2, 2);
  EffectRep a(single, {1, 1, 0, 0});
  EffectRep b(single, {0, 0, 1, 1});
  CHECK(fingerprint(a) == fingerprint(b));
  CHECK(fingerprint(a).all_ones());
  const auto zero = fingerprint(zero_effect(Scenario(2, 2, 2)));
  CHECK(std::all_of(zero.values.begin(), zero.values.end(), [](const Rational& v) { return v == 0; }));

  std::mt19937 rng(7);
  for (const Scenario& sc : {Scenario(2, 2, 2), Scenario(3, 2, 2)}) {
    const auto gens = ns_generators(sc);
    for (int trial = 0; trial < 20; ++trial) {
      EffectRep e = random_01(sc, rng);
      const auto f = fingerprint(e);
      for (const auto& r : gens) {
        EffectRep moved = e;
        for (auto k : r.plus) moved.coords[k] += 1;
        for (auto k : r.minus) moved.coords[k] -= 1;
        REQUIRE(fingerprint(moved) == f);
      }
    }
  }
}

TEST_CASE("identity representations are {0,1} and evaluate to one") {
  for (const Scenario& sc : {Scenario(1, 3, 2), Scenario(2, 2, 2), Scenario(3, 2, 2), Scenario(2, 2, 3)}) {
    const auto u = identity_effect(sc);
    CHECK(is_identity(u));
    for (const auto& s : local_deterministic_states(sc)) CHECK(inner(u, s) == 1);
  }
}

TEST_CASE("relabelling group action") {
  std::mt19937 rng(11);
  for (const Scenario& sc : {Scenario(2, 2, 2), Scenario(3, 2, 2), Scenario(2, 3, 3)}) {
    const EffectRep e = random_01(sc, rng);
    CHECK(apply_relabelling(Relabelling::identity(sc), e) == e);
    for (int trial = 0; trial < 10; ++trial) {
      const auto g = random_relabelling(sc, rng);
      const auto h = random_relabelling(sc, rng);
      REQUIRE(apply_relabelling(compose(g, h), e) == apply_relabelling(g, apply_relabelling(h, e)));
      REQUIRE(apply_relabelling(inverse(g), apply_relabelling(g, e)) == e);
      // Fingerprints transform through the det-state map.
      REQUIRE(fingerprint(apply_relabelling(g, e)) == apply_map(det_state_map(sc, g), fingerprint(e)));
      // Moves stay moves under relabelling.
      for (const auto& r : ns_generators(sc)) {
        EffectRep moved = e;
        for (auto k : r.plus) moved.coords[k] += 1;
        for (auto k : r.minus) moved.coords[k] -= 1;
        REQUIRE(fingerprint(apply_relabelling(g, moved)) == fingerprint(apply_relabelling(g, e)));
      }
    }
  }
  Relabelling bad = Relabelling::identity(Scenario(2, 2, 2));
  CHECK_THROWS_AS(apply_relabelling(bad, zero_effect(Scenario(3, 2, 2))), DomainError);
}

TEST_CASE("party swap fixes a symmetric state") {
  const Scenario sc(2, 2, 2);
  StateRep pr(sc, RationalVector(16));
  for (std::size_t i = 0; i < 16; ++i) {
    const Event e = inverse_index(sc, i);
    if ((e.outcomes[0] ^ e.outcomes[1]) == (e.settings[0] & e.settings[1])) pr.coords[i] = make_rational(1, 2);
  }
  Relabelling swap = Relabelling::identity(sc);
  std::swap(swap.party_perm[0], swap.party_perm[1]);
  CHECK(apply_relabelling(swap, pr) == pr);
}

TEST_CASE("full group enumeration has the stated order") {
  for (const Scenario& sc : {Scenario(1, 2, 2), Scenario(2, 2, 2), Scenario(3, 2, 2), Scenario(2, 2, 3)}) {
    std::set<std::vector<std::uint32_t>> images;
    std::uint64_t count = 0;
    for_each_relabelling(sc, [&](const Relabelling& g) {
      ++count;
      images.insert(coordinate_map(sc, g));
    });
    CHECK(count == sc.symmetry_group_order());
    CHECK(images.size() == count);
  }
}

TEST_CASE("canonical form and orbit size") {
  std::mt19937 rng(5);
  const Scenario sc(3, 2, 2);
  CHECK(orbit_size(identity_effect(sc)) == 1);
  for (int trial = 0; trial < 5; ++trial) {
    // A random subset of a random relabelled identity is a {0,1} effect.
    EffectRep e = apply_relabelling(random_relabelling(sc, rng), identity_effect(sc));
    for (auto& c : e.coords)
      if (c == 1 && rng() % 2) c = 0;
    const auto cf = canonical_form(e);
    CHECK(fingerprint(apply_relabelling(cf.witness, e)) == cf.fingerprint);
    const auto g = random_relabelling(sc, rng);
    CHECK(canonical_form(apply_relabelling(g, e)).fingerprint == cf.fingerprint);
    const auto size = orbit_size(e);
    CHECK(sc.symmetry_group_order() % size == 0);
  }
  // Exhaustive cross-check on the bipartite group.
  const Scenario bi(2, 2, 2);
  EffectRep e = standard_basis_effect(bi, 5);
  e.coords[0] = 1;
  Fingerprint best = fingerprint(e);
  for_each_relabelling(bi, [&](const Relabelling& g) {
    const auto f = fingerprint(apply_relabelling(g, e));
    if (f < best) best = f;
  });
  CHECK(canonical_form(e).fingerprint == best);
}

TEST_CASE("tabulated canonical forms are orbit minima") {
  std::mt19937 rng(11);
  const Scenario sc(3, 2, 2);
  const GroupTable group(sc);
  const SymmetryTables tables(sc);
  auto check = [&](const Bits& bits, bool fingerprint_side) {
    const auto orbit = fingerprint_side ? tables.fingerprint_orbit(bits) : tables.representation_orbit(bits);
    std::size_t stabilizer = 0;
    const Bits canonical = fingerprint_side ? group.canonical_fingerprint(bits, &stabilizer)
                                            : group.canonical_representation(bits, &stabilizer);
    CHECK(canonical == *std::min_element(orbit.begin(), orbit.end()));
    CHECK(stabilizer * orbit.size() == group.order());
  };
  // Densities from sparse to dense exercise both filtering regimes.
  for (unsigned density : {2U, 4U, 16U, 64U}) {
    for (int trial = 0; trial < 20; ++trial) {
      Bits f(sc.det_state_count()), r(sc.dimension());
      for (std::size_t i = 0; i < f.size(); ++i)
        if (rng() % density == 0) f.set(i);
      for (std::size_t i = 0; i < r.size(); ++i)
        if (rng() % density == 0) r.set(i);
      check(f, true);
      check(r, false);
      f.flip(0);
      check(f, true);
    }
  }
  check(Bits(sc.det_state_count()), true);
}

TEST_CASE("tensor composition") {
  const Scenario single(1, 2, 2);
  const auto u = identity_effect(single);
  const std::vector<int> order{0, 1};
  const auto joint = tensor_compose(2, 2, {{u.coords, {0}}, {u.coords, {1}}}, order);
  CHECK(joint == identity_effect(Scenario(2, 2, 2)).coords);

  // Party labels may be interleaved: factor A on {1}, factor B on {0}.
  StateRep t1(single, {1, 0, 1, 0});
  StateRep t4(single, {0, 1, 0, 1});
  const auto swapped = tensor_compose(2, 2, {{t1.coords, {1}}, {t4.coords, {0}}}, order);
  CHECK(swapped == tensor_product({t4, t1}).coords);

  CHECK_THROWS_AS(tensor_compose(2, 2, {{u.coords, {0}}, {u.coords, {0}}}, order), DomainError);
  CHECK_THROWS_AS(tensor_compose(2, 2, {{u.coords, {0}}}, order), DomainError);
}
