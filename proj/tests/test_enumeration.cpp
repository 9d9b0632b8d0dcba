#include "doctest.h"

#include "boxlab/enumeration.hpp"
#include "boxlab/errors.hpp"
#include "boxlab/io.hpp"
#include "boxlab/lp.hpp"
#include "boxlab/relabelling.hpp"
#include "boxlab/validity.hpp"
#include "oracles.hpp"

#include <cstdlib>
#include <map>
#include <sstream>
#include <set>
#include <unordered_set>

using namespace boxlab;
using oracle::brute_force_identities;

namespace {

const std::string kFixtures = BOXLAB_FIXTURE_DIR;

std::set<std::vector<std::uint32_t>> as_index_sets(const IdentitySet& set) {
  std::set<std::vector<std::uint32_t>> out;
  for (const auto& r : set.reps) out.insert(r.coords.index);
  return out;
}

struct ThreadsGuard {
  explicit ThreadsGuard(const char* value) { setenv("BOXLAB_THREADS", value, 1); }
  ~ThreadsGuard() { unsetenv("BOXLAB_THREADS"); }
};

}  // namespace

TEST_CASE("single-party identity representations") {
  const auto set = enumerate_identity_reps_01(Scenario(1, 2, 2));
  REQUIRE(set.reps.size() == 2);
  CHECK(set.reps[0].coords.to_dense(4) == RationalVector{1, 1, 0, 0});
  CHECK(set.reps[1].coords.to_dense(4) == RationalVector{0, 0, 1, 1});
}

TEST_CASE("closure equals brute force on small scenarios") {
  for (const Scenario& sc : {Scenario(1, 2, 2), Scenario(1, 3, 2), Scenario(2, 2, 2)}) {
    const auto closure = enumerate_identity_reps_01(sc);
    CHECK(as_index_sets(closure) == brute_force_identities(sc));
  }
  // Frozen regression value for two bits.
  CHECK(enumerate_identity_reps_01(Scenario(2, 2, 2)).reps.size() == 12);
}

TEST_CASE("closure soundness on three parties") {
  const Scenario sc(3, 2, 2);
  const auto set = enumerate_identity_reps_01(sc);
  CHECK(set.reps.size() == 744);
  CHECK(set.total(true) == 680);
  CHECK(set.class_count() == 9);
  const auto summary = class_summary(set);
  CHECK(summary.wiring_classes == 8);
  for (const auto& r : set.reps) {
    REQUIRE(r.coords.is_01_valued());
    REQUIRE(r.coords.index.size() == sc.outcome_count());
    REQUIRE(fingerprint(sc, r.coords).all_ones());
    REQUIRE(sc.symmetry_group_order() % r.orbit == 0);
  }
}

TEST_CASE("bipartite effects") {
  const Scenario sc(2, 2, 2);
  const auto catalog = enumerate_effects_01(sc);
  CHECK(catalog.entries.size() == 82);
  CHECK(catalog.class_count() == 7);
  const auto summary = class_summary(catalog);
  CHECK(summary_line(summary) == "classes=7 total=82 wirings=82 nonwirings=0");
  std::unordered_set<Bits, BitsHash> seen;
  for (const auto& e : catalog.entries) {
    CHECK(seen.insert(e.fingerprint).second);
    CHECK(e.wiring);
    CHECK(sc.symmetry_group_order() % e.orbit == 0);
    CHECK(is_valid_effect(sc, EffectRep(sc, e.representative.to_dense(sc.dimension()))));
    CHECK(fingerprint(sc, e.representative) == Fingerprint::from_bits(e.fingerprint));
  }
  // The trivial deletions are present.
  CHECK(seen.count(Bits(sc.det_state_count())));
  Bits ones(sc.det_state_count());
  for (std::size_t d = 0; d < ones.size(); ++d) ones.set(d);
  CHECK(seen.count(ones));
}

TEST_CASE("three-party effects and class accounting") {
  const Scenario sc(3, 2, 2);
  const auto catalog = enumerate_effects_01(sc);
  const auto summary = class_summary(catalog);
  CHECK(summary.total == 28886);
  CHECK(summary.wirings == 26838);
  CHECK(summary.nonwirings == 2048);
  CHECK(summary.classes.size() == 66);
  CHECK(summary.classes.size() - summary.wiring_classes == 3);

  // Flags agree within each class; class representatives have distinct canonical forms.
  std::map<int, std::pair<bool, Bits>> cls;
  for (const auto& e : catalog.entries) {
    auto [it, inserted] = cls.try_emplace(e.class_id, e.wiring, e.canonical);
    if (!inserted) {
      CHECK(it->second.first == e.wiring);
      CHECK(it->second.second == e.canonical);
    }
  }
  std::set<Bits> canon;
  for (const auto& [id, v] : cls) canon.insert(v.second);
  CHECK(canon.size() == cls.size());
}

TEST_CASE("symmetry-reduced runs agree with full runs") {
  for (const Scenario& sc : {Scenario(2, 2, 2), Scenario(3, 2, 2), Scenario(2, 3, 2)}) {
    EnumerationOptions reduced_opts;
    reduced_opts.symmetry_reduce = true;
    const auto ids_full = enumerate_identity_reps_01(sc);
    const auto ids_reduced = enumerate_identity_reps_01(sc, reduced_opts);
    CHECK(ids_reduced.total() == ids_full.reps.size());
    CHECK(ids_reduced.total(true) == ids_full.total(true));
    CHECK(ids_reduced.class_count() == ids_full.class_count());

    const auto full = enumerate_effects_01(sc);
    const auto reduced = enumerate_effects_01(sc, reduced_opts);
    CHECK(reduced.entries.size() == full.class_count());
    const auto expanded = expand_catalog(reduced);
    REQUIRE(expanded.entries.size() == full.entries.size());
    for (std::size_t i = 0; i < full.entries.size(); ++i) {
      CHECK(expanded.entries[i].fingerprint == full.entries[i].fingerprint);
      CHECK(expanded.entries[i].wiring == full.entries[i].wiring);
      CHECK(expanded.entries[i].class_id == full.entries[i].class_id);
      CHECK(expanded.entries[i].orbit == full.entries[i].orbit);
    }
    const auto a = class_summary(full), b = class_summary(reduced);
    CHECK(summary_line(a) == summary_line(b));
  }
}

TEST_CASE("results do not depend on the worker count") {
  const Scenario sc(3, 2, 2);
  Catalog one, three;
  {
    ThreadsGuard guard("1");
    CHECK(worker_count() == 1);
    one = enumerate_effects_01(sc);
  }
  {
    ThreadsGuard guard("3");
    CHECK(worker_count() == 3);
    three = enumerate_effects_01(sc);
  }
  REQUIRE(one.entries.size() == three.entries.size());
  for (std::size_t i = 0; i < one.entries.size(); ++i) {
    CHECK(one.entries[i].representative == three.entries[i].representative);
    CHECK(one.entries[i].wiring == three.entries[i].wiring);
  }
}

TEST_CASE("class representatives") {
  const auto full = enumerate_effects_01(Scenario(3, 2, 2));
  const auto reps = class_representatives(full);
  CHECK(reps.entries.size() == 66);
  for (const auto& e : reps.entries) CHECK(e.fingerprint == e.canonical);
  CHECK(summary_line(class_summary(reps)) == summary_line(class_summary(full)));
}

TEST_CASE("the three printed non-wiring classes") {
  const Scenario sc(3, 2, 2);
  const auto catalog = enumerate_effects_01(sc);
  std::set<Bits> nonwiring;
  for (const auto& e : catalog.entries)
    if (!e.wiring) nonwiring.insert(e.canonical);
  REQUIRE(nonwiring.size() == 3);
  const GroupTable group(sc);
  std::set<Bits> printed;
  for (const auto& e : read_effects(kFixtures + "/nonwiring_classes.txt"))
    printed.insert(group.canonical_fingerprint(fingerprint(e).to_bits()));
  CHECK(printed == nonwiring);
}

TEST_CASE("sub-effects of a {0,1} identity representation") {
  const Scenario sc(2, 2, 2);
  Catalog empty;
  empty.scenario = sc;
  const auto survivors = sub_effects(identity_effect(sc), empty);
  const auto catalog = enumerate_effects_01(sc);
  std::unordered_set<Bits, BitsHash> known;
  for (const auto& e : catalog.entries) known.insert(e.fingerprint);
  // Oracle: nonempty unit subsets of the rep, counted up to relabellings fixing it.
  const auto base = identity_effect(sc);
  std::vector<std::vector<std::uint32_t>> stabilizer;
  for_each_relabelling(sc, [&](const Relabelling& g) {
    if (apply_relabelling(g, base) == base) stabilizer.push_back(coordinate_map(sc, g));
  });
  std::set<Bits> orbit_minima;
  for (unsigned mask = 1; mask < 16; ++mask) {
    Bits subset(sc.dimension());
    for (unsigned i = 0; i < 4; ++i)
      if ((mask >> i) & 1U) subset.set(i);
    Bits best = subset;
    for (const auto& map : stabilizer) best = std::min(best, apply_map(map, subset));
    orbit_minima.insert(best);
  }
  CHECK(orbit_minima.size() == 5);
  CHECK(survivors.size() == orbit_minima.size());
  for (const auto& s : survivors) {
    CHECK(s.deterministic);
    CHECK(s.label == "extremal-candidate");
    CHECK(known.count(fingerprint(sc, s.rep).to_bits()));
  }
  // Against the full catalog nothing new survives.
  CHECK(sub_effects(identity_effect(sc), catalog).empty());
  CHECK_THROWS_AS(sub_effects(standard_basis_effect(sc, 0), catalog), DomainError);
}

TEST_CASE("sub-effects of the fractional identity u2") {
  const Scenario sc(3, 2, 2);
  const auto catalog = enumerate_effects_01(sc);
  const EffectRep u2 = read_effect(kFixtures + "/u2.txt");
  REQUIRE(is_identity(u2));
  SubEffectOptions opts;
  opts.mutual_filter = false;
  const auto survivors = sub_effects(u2, catalog, opts);
  CHECK(!survivors.empty());
  HullIndex hull(sc);
  for (const auto& e : catalog.entries) hull.add(e.representative);
  for (const auto& s : survivors) {
    CHECK_FALSE(s.deterministic);
    // Survivors are zeroings of u2 lying outside the hull of the {0,1} catalog.
    for (std::size_t k = 0; k < s.rep.index.size(); ++k) CHECK(u2.coords[s.rep.index[k]] == s.rep.value[k]);
    CHECK_FALSE(hull.contains(fingerprint(sc, s.rep)));
  }
}

TEST_CASE("printed fractional sub-effects lie in the hull of the {0,1} catalog") {
  // e5 is a zeroing of u2 and e4 of u1, but both are convex combinations of
  // {0,1}-valued effects modulo moves, so the hull filter removes them.
  const Scenario sc(3, 2, 2);
  const auto catalog = enumerate_effects_01(sc);
  const auto moves = ns_generators(sc);
  for (const auto& [effect, identity] : {std::pair{"e4.txt", "u1.txt"}, std::pair{"e5.txt", "u2.txt"}}) {
    const EffectRep e = read_effect(kFixtures + "/" + effect);
    const EffectRep u = read_effect(kFixtures + "/" + identity);
    for (std::size_t k = 0; k < e.coords.size(); ++k)
      if (!is_zero(e.coords[k])) CHECK(e.coords[k] == u.coords[k]);

    // Independent certificate in coordinate space: e = sum lambda_i k_i + sum w_j r_j.
    std::vector<const SparseVector*> cols;
    const auto fe = fingerprint(e);
    for (const auto& entry : catalog.entries) {
      const auto fk = fingerprint(sc, entry.representative);
      bool usable = true;
      for (std::size_t d = 0; d < fk.values.size(); ++d)
        if ((fe.values[d] == 0 && fk.values[d] != 0) || (fe.values[d] == 1 && fk.values[d] != 1)) usable = false;
      if (usable) cols.push_back(&entry.representative);
    }
    const std::size_t n = cols.size() + moves.size();
    lp::LinearProgram prog(n);
    for (std::size_t j = cols.size(); j < n; ++j) prog.set_free(j);
    prog.objective.assign(n, Rational());
    std::vector<RationalVector> rows(sc.dimension(), RationalVector(n));
    for (std::size_t j = 0; j < cols.size(); ++j)
      for (std::size_t t = 0; t < cols[j]->index.size(); ++t) rows[cols[j]->index[t]][j] = cols[j]->value[t];
    for (std::size_t j = 0; j < moves.size(); ++j) {
      for (auto k : moves[j].plus) rows[k][cols.size() + j] += 1;
      for (auto k : moves[j].minus) rows[k][cols.size() + j] -= 1;
    }
    for (std::size_t k = 0; k < rows.size(); ++k) prog.add_row(rows[k], lp::Relation::Equal, e.coords[k]);
    RationalVector weights(n);
    for (std::size_t j = 0; j < cols.size(); ++j) weights[j] = 1;
    prog.add_row(weights, lp::Relation::Equal, 1);
    const auto r = lp::solve(prog);
    REQUIRE(r.status == lp::Status::Optimal);
    CHECK(lp::satisfies(prog, *r.point));
  }
}

TEST_CASE("ingesting identity vertices") {
  const auto set = ingest_identity_vertices(kFixtures + "/identity_vertices.txt");
  CHECK(set.reps.size() == 2);
  for (const auto& r : set.reps) CHECK_FALSE(r.is_01);
  CHECK(ingest_identity_vertices(kFixtures + "/single_identity.txt").reps.size() == 1);
  try {
    ingest_identity_vertices(kFixtures + "/sbv.txt");
    FAIL("standard basis vector accepted as an identity");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
}

TEST_CASE("orbit expansion") {
  const Scenario sc(3, 2, 2);
  const auto orbit = effect_orbit(sc, SparseVector::from_dense(read_effect(kFixtures + "/f1.txt").coords));
  CHECK(sc.symmetry_group_order() % orbit.size() == 0);
  std::unordered_set<Fingerprint, FingerprintHash> fps;
  for (const auto& rep : orbit) fps.insert(fingerprint(sc, rep));
  CHECK(fps.size() == orbit.size());
}

TEST_CASE("catalog files round-trip") {
  for (bool reduce : {false, true}) {
    EnumerationOptions opts;
    opts.symmetry_reduce = reduce;
    const auto catalog = enumerate_effects_01(Scenario(2, 2, 2), opts);
    const std::string text = format_catalog(catalog);
    std::istringstream in(text);
    const auto back = parse_catalog(in);
    CHECK(back.scenario == catalog.scenario);
    CHECK(back.symmetry_reduced == catalog.symmetry_reduced);
    REQUIRE(back.entries.size() == catalog.entries.size());
    for (std::size_t i = 0; i < back.entries.size(); ++i) {
      CHECK(back.entries[i].representative == catalog.entries[i].representative);
      CHECK(back.entries[i].fingerprint == catalog.entries[i].fingerprint);
      CHECK(back.entries[i].wiring == catalog.entries[i].wiring);
      CHECK(back.entries[i].class_id == catalog.entries[i].class_id);
      CHECK(back.entries[i].orbit == catalog.entries[i].orbit);
    }
    CHECK(format_catalog(back) == text);
  }
}

TEST_CASE("malformed catalog records report their line") {
  std::istringstream in("#boxlab v1 scenario N=1 nI=2 nO=2\nv=1 1 0 0\n\nv=1 0 1\n");
  try {
    parse_catalog(in);
    FAIL("short record accepted");
  } catch (const ParseError& e) {
    CHECK(e.line() == 4);
  }
  std::istringstream bad_header("#boxlab v2 scenario N=1 nI=2 nO=2\n");
  CHECK_THROWS_AS(parse_catalog(bad_header), ParseError);
  std::istringstream bad_value("#boxlab v1 scenario N=1 nI=2 nO=2\nv=1 x 0 0\n");
  CHECK_THROWS_AS(parse_catalog(bad_value), ParseError);
}
