// Runs every acceptance criterion with exact equality and prints one PASS/FAIL
// line per criterion. Slow criteria run only with --extended.

#include "CLI11.hpp"

#include "boxlab/enumeration.hpp"
#include "boxlab/errors.hpp"
#include "boxlab/io.hpp"
#include "boxlab/relabelling.hpp"
#include "boxlab/tasks.hpp"
#include "boxlab/validity.hpp"
#include "boxlab/wiring.hpp"
#include "oracles.hpp"

#include <chrono>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace boxlab;

namespace {

const std::string kFixtures = BOXLAB_FIXTURE_DIR;

// Collects the individual checks of one criterion; the criterion passes when all do.
class Check {
 public:
  void expect(bool ok, const std::string& what) {
    if (!ok) failures_.push_back(what);
  }
  template <typename A, typename B>
  void equal(const A& got, const B& want, const std::string& what) {
    std::ostringstream line;
    line << what << '=' << render(got);
    if (!(got == want)) {
      line << " (expected " << render(want) << ')';
      failures_.push_back(line.str());
    }
    measured_.push_back(line.str());
  }
  const std::vector<std::string>& failures() const { return failures_; }
  const std::vector<std::string>& measured() const { return measured_; }

 private:
  template <typename T>
  static std::string render(const T& v) {
    if constexpr (std::is_same_v<T, Rational>) {
      return to_string(v);
    } else if constexpr (std::is_same_v<T, std::string>) {
      return v;
    } else {
      std::ostringstream s;
      s << v;
      return s.str();
    }
  }

  std::vector<std::string> failures_;
  std::vector<std::string> measured_;
};

const Catalog& three_party_catalog() {
  static const Catalog catalog = enumerate_effects_01(Scenario(3, 2, 2));
  return catalog;
}

void effects_counts(Check& c, const Scenario& sc, std::size_t classes, std::uint64_t total) {
  const auto s = effect_class_summary_01(sc);
  c.equal(s.classes.size(), classes, sc.to_string() + " classes");
  c.equal(s.total, total, sc.to_string() + " total");
}

void criterion_bipartite(Check& c) {
  const auto catalog = enumerate_effects_01(Scenario(2, 2, 2));
  c.equal(summary_line(class_summary(catalog)), std::string("classes=7 total=82 wirings=82 nonwirings=0"), "summary");
}

void criterion_identities(Check& c) {
  const auto ids = enumerate_identity_reps_01(Scenario(3, 2, 2));
  const auto s = class_summary(ids);
  c.equal(s.total, 744u, "representations");
  c.equal(s.wirings, 680u, "wiring");
  c.equal(s.classes.size(), 9u, "classes");
  c.equal(s.wiring_classes, 8u, "wiring_classes");
}

void criterion_three_party_effects(Check& c) {
  const Scenario sc(3, 2, 2);
  const auto s = class_summary(three_party_catalog());
  c.equal(s.total, 28886u, "total");
  c.equal(s.nonwirings, 2048u, "nonwirings");
  c.equal(s.classes.size(), 66u, "classes");
  c.equal(s.classes.size() - s.wiring_classes, 3u, "nonwiring_classes");
  std::set<Bits> found;
  for (const auto& e : three_party_catalog().entries)
    if (!e.wiring) found.insert(e.canonical);
  const GroupTable group(sc);
  std::set<Bits> printed;
  for (const auto& e : read_effects(kFixtures + "/nonwiring_classes.txt"))
    printed.insert(group.canonical_fingerprint(fingerprint(e).to_bits()));
  c.equal(printed == found, true, "printed_nonwiring_classes_recovered");
}

void criterion_table(Check& c, bool extended) {
  effects_counts(c, Scenario(2, 2, 3), 44, 8930);
  effects_counts(c, Scenario(2, 3, 2), 7, 248);
  effects_counts(c, Scenario(2, 4, 2), 7, 562);
  effects_counts(c, Scenario(2, 3, 3), 48, 43400);
  if (extended) effects_counts(c, Scenario(2, 2, 4), 523, 2977858);
}

void criterion_larger(Check& c) {
  const auto s = effect_class_summary_01(Scenario(3, 3, 2));
  c.equal(s.classes.size(), 79u, "(3,3,2) classes");
  c.equal(s.wiring_classes, 76u, "(3,3,2) wiring_classes");
  c.equal(s.total, 505136u, "(3,3,2) total");
  c.equal(s.wirings, 449840u, "(3,3,2) wirings");
  c.equal(s.nonwirings, 55296u, "(3,3,2) nonwirings");

  EnumerationOptions reduced;
  reduced.symmetry_reduce = true;
  const auto r = class_summary(enumerate_effects_01(Scenario(4, 2, 2), reduced));
  c.equal(r.classes.size(), 168301u, "(4,2,2) classes");
  c.equal(r.wiring_classes, 124698u, "(4,2,2) wiring_classes");
  c.equal(r.total, std::uint64_t{7940781474}, "(4,2,2) total");
  c.equal(r.wirings, std::uint64_t{4729832866}, "(4,2,2) wirings");
}

void criterion_discrimination(Check& c) {
  const StateRep s1 = read_state(kFixtures + "/s1.txt");
  const StateRep s2 = read_state(kFixtures + "/s2.txt");
  const EffectRep e1 = read_effect(kFixtures + "/e1.txt");
  const EffectRep e1w = read_effect(kFixtures + "/e1_wiring.txt");
  c.equal(Rational(abs(inner(e1, s1) - inner(e1, s2))), Rational(1), "e1_gap");
  const Rational best = max_guessing_wirings(Ensemble::uniform({s1, s2})).value;
  c.equal(best, Rational(5, 6), "wiring_guessing");
  const Rational via_catalog = (1 + boxworld_distance(s1, s2, three_party_catalog(), true).distance) / 2;
  c.equal(via_catalog, Rational(5, 6), "wiring_guessing_catalog");
  c.equal(Rational((1 + abs(inner(e1w, s1) - inner(e1w, s2))) / 2), Rational(5, 6), "witness_guessing");
  c.expect(is_wiring_representation(e1w), "witness passes the wiring classifier");
}

void criterion_fractional(Check& c) {
  const StateRep t1 = read_state(kFixtures + "/t1.txt");
  const StateRep t2 = read_state(kFixtures + "/t2.txt");
  const EffectRep f1 = read_effect(kFixtures + "/f1.txt");
  c.equal(Rational(abs(inner(f1, t1) - inner(f1, t2))), Rational(1), "f1_gap");
  const Rational guessing = (1 + boxworld_distance(t1, t2, three_party_catalog()).distance) / 2;
  c.equal(guessing, Rational(2423, 2592), "catalog_guessing");
}

void criterion_nlwe(Check& c) {
  const NlweFixture f = nlwe_fixture();
  c.equal(guessing_probability(f.ensemble, f.measurement), Rational(1), "perfect");
  c.equal(max_guessing_wirings(f.ensemble).value, Rational(7, 8), "wiring_max");
  c.equal(wiring_bases(Scenario(3, 2, 2)).size(), 680u, "wiring_bases");
}

void criterion_grid(Check& c) {
  for (CrossSection section : {CrossSection::I, CrossSection::III}) {
    const auto rows = distillation_grid(section, 8);
    const std::string name = section == CrossSection::I ? "I" : "III";
    c.equal(rows.size(), 45u, name + " points");
    for (const auto& row : rows) {
      const CrossSectionPoint point{section, row.eta, row.omega};
      const std::string at = name + " (" + to_string(row.eta) + "," + to_string(row.omega) + ")";
      c.expect(row.chsh_final == reference_chsh_polynomial(section, row.eta, row.omega), at + " final");
      c.expect(row.chsh_initial == 2 * (1 + row.omega), at + " initial");
      c.expect(chsh(cross_section_state(point)) == row.chsh_initial, at + " recomputed");
    }
  }
}

void criterion_properties(Check& c) {
  // Every cataloged effect is valid.
  std::size_t invalid = 0;
  for (const Scenario& sc : {Scenario(2, 2, 2), Scenario(3, 2, 2)}) {
    const Catalog& catalog = sc.parties == 3 ? three_party_catalog() : enumerate_effects_01(sc);
    for (const auto& e : catalog.entries)
      invalid += !is_valid_effect(sc, EffectRep(sc, e.representative.to_dense(sc.dimension())));
  }
  c.equal(invalid, 0u, "invalid_effects");

  // Closure against exhaustion.
  for (const Scenario& sc : {Scenario(1, 2, 2), Scenario(2, 2, 2)}) {
    std::set<std::vector<std::uint32_t>> closure;
    for (const auto& r : enumerate_identity_reps_01(sc).reps) closure.insert(r.coords.index);
    c.equal(closure == oracle::brute_force_identities(sc), true, sc.to_string() + " closure_complete");
  }

  // Classifier against explicit sequential procedures.
  {
    const Scenario sc(2, 2, 2);
    const auto trees = oracle::tree_supports(sc);
    WiringOptions literal;
    literal.two_party_shortcut = false;
    std::size_t mismatches = 0;
    for (const auto& r : enumerate_identity_reps_01(sc).reps) {
      const Bits s = r.coords.support(sc.dimension());
      mismatches += is_wiring_representation(sc, s, literal) != (trees.count(s) == 1);
    }
    c.equal(mismatches, 0u, "(2,2,2) classifier_mismatches");
  }

  // Fingerprints do not see no-signalling moves.
  {
    const Scenario sc(3, 2, 2);
    std::mt19937 rng(20);
    std::size_t broken = 0;
    const auto moves = ns_generators(sc);
    for (int t = 0; t < 50; ++t) {
      RationalVector v(sc.dimension());
      for (auto& x : v) x = static_cast<long>(rng() & 1U);
      const Fingerprint base = fingerprint(EffectRep(sc, v));
      for (const auto& m : moves) {
        RationalVector w = v;
        for (auto k : m.plus) w[k] += 1;
        for (auto k : m.minus) w[k] -= 1;
        broken += !(fingerprint(EffectRep(sc, w)) == base);
      }
    }
    c.equal(broken, 0u, "move_invariance_failures");
  }

  // Symmetry-reduced runs reproduce full runs.
  for (const Scenario& sc : {Scenario(2, 2, 2), Scenario(3, 2, 2)}) {
    EnumerationOptions reduced;
    reduced.symmetry_reduce = true;
    const auto full_ids = class_summary(enumerate_identity_reps_01(sc));
    const auto reduced_ids = class_summary(enumerate_identity_reps_01(sc, reduced));
    c.equal(summary_line(reduced_ids) == summary_line(full_ids), true, sc.to_string() + " identities_reduced_eq_full");
    const auto full = class_summary(enumerate_effects_01(sc));
    const auto red = class_summary(enumerate_effects_01(sc, reduced));
    c.equal(summary_line(red) == summary_line(full), true, sc.to_string() + " effects_reduced_eq_full");
  }

  // Foulis-Randall export.
  const auto ids = enumerate_identity_reps_01(Scenario(3, 2, 2));
  c.equal(export_fr_product(ids, FrVariant::Disjunctive).edges.size(), 744u, "disjunctive_edges");
  c.equal(export_fr_product(ids, FrVariant::Maximal).edges.size(), 680u, "maximal_edges");
}

struct Criterion {
  int id;
  std::string title;
  bool extended_only;
  std::function<void(Check&)> run;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  bool extended = false;
  std::vector<int> only;
  app.add_flag("--extended", extended, "also run the slow criteria");
  app.add_option("--only", only, "run only these criteria");
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> criteria = {
      {1, "(2,2,2) effects: 82 in 7 classes, all wirings", false, criterion_bipartite},
      {2, "(3,2,2) identities: 744 (680 wiring), 9 classes (8 wiring)", false, criterion_identities},
      {3, "(3,2,2) effects: 28886, 2048 non-wirings, 66 classes, 3 non-wiring classes", false,
       criterion_three_party_effects},
      {4, "two-party table of classes and totals", false, [&](Check& c) { criterion_table(c, extended); }},
      {5, "(3,3,2) and symmetry-reduced (4,2,2) effects", true, criterion_larger},
      {6, "discrimination of s1, s2: gap 1, wiring guessing 5/6", false, criterion_discrimination},
      {7, "discrimination of t1, t2: gap 1, catalog guessing 2423/2592", false, criterion_fractional},
      {8, "product ensemble: perfect measurement, wiring maximum 7/8", false, criterion_nlwe},
      {9, "distillation grid matches the closed forms", false, criterion_grid},
      {10, "property suites", false, criterion_properties},
  };

  int failed = 0;
  for (const auto& cr : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), cr.id) == only.end()) continue;
    if (cr.extended_only && !extended) {
      std::cout << "criterion " << cr.id << " SKIP (extended): " << cr.title << std::endl;
      continue;
    }
    Check check;
    const auto start = std::chrono::steady_clock::now();
    try {
      cr.run(check);
    } catch (const std::exception& e) {
      check.expect(false, std::string("exception: ") + e.what());
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool ok = check.failures().empty();
    failed += !ok;
    std::cout << "criterion " << cr.id << (ok ? " PASS" : " FAIL") << ": " << cr.title << " ["
              << static_cast<long>(seconds) << "s]";
    for (const auto& m : check.measured()) std::cout << " " << m << ";";
    std::cout << std::endl;
    for (const auto& f : check.failures()) std::cout << "  failed: " << f << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
