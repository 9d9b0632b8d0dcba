#pragma once

#include "boxlab/model.hpp"
#include "boxlab/relabelling.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <unordered_set>
#include <vector>

namespace boxlab {

struct IdentityRep {
  SparseVector coords;
  bool is_01 = true;
  bool wiring = false;
  int class_id = -1;       // -1 when classes were not computed
  std::uint64_t orbit = 1;  // size of the representation orbit when classes are known
};

// Representations of the identity effect. In a symmetry-reduced set each
// member stands for its whole orbit.
struct IdentitySet {
  Scenario scenario;
  std::vector<IdentityRep> reps;
  bool symmetry_reduced = false;

  std::size_t class_count() const;
  // Sum of orbit sizes (or member count for full sets), optionally wiring only.
  std::uint64_t total(bool wiring_only = false) const;
};

struct CatalogEntry {
  SparseVector representative;
  Bits fingerprint;  // det-state values; empty unless {0,1}-valued
  Bits canonical;    // lexicographically least fingerprint in the orbit, when known
  bool wiring = false;
  bool deterministic = true;
  int class_id = -1;
  std::uint64_t orbit = 1;
};

struct Catalog {
  Scenario scenario;
  std::vector<CatalogEntry> entries;
  bool symmetry_reduced = false;

  std::size_t class_count() const;
};

struct EnumerationOptions {
  bool symmetry_reduce = false;
  bool classes = true;          // compute class ids and orbit sizes for full runs
  bool wiring_shortcut = true;  // two-party base case in the wiring classifier
  bool progress = false;        // report scanned identity representations on stderr
};

// Worker count: BOXLAB_THREADS when set to a positive integer, else the
// hardware concurrency.
unsigned worker_count();

// Breadth-first closure of the all-inputs-zero identity under +-moves, keeping
// only nonnegative results. Symmetry-reduced runs keep one canonical member
// per orbit.
IdentitySet enumerate_identity_reps_01(const Scenario& scenario, const EnumerationOptions& options = {});

// Deletions of unit entries from every {0,1} identity representation,
// deduplicated by fingerprint. An effect is flagged wiring when any of the
// representations producing it passes the wiring classifier.
Catalog enumerate_effects_01(const Scenario& scenario, const EnumerationOptions& options = {});
Catalog enumerate_effects_01(const IdentitySet& identities, const EnumerationOptions& options = {});

// Full catalog from a symmetry-reduced one: every fingerprint in every class orbit.
Catalog expand_catalog(const Catalog& reduced);
// Distinct effects (by fingerprint) in the orbit of one representation.
std::vector<SparseVector> effect_orbit(const Scenario& scenario, const SparseVector& rep);
// Orbit-expanded representatives of a catalog, optionally wiring entries only.
std::vector<SparseVector> expanded_effects(const Catalog& catalog, bool wiring_only = false);

struct SubEffect {
  SparseVector rep;
  bool deterministic = false;
  std::string label = "extremal-candidate";
};

struct SubEffectOptions {
  // Drop survivors lying in the hull of the catalog plus the other survivors.
  bool mutual_filter = true;
};

// Zeroings of the nonzero entries of a nonnegative identity representation,
// taken up to the symmetries fixing it. Candidates in the convex hull (modulo
// moves) of the known effects and earlier survivors are discarded, as are
// candidates proportional to a larger survivor.
std::vector<SubEffect> sub_effects(const EffectRep& identity_rep, const Catalog& known,
                                   const SubEffectOptions& options = {});

// Reads identity representations from a catalog file, rejecting any record
// that is negative somewhere or whose fingerprint is not all ones.
IdentitySet ingest_identity_vertices(const std::string& path);
IdentitySet ingest_identity_vertices(const Catalog& catalog);

struct ClassRow {
  int class_id = 0;
  bool wiring = false;
  bool deterministic = true;
  std::uint64_t orbit = 0;
  SparseVector representative;
};

struct ClassSummary {
  Scenario scenario;
  std::vector<ClassRow> classes;
  std::uint64_t total = 0;
  std::uint64_t wirings = 0;
  std::uint64_t nonwirings = 0;
  std::size_t wiring_classes = 0;
};

ClassSummary class_summary(const Catalog& catalog);
ClassSummary class_summary(const IdentitySet& identities);
// "classes=7 total=82 wirings=82 nonwirings=0"
std::string summary_line(const ClassSummary& summary);

// Class summary of every {0,1} effect without materializing the catalog; one
// representative is kept per class. Equals class_summary(enumerate_effects_01(...)).
ClassSummary effect_class_summary_01(const Scenario& scenario, const EnumerationOptions& options = {});

// Reduces a full catalog to its class representatives (with orbit sizes).
Catalog class_representatives(const Catalog& catalog);

// Identity representations as catalog entries (fingerprint all ones).
Catalog identity_catalog(const IdentitySet& identities);

// Fingerprints of every sub-effect of every wiring identity representation.
std::unordered_set<Bits, BitsHash> wiring_effect_fingerprints(const Scenario& scenario);

// Recomputes the wiring and det flags of arbitrary records. Identity
// representations go through the wiring classifier; {0,1}-valued effects are
// looked up among the wiring effects; other effects are wiring when they lie in
// the convex hull of the wiring effects.
Catalog classify_catalog(const Catalog& catalog);

}  // namespace boxlab
