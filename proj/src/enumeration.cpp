#include "boxlab/enumeration.hpp"

#include "boxlab/errors.hpp"
#include "boxlab/io.hpp"
#include "boxlab/validity.hpp"
#include "boxlab/wiring.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <map>
#include <memory>
#include <numeric>
#include <set>
#include <stdexcept>
#include <thread>
#include <unordered_map>
#include <unordered_set>

namespace boxlab {

namespace {

constexpr std::size_t kMaxUnits = 24;

Bits identity_bits(const Scenario& sc) {
  Bits b(sc.dimension());
  for (std::size_t i = 0; i < sc.outcome_count(); ++i) b.set(i);
  return b;
}

// Input-difference moves for every pair of inputs, not just against input 0.
// Unlike the generators this set is mapped onto itself by relabellings, which
// the symmetry-reduced closure relies on.
std::vector<NsMove> pairwise_moves(const Scenario& sc) {
  if (sc.inputs == 2) return ns_generators(sc);
  std::vector<NsMove> out;
  for (int p = 0; p < sc.parties; ++p) {
    const auto pp = static_cast<std::size_t>(p);
    for (std::size_t i = 0; i < sc.dimension(); ++i) {
      const Event base = inverse_index(sc, i);
      if (base.settings[pp] != 0 || base.outcomes[pp] != 0) continue;
      for (int x = 0; x < sc.inputs; ++x) {
        for (int y = x + 1; y < sc.inputs; ++y) {
          NsMove m;
          Event ev = base;
          for (int a = 0; a < sc.outputs; ++a) {
            ev.outcomes[pp] = a;
            ev.settings[pp] = x;
            m.plus.push_back(static_cast<std::uint32_t>(flat_index(sc, ev.outcomes, ev.settings)));
            ev.settings[pp] = y;
            m.minus.push_back(static_cast<std::uint32_t>(flat_index(sc, ev.outcomes, ev.settings)));
          }
          out.push_back(std::move(m));
        }
      }
    }
  }
  return out;
}

bool apply_move(const Bits& rep, const std::vector<std::uint32_t>& up, const std::vector<std::uint32_t>& down,
                Bits& out) {
  for (auto k : down)
    if (!rep.test(k)) return false;
  out = rep;
  for (auto k : down) out.reset(k);
  for (auto k : up) {
    // Nonnegative integer identity representations are {0,1}-valued.
    if (out.test(k)) throw std::logic_error("identity closure produced an entry above one");
    out.set(k);
  }
  return true;
}

template <class Visit>
void for_each_neighbour(const Bits& rep, const std::vector<NsMove>& moves, Visit&& visit) {
  Bits next;
  for (const auto& m : moves) {
    if (apply_move(rep, m.plus, m.minus, next)) visit(next);
    if (apply_move(rep, m.minus, m.plus, next)) visit(next);
  }
}

// Runs f(block, begin, end) over contiguous blocks of [0, n), one per worker.
template <class F>
std::size_t run_blocks(std::size_t n, F&& f) {
  const std::size_t blocks = std::max<std::size_t>(1, std::min<std::size_t>(worker_count(), n));
  if (blocks == 1) {
    f(std::size_t{0}, std::size_t{0}, n);
    return 1;
  }
  std::vector<std::thread> threads;
  std::vector<std::exception_ptr> errors(blocks);
  for (std::size_t b = 0; b < blocks; ++b) {
    threads.emplace_back([&, b] {
      try {
        f(b, n * b / blocks, n * (b + 1) / blocks);
      } catch (...) {
        errors[b] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return blocks;
}

void assign_identity_classes(IdentitySet& set, const std::vector<Bits>& bits) {
  const SymmetryTables tables(set.scenario);
  std::unordered_map<Bits, std::size_t, BitsHash> index;
  for (std::size_t i = 0; i < bits.size(); ++i) index.emplace(bits[i], i);
  std::vector<Bits> canonical(bits.size());
  std::vector<bool> done(bits.size(), false);
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (done[i]) continue;
    const auto orbit = tables.representation_orbit(bits[i]);
    const Bits least = *std::min_element(orbit.begin(), orbit.end());
    for (const auto& member : orbit) {
      const auto it = index.find(member);
      if (it == index.end()) throw std::logic_error("identity set is not closed under relabelling");
      canonical[it->second] = least;
      done[it->second] = true;
      set.reps[it->second].orbit = orbit.size();
    }
  }
  std::vector<Bits> distinct = canonical;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  for (std::size_t i = 0; i < bits.size(); ++i)
    set.reps[i].class_id =
        static_cast<int>(std::lower_bound(distinct.begin(), distinct.end(), canonical[i]) - distinct.begin());
}

IdentitySet closure_full(const Scenario& sc, const EnumerationOptions& options) {
  const auto moves = ns_generators(sc);
  std::vector<Bits> found{identity_bits(sc)};
  std::unordered_set<Bits, BitsHash> seen{found.front()};
  for (std::size_t i = 0; i < found.size(); ++i) {
    const Bits current = found[i];
    for_each_neighbour(current, moves, [&](const Bits& next) {
      if (seen.insert(next).second) found.push_back(next);
    });
  }
  IdentitySet set;
  set.scenario = sc;
  const WiringOptions wopts{options.wiring_shortcut};
  for (const auto& b : found) {
    IdentityRep rep;
    rep.coords = SparseVector::from_bits(b);
    rep.wiring = is_wiring_representation(sc, b, wopts);
    set.reps.push_back(std::move(rep));
  }
  if (options.classes) assign_identity_classes(set, found);
  return set;
}

IdentitySet closure_reduced(const Scenario& sc, const EnumerationOptions& options) {
  const GroupTable table(sc);
  const auto moves = pairwise_moves(sc);
  std::size_t stab = 0;
  std::vector<Bits> found{table.canonical_representation(identity_bits(sc), &stab)};
  std::vector<std::uint64_t> orbits{table.order() / stab};
  std::unordered_set<Bits, BitsHash> seen{found.front()};
  for (std::size_t i = 0; i < found.size(); ++i) {
    const Bits current = found[i];
    for_each_neighbour(current, moves, [&](const Bits& next) {
      Bits c = table.canonical_representation(next, &stab);
      if (seen.insert(c).second) {
        found.push_back(std::move(c));
        orbits.push_back(table.order() / stab);
      }
    });
  }
  std::vector<std::size_t> order(found.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return found[a] < found[b]; });
  IdentitySet set;
  set.scenario = sc;
  set.symmetry_reduced = true;
  const WiringOptions wopts{options.wiring_shortcut};
  for (std::size_t k = 0; k < order.size(); ++k) {
    const Bits& b = found[order[k]];
    IdentityRep rep;
    rep.coords = SparseVector::from_bits(b);
    rep.wiring = is_wiring_representation(sc, b, wopts);
    rep.class_id = static_cast<int>(k);
    rep.orbit = orbits[order[k]];
    set.reps.push_back(std::move(rep));
  }
  return set;
}

// Effect found by the deletion scan: the subset `mask` of the units of
// identity representation `rep`.
struct Partial {
  std::size_t rep = 0;
  std::uint32_t mask = 0;
  bool wiring = false;
};

struct Block {
  std::vector<Bits> order;
  std::unordered_map<Bits, Partial, BitsHash> found;
};

Bits subset_of(const std::vector<std::size_t>& units, std::size_t dimension, std::uint32_t mask) {
  Bits b(dimension);
  for (std::size_t k = 0; k < units.size(); ++k)
    if ((mask >> k) & 1U) b.set(units[k]);
  return b;
}

class DeletionScan {
 public:
  DeletionScan(const Scenario& sc, const std::vector<Bits>& reps, const std::vector<bool>& parent_wiring,
               const GroupTable* table, const WiringOptions& wopts)
      : sc_(sc), geo_(sc), reps_(reps), parent_wiring_(parent_wiring), table_(table), wopts_(wopts) {}

  void scan(std::size_t r, Block& block) const {
    const Bits& rep = reps_[r];
    const auto units = rep.positions();
    const std::size_t k = units.size();
    if (k > kMaxUnits) throw DomainError("identity representation has too many unit entries to enumerate subsets");
    const std::size_t dets = sc_.det_state_count();
    const std::size_t words = (dets + 63) / 64;
    const std::size_t subsets = std::size_t{1} << k;
    std::vector<std::uint64_t> table(subsets * words, 0);
    for (std::size_t mask = 1; mask < subsets; ++mask) {
      const std::size_t low = static_cast<std::size_t>(std::countr_zero(mask));
      const std::size_t prev = mask & (mask - 1);
      const auto cover = geo_.coordinate_cover(units[low]).words();
      for (std::size_t w = 0; w < words; ++w) table[mask * words + w] = table[prev * words + w] | cover[w];
    }
    // Reduced runs skip subsets that a symmetry of the representation maps to a
    // smaller mask; they give the same effect class and wiring status.
    const auto unit_perms = table_ ? stabilizer_unit_perms(units) : std::vector<std::vector<std::uint8_t>>{};
    Bits fp(dets);
    Bits canon;
    for (std::size_t mask = 0; mask < subsets; ++mask) {
      if (!unit_perms.empty() && !minimal_under(mask, unit_perms)) continue;
      auto out = fp.mutable_words();
      std::copy_n(table.begin() + static_cast<std::ptrdiff_t>(mask * words), words, out.begin());
      const Bits* key = &fp;
      if (table_) {
        canon = table_->canonical_fingerprint(fp);
        key = &canon;
      }
      const auto m = static_cast<std::uint32_t>(mask);
      auto it = block.found.find(*key);
      if (it == block.found.end()) {
        const bool w = parent_wiring_[r] || is_wiring_representation(sc_, subset_of(units, sc_.dimension(), m), wopts_);
        block.found.emplace(*key, Partial{r, m, w});
        block.order.push_back(*key);
      } else if (!it->second.wiring) {
        if (parent_wiring_[r] || is_wiring_representation(sc_, subset_of(units, sc_.dimension(), m), wopts_))
          it->second = Partial{r, m, true};
      }
    }
  }

  const Geometry& geometry() const { return geo_; }

 private:
  // Distinct permutations of the unit positions induced by group elements that fix rep.
  std::vector<std::vector<std::uint8_t>> stabilizer_unit_perms(const std::vector<std::size_t>& units) const {
    std::vector<int> slot(sc_.dimension(), -1);
    for (std::size_t j = 0; j < units.size(); ++j) slot[units[j]] = static_cast<int>(j);
    const std::size_t order = table_->order();
    std::vector<std::uint8_t> images(order * units.size());
    std::vector<bool> fixes(order, true);
    for (std::size_t j = 0; j < units.size(); ++j)
      for (std::size_t g = 0; g < order; ++g) {
        const int k = slot[table_->coordinate_preimage(g, units[j])];
        if (k < 0) fixes[g] = false;
        else images[g * units.size() + j] = static_cast<std::uint8_t>(k);
      }
    std::set<std::vector<std::uint8_t>> perms;
    for (std::size_t g = 0; g < order; ++g)
      if (fixes[g]) {
        const auto* first = images.data() + g * units.size();
        perms.emplace(first, first + units.size());
      }
    return {perms.begin(), perms.end()};
  }

  static bool minimal_under(std::size_t mask, const std::vector<std::vector<std::uint8_t>>& perms) {
    for (const auto& perm : perms) {
      std::size_t image = 0;
      for (std::size_t j = 0; j < perm.size(); ++j)
        if ((mask >> j) & 1U) image |= std::size_t{1} << perm[j];
      if (image < mask) return false;
    }
    return true;
  }

 public:

 private:
  Scenario sc_;
  Geometry geo_;
  const std::vector<Bits>& reps_;
  const std::vector<bool>& parent_wiring_;
  const GroupTable* table_;
  WiringOptions wopts_;
};

void assign_effect_classes(Catalog& catalog) {
  const SymmetryTables tables(catalog.scenario);
  std::unordered_map<Bits, std::size_t, BitsHash> index;
  for (std::size_t i = 0; i < catalog.entries.size(); ++i) index.emplace(catalog.entries[i].fingerprint, i);
  std::vector<bool> done(catalog.entries.size(), false);
  for (std::size_t i = 0; i < catalog.entries.size(); ++i) {
    if (done[i]) continue;
    const auto orbit = tables.fingerprint_orbit(catalog.entries[i].fingerprint);
    const Bits least = *std::min_element(orbit.begin(), orbit.end());
    for (const auto& member : orbit) {
      const auto it = index.find(member);
      if (it == index.end()) throw std::logic_error("catalog is not closed under relabelling");
      auto& entry = catalog.entries[it->second];
      if (entry.wiring != catalog.entries[i].wiring) throw std::logic_error("wiring flag differs within a class");
      entry.canonical = least;
      entry.orbit = orbit.size();
      done[it->second] = true;
    }
  }
  std::vector<Bits> distinct;
  for (const auto& e : catalog.entries) distinct.push_back(e.canonical);
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  for (auto& e : catalog.entries)
    e.class_id = static_cast<int>(std::lower_bound(distinct.begin(), distinct.end(), e.canonical) - distinct.begin());
}

void sort_entries(Catalog& catalog) {
  std::stable_sort(catalog.entries.begin(), catalog.entries.end(), [](const CatalogEntry& a, const CatalogEntry& b) {
    if (a.class_id != b.class_id) return a.class_id < b.class_id;
    return a.fingerprint < b.fingerprint;
  });
}

IdentitySet expand_identities(const IdentitySet& reduced) {
  IdentitySet out;
  out.scenario = reduced.scenario;
  const SymmetryTables tables(reduced.scenario);
  const std::size_t dim = reduced.scenario.dimension();
  for (const auto& rep : reduced.reps) {
    if (!rep.is_01) continue;
    for (const auto& member : tables.representation_orbit(rep.coords.support(dim))) {
      IdentityRep r = rep;
      r.coords = SparseVector::from_bits(member);
      out.reps.push_back(std::move(r));
    }
  }
  return out;
}

std::uint64_t class_orbit_total(const std::map<int, ClassRow>& rows, bool wiring_only) {
  std::uint64_t total = 0;
  for (const auto& [id, row] : rows)
    if (!wiring_only || row.wiring) total += row.orbit;
  return total;
}

}  // namespace

unsigned worker_count() {
  if (const char* env = std::getenv("BOXLAB_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1U, std::thread::hardware_concurrency());
}

std::size_t IdentitySet::class_count() const {
  if (symmetry_reduced) return reps.size();
  std::unordered_set<int> ids;
  for (const auto& r : reps) ids.insert(r.class_id);
  return ids.size();
}

std::uint64_t IdentitySet::total(bool wiring_only) const {
  std::uint64_t t = 0;
  for (const auto& r : reps)
    if (!wiring_only || r.wiring) t += symmetry_reduced ? r.orbit : 1;
  return t;
}

std::size_t Catalog::class_count() const {
  std::unordered_set<int> ids;
  for (const auto& e : entries) ids.insert(e.class_id);
  return ids.size();
}

IdentitySet enumerate_identity_reps_01(const Scenario& scenario, const EnumerationOptions& options) {
  return options.symmetry_reduce ? closure_reduced(scenario, options) : closure_full(scenario, options);
}

Catalog enumerate_effects_01(const Scenario& scenario, const EnumerationOptions& options) {
  EnumerationOptions identity_options = options;
  identity_options.classes = false;
  return enumerate_effects_01(enumerate_identity_reps_01(scenario, identity_options), options);
}

namespace {

struct ScanResult {
  std::vector<Bits> reps;
  Block merged;
};

ScanResult run_deletion_scan(const IdentitySet& identities, const EnumerationOptions& options,
                             const GroupTable* table) {
  const Scenario& sc = identities.scenario;
  const IdentitySet* source = &identities;
  IdentitySet expanded;
  if (identities.symmetry_reduced && !options.symmetry_reduce) {
    expanded = expand_identities(identities);
    source = &expanded;
  }
  ScanResult result;
  std::vector<bool> parent_wiring;
  for (const auto& r : source->reps) {
    if (!r.is_01 || !r.coords.is_01_valued()) continue;
    result.reps.push_back(r.coords.support(sc.dimension()));
    parent_wiring.push_back(r.wiring);
  }
  const auto& reps = result.reps;
  const DeletionScan scan(sc, reps, parent_wiring, table, WiringOptions{options.wiring_shortcut});

  std::vector<Block> blocks(std::max<std::size_t>(1, std::min<std::size_t>(worker_count(), reps.size())));
  std::atomic<std::size_t> done{0};
  run_blocks(reps.size(), [&](std::size_t b, std::size_t begin, std::size_t end) {
    for (std::size_t r = begin; r < end; ++r) {
      scan.scan(r, blocks[b]);
      const std::size_t d = ++done;
      if (options.progress) std::fprintf(stderr, "scanned %zu/%zu\n", d, reps.size());
    }
  });

  // Merge in block order so the result does not depend on the worker count.
  Block& merged = result.merged;
  merged = std::move(blocks.front());
  for (std::size_t b = 1; b < blocks.size(); ++b) {
    auto& block = blocks[b];
    for (const auto& key : block.order) {
      const Partial& p = block.found.at(key);
      auto it = merged.found.find(key);
      if (it == merged.found.end()) {
        merged.found.emplace(key, p);
        merged.order.push_back(key);
      } else if (!it->second.wiring && p.wiring) {
        it->second = p;
      }
    }
    block = Block{};
  }
  return result;
}

}  // namespace

Catalog enumerate_effects_01(const IdentitySet& identities, const EnumerationOptions& options) {
  const Scenario& sc = identities.scenario;
  std::unique_ptr<GroupTable> table;
  if (options.symmetry_reduce) table = std::make_unique<GroupTable>(sc);
  const ScanResult scanned = run_deletion_scan(identities, options, table.get());
  const auto& reps = scanned.reps;
  const Block& merged = scanned.merged;
  const Geometry geo(sc);

  Catalog catalog;
  catalog.scenario = sc;
  catalog.symmetry_reduced = options.symmetry_reduce;
  const std::size_t dim = sc.dimension();
  for (const auto& key : merged.order) {
    const Partial& p = merged.found.at(key);
    const Bits subset = subset_of(reps[p.rep].positions(), dim, p.mask);
    CatalogEntry entry;
    entry.representative = SparseVector::from_bits(subset);
    entry.fingerprint = geo.subset_fingerprint(subset);
    entry.wiring = p.wiring;
    entry.deterministic = true;
    if (table) {
      std::size_t stab = 0;
      entry.canonical = table->canonical_fingerprint(entry.fingerprint, &stab);
      entry.orbit = table->order() / stab;
    }
    catalog.entries.push_back(std::move(entry));
  }
  if (table) {
    std::sort(catalog.entries.begin(), catalog.entries.end(),
              [](const CatalogEntry& a, const CatalogEntry& b) { return a.canonical < b.canonical; });
    for (std::size_t i = 0; i < catalog.entries.size(); ++i) catalog.entries[i].class_id = static_cast<int>(i);
  } else if (options.classes) {
    assign_effect_classes(catalog);
    sort_entries(catalog);
  } else {
    std::sort(catalog.entries.begin(), catalog.entries.end(),
              [](const CatalogEntry& a, const CatalogEntry& b) { return a.fingerprint < b.fingerprint; });
  }
  return catalog;
}

std::vector<SparseVector> effect_orbit(const Scenario& scenario, const SparseVector& rep) {
  const SymmetryTables tables(scenario);
  std::vector<SparseVector> out{rep};
  std::vector<Fingerprint> fps{fingerprint(scenario, rep)};
  std::unordered_set<Fingerprint, FingerprintHash> seen{fps.front()};
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (std::size_t g = 0; g < tables.generators().size(); ++g) {
      Fingerprint f = apply_map(tables.det_maps()[g], fps[i]);
      if (!seen.insert(f).second) continue;
      out.push_back(apply_map(tables.coord_maps()[g], out[i]));
      fps.push_back(std::move(f));
    }
  }
  return out;
}

Catalog expand_catalog(const Catalog& reduced) {
  if (!reduced.symmetry_reduced) return reduced;
  Catalog out;
  out.scenario = reduced.scenario;
  const SymmetryTables tables(reduced.scenario);
  const std::size_t dim = reduced.scenario.dimension();
  const Geometry geo(reduced.scenario);
  for (const auto& entry : reduced.entries) {
    if (entry.fingerprint.size() == 0) {
      for (auto& rep : effect_orbit(reduced.scenario, entry.representative)) {
        CatalogEntry e = entry;
        e.representative = std::move(rep);
        out.entries.push_back(std::move(e));
      }
      continue;
    }
    std::vector<CatalogEntry> members{entry};
    std::unordered_set<Bits, BitsHash> seen{entry.fingerprint};
    for (std::size_t i = 0; i < members.size(); ++i) {
      for (std::size_t g = 0; g < tables.generators().size(); ++g) {
        Bits f = apply_map(tables.det_maps()[g], members[i].fingerprint);
        if (!seen.insert(f).second) continue;
        CatalogEntry e = entry;
        e.representative = apply_map(tables.coord_maps()[g], members[i].representative);
        e.fingerprint = std::move(f);
        members.push_back(std::move(e));
      }
    }
    if (members.size() != entry.orbit)
      throw std::logic_error("orbit size recorded for class " + std::to_string(entry.class_id) + " is inconsistent");
    for (auto& m : members) out.entries.push_back(std::move(m));
  }
  (void)dim;
  sort_entries(out);
  return out;
}

std::vector<SparseVector> expanded_effects(const Catalog& catalog, bool wiring_only) {
  std::vector<SparseVector> out;
  if (!catalog.symmetry_reduced) {
    for (const auto& e : catalog.entries)
      if (!wiring_only || e.wiring) out.push_back(e.representative);
    return out;
  }
  Catalog filtered;
  filtered.scenario = catalog.scenario;
  filtered.symmetry_reduced = true;
  for (const auto& e : catalog.entries)
    if (!wiring_only || e.wiring) filtered.entries.push_back(e);
  for (auto& e : expand_catalog(filtered).entries) out.push_back(std::move(e.representative));
  return out;
}

std::vector<SubEffect> sub_effects(const EffectRep& identity_rep, const Catalog& known,
                                   const SubEffectOptions& options) {
  const Scenario& sc = identity_rep.scenario;
  if (known.scenario != sc) throw DomainError("known effects belong to a different scenario");
  if (!is_nonnegative(identity_rep.coords) || !is_identity(identity_rep))
    throw DomainError("sub-effects need a nonnegative representation of the identity");

  std::vector<std::uint32_t> nonzero;
  for (std::size_t i = 0; i < identity_rep.coords.size(); ++i)
    if (!is_zero(identity_rep.coords[i])) nonzero.push_back(static_cast<std::uint32_t>(i));
  const std::size_t k = nonzero.size();
  if (k > 26) throw DomainError("too many nonzero entries to enumerate zeroings");

  // Integer weights over a common denominator q; fingerprints of zeroings are
  // then integer vectors with entries in [0, q].
  mpz_class q = 1;
  for (auto i : nonzero) q = lcm(q, identity_rep.coords[i].get_den());
  if (!q.fits_sint_p() || q > 1000000) throw DomainError("denominator too large for zeroing enumeration");
  std::vector<int> weight(k);
  for (std::size_t j = 0; j < k; ++j) {
    const Rational w = identity_rep.coords[nonzero[j]] * Rational(q);
    weight[j] = static_cast<int>(w.get_num().get_si());
  }
  const int scale = static_cast<int>(q.get_si());

  const Geometry geo(sc);
  const std::size_t dets = sc.det_state_count();
  std::vector<std::vector<std::uint32_t>> cover(k);
  for (std::size_t j = 0; j < k; ++j)
    geo.coordinate_cover(nonzero[j]).for_each_set([&](std::size_t d) { cover[j].push_back(static_cast<std::uint32_t>(d)); });

  // Symmetries fixing the representation, as permutations of its nonzero entries.
  std::vector<int> slot(sc.dimension(), -1);
  for (std::size_t j = 0; j < k; ++j) slot[nonzero[j]] = static_cast<int>(j);
  std::vector<std::vector<int>> stabilizer;
  for_each_relabelling(sc, [&](const Relabelling& g) {
    const auto map = coordinate_map(sc, g);
    std::vector<int> perm(k);
    bool fixes = true, trivial = true;
    for (std::size_t j = 0; j < k && fixes; ++j) {
      const int target = slot[map[nonzero[j]]];
      if (target < 0 || identity_rep.coords[nonzero[static_cast<std::size_t>(target)]] != identity_rep.coords[nonzero[j]])
        fixes = false;
      perm[j] = target;
      trivial = trivial && target == static_cast<int>(j);
    }
    if (fixes && !trivial) stabilizer.push_back(std::move(perm));
  });
  std::sort(stabilizer.begin(), stabilizer.end());
  stabilizer.erase(std::unique(stabilizer.begin(), stabilizer.end()), stabilizer.end());

  // Known {0,1} fingerprints, for the level-set shortcut.
  const auto known_reps = expanded_effects(known);
  std::unordered_set<Bits, BitsHash> known_bits;
  for (const auto& rep : known_reps) {
    const Fingerprint f = fingerprint(sc, rep);
    if (f.is_01_valued()) known_bits.insert(f.to_bits());
  }

  // Largest member of every ray of candidate fingerprints.
  struct Candidate {
    std::vector<int> values;
    std::uint32_t mask = 0;
    int multiple = 0;
  };
  std::map<std::vector<int>, Candidate> rays;
  std::vector<int> values(dets, 0);
  Bits level(dets);
  auto covered_by_levels = [&](int top) {
    for (int l = 1; l <= top; ++l) {
      level.clear();
      for (std::size_t d = 0; d < dets; ++d)
        if (values[d] >= l) level.set(d);
      if (!level.none() && !known_bits.count(level)) return false;
    }
    return true;
  };
  std::uint32_t mask = 0;
  const std::uint64_t total = std::uint64_t{1} << k;
  for (std::uint64_t step = 0; step < total; ++step) {
    if (step > 0) {
      const auto j = static_cast<std::size_t>(std::countr_zero(step));
      mask ^= std::uint32_t{1} << j;
      const int delta = ((mask >> j) & 1U) ? weight[j] : -weight[j];
      for (auto d : cover[j]) values[d] += delta;
    }
    bool least = true;
    for (const auto& perm : stabilizer) {
      std::uint32_t image = 0;
      for (std::size_t j = 0; j < k; ++j)
        if ((mask >> j) & 1U) image |= std::uint32_t{1} << perm[j];
      if (image < mask) {
        least = false;
        break;
      }
    }
    if (!least) continue;
    const int top = *std::max_element(values.begin(), values.end());
    if (top == 0 || covered_by_levels(top)) continue;
    int g = 0;
    for (int v : values) g = std::gcd(g, v);
    std::vector<int> ray(values);
    for (auto& v : ray) v /= g;
    auto [it, inserted] = rays.try_emplace(std::move(ray));
    if (inserted || g > it->second.multiple) it->second = Candidate{values, mask, g};
  }

  std::vector<Candidate> order;
  for (auto& [ray, c] : rays) order.push_back(std::move(c));
  std::sort(order.begin(), order.end(), [](const Candidate& a, const Candidate& b) {
    const long sa = std::accumulate(a.values.begin(), a.values.end(), 0L);
    const long sb = std::accumulate(b.values.begin(), b.values.end(), 0L);
    if (sa != sb) return sa > sb;
    return a.values < b.values;
  });

  auto rep_of = [&](std::uint32_t m) {
    SparseVector v;
    for (std::size_t j = 0; j < k; ++j) {
      if (!((m >> j) & 1U)) continue;
      v.index.push_back(nonzero[j]);
      v.value.push_back(identity_rep.coords[nonzero[j]]);
    }
    return v;
  };

  // Survivors stand for their images under the stabilizer; the hull tests
  // need those images too.
  auto images_of = [&](std::uint32_t m) {
    std::vector<std::uint32_t> out{m};
    for (const auto& perm : stabilizer) {
      std::uint32_t image = 0;
      for (std::size_t j = 0; j < k; ++j)
        if ((m >> j) & 1U) image |= std::uint32_t{1} << perm[j];
      out.push_back(image);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  };

  HullIndex base(sc);
  for (const auto& rep : known_reps) base.add(rep);
  auto fingerprint_of = [&](std::uint32_t m) { return fingerprint(sc, rep_of(m)); };

  HullIndex pool = base;
  std::vector<std::uint32_t> accepted;
  std::vector<bool> deterministic;
  for (const auto& c : order) {
    Fingerprint f;
    f.values.reserve(dets);
    for (int v : c.values) f.values.push_back(Rational(v, scale));
    for (auto& v : f.values) v.canonicalize();
    if (pool.contains(f)) continue;
    for (auto image : images_of(c.mask)) pool.add(fingerprint_of(image));
    accepted.push_back(c.mask);
    deterministic.push_back(std::all_of(c.values.begin(), c.values.end(),
                                        [&](int v) { return v == 0 || v == scale; }));
  }

  std::vector<bool> keep(accepted.size(), true);
  if (options.mutual_filter) {
    for (std::size_t i = accepted.size(); i-- > 0;) {
      HullIndex others = base;
      for (std::size_t j = 0; j < accepted.size(); ++j) {
        if (!keep[j]) continue;
        for (auto image : images_of(accepted[j]))
          if (image != accepted[i]) others.add(fingerprint_of(image));
      }
      if (others.contains(fingerprint_of(accepted[i]))) keep[i] = false;
    }
  }
  std::vector<SubEffect> out;
  for (std::size_t i = 0; i < accepted.size(); ++i)
    if (keep[i]) out.push_back(SubEffect{rep_of(accepted[i]), deterministic[i], "extremal-candidate"});
  return out;
}

IdentitySet ingest_identity_vertices(const std::string& path) {
  std::vector<std::size_t> lines;
  const Catalog catalog = read_catalog(path, &lines);
  IdentitySet set;
  set.scenario = catalog.scenario;
  for (std::size_t i = 0; i < catalog.entries.size(); ++i) {
    const auto& rep = catalog.entries[i].representative;
    const std::size_t line = i < lines.size() ? lines[i] : 0;
    for (const auto& v : rep.value)
      if (sgn(v) < 0) throw ParseError(line, "identity vertex has a negative entry");
    if (!fingerprint(catalog.scenario, rep).all_ones())
      throw ParseError(line, "record is not a representation of the identity");
    IdentityRep r;
    r.coords = rep;
    r.is_01 = rep.is_01_valued();
    r.wiring = r.is_01 && is_wiring_representation(catalog.scenario, rep.support(catalog.scenario.dimension()));
    r.class_id = catalog.entries[i].class_id;
    r.orbit = catalog.entries[i].orbit;
    set.reps.push_back(std::move(r));
  }
  return set;
}

IdentitySet ingest_identity_vertices(const Catalog& catalog) {
  IdentitySet set;
  set.scenario = catalog.scenario;
  for (const auto& entry : catalog.entries) {
    const auto& rep = entry.representative;
    for (const auto& v : rep.value)
      if (sgn(v) < 0) throw DomainError("identity vertex has a negative entry");
    if (!fingerprint(catalog.scenario, rep).all_ones())
      throw DomainError("record is not a representation of the identity");
    IdentityRep r;
    r.coords = rep;
    r.is_01 = rep.is_01_valued();
    r.wiring = r.is_01 && is_wiring_representation(catalog.scenario, rep.support(catalog.scenario.dimension()));
    r.class_id = entry.class_id;
    r.orbit = entry.orbit;
    set.reps.push_back(std::move(r));
  }
  return set;
}

ClassSummary class_summary(const Catalog& catalog) {
  ClassSummary s;
  s.scenario = catalog.scenario;
  std::map<int, ClassRow> rows;
  int next_unclassified = -1;
  for (const auto& e : catalog.entries) {
    const int id = e.class_id >= 0 ? e.class_id : next_unclassified--;
    auto [it, inserted] = rows.try_emplace(id);
    if (inserted) it->second = ClassRow{id, e.wiring, e.deterministic, e.orbit, e.representative};
    else it->second.wiring = it->second.wiring || e.wiring;
  }
  for (const auto& [id, row] : rows) {
    s.classes.push_back(row);
    if (row.wiring) ++s.wiring_classes;
  }
  s.total = class_orbit_total(rows, false);
  s.wirings = class_orbit_total(rows, true);
  s.nonwirings = s.total - s.wirings;
  return s;
}

ClassSummary class_summary(const IdentitySet& identities) {
  ClassSummary s;
  s.scenario = identities.scenario;
  std::map<int, ClassRow> rows;
  int next_unclassified = -1;
  for (const auto& r : identities.reps) {
    const int id = r.class_id >= 0 ? r.class_id : next_unclassified--;
    auto [it, inserted] = rows.try_emplace(id);
    if (inserted) it->second = ClassRow{id, r.wiring, r.is_01, identities.symmetry_reduced || r.class_id >= 0 ? r.orbit : 1, r.coords};
  }
  for (const auto& [id, row] : rows) {
    s.classes.push_back(row);
    if (row.wiring) ++s.wiring_classes;
  }
  s.total = class_orbit_total(rows, false);
  s.wirings = class_orbit_total(rows, true);
  s.nonwirings = s.total - s.wirings;
  return s;
}

std::string summary_line(const ClassSummary& summary) {
  return "classes=" + std::to_string(summary.classes.size()) + " total=" + std::to_string(summary.total) +
         " wirings=" + std::to_string(summary.wirings) + " nonwirings=" + std::to_string(summary.nonwirings);
}

Catalog class_representatives(const Catalog& catalog) {
  if (catalog.symmetry_reduced) return catalog;
  Catalog out;
  out.scenario = catalog.scenario;
  out.symmetry_reduced = true;
  std::map<int, std::size_t> chosen;
  for (std::size_t i = 0; i < catalog.entries.size(); ++i) {
    const auto& e = catalog.entries[i];
    if (e.class_id < 0) throw DomainError("catalog has no class annotations");
    auto [it, inserted] = chosen.try_emplace(e.class_id, i);
    if (!inserted && e.canonical.size() > 0 && e.fingerprint == e.canonical) it->second = i;
  }
  for (const auto& [id, i] : chosen) out.entries.push_back(catalog.entries[i]);
  return out;
}

Catalog identity_catalog(const IdentitySet& identities) {
  const Scenario& sc = identities.scenario;
  Catalog out;
  out.scenario = sc;
  out.symmetry_reduced = identities.symmetry_reduced;
  for (const auto& r : identities.reps) {
    CatalogEntry e;
    e.representative = r.coords;
    e.deterministic = true;
    e.fingerprint = Bits(sc.det_state_count());
    for (std::size_t d = 0; d < sc.det_state_count(); ++d) e.fingerprint.set(d);
    e.wiring = r.wiring;
    e.class_id = r.class_id;
    e.orbit = r.orbit;
    out.entries.push_back(std::move(e));
  }
  return out;
}

std::unordered_set<Bits, BitsHash> wiring_effect_fingerprints(const Scenario& scenario) {
  const Geometry geo(scenario);
  std::unordered_set<Bits, BitsHash> out;
  for (const auto& base : wiring_bases(scenario)) {
    const auto atoms = base.positions();
    if (atoms.size() >= 32) throw DomainError("wiring base too large to expand");
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << atoms.size()); ++mask) {
      Bits subset(scenario.dimension());
      for (std::size_t i = 0; i < atoms.size(); ++i)
        if ((mask >> i) & 1U) subset.set(atoms[i]);
      out.insert(geo.subset_fingerprint(subset));
    }
  }
  return out;
}

Catalog classify_catalog(const Catalog& catalog) {
  const Scenario& sc = catalog.scenario;
  Catalog out = catalog;
  std::unordered_set<Bits, BitsHash> wiring_fps;
  std::unique_ptr<HullIndex> hull;
  auto ensure_fps = [&] {
    if (wiring_fps.empty()) wiring_fps = wiring_effect_fingerprints(sc);
  };
  for (auto& e : out.entries) {
    const Fingerprint fp = fingerprint(sc, e.representative);
    e.deterministic = fp.is_01_valued();
    e.fingerprint = e.deterministic ? fp.to_bits() : Bits();
    if (fp.all_ones() && e.representative.is_01_valued()) {
      e.wiring = is_wiring_representation(sc, e.representative.support(sc.dimension()));
    } else if (e.deterministic) {
      ensure_fps();
      e.wiring = wiring_fps.count(e.fingerprint) > 0;
    } else {
      ensure_fps();
      if (!hull) {
        hull = std::make_unique<HullIndex>(sc);
        for (const auto& f : wiring_fps) hull->add(Fingerprint::from_bits(f));
      }
      e.wiring = hull->contains(fp);
    }
  }
  return out;
}

ClassSummary effect_class_summary_01(const Scenario& scenario, const EnumerationOptions& options) {
  if (options.symmetry_reduce) return class_summary(enumerate_effects_01(scenario, options));
  EnumerationOptions identity_options = options;
  identity_options.classes = false;
  ScanResult scanned = run_deletion_scan(enumerate_identity_reps_01(scenario, identity_options), options, nullptr);
  auto& found = scanned.merged.found;
  const SymmetryTables tables(scenario);
  const std::size_t dim = scenario.dimension();
  std::vector<std::pair<Bits, ClassRow>> rows;
  for (const auto& key : scanned.merged.order) {
    if (!found.count(key)) continue;
    const auto orbit = tables.fingerprint_orbit(key);
    const Bits least = *std::min_element(orbit.begin(), orbit.end());
    const Partial first = found.at(key);
    const Partial rep = found.at(least);
    for (const auto& member : orbit) {
      const auto it = found.find(member);
      if (it == found.end()) throw std::logic_error("effects are not closed under relabelling");
      if (it->second.wiring != first.wiring) throw std::logic_error("wiring flag differs within a class");
      found.erase(it);
    }
    ClassRow row;
    row.wiring = first.wiring;
    row.orbit = orbit.size();
    row.representative = SparseVector::from_bits(subset_of(scanned.reps[rep.rep].positions(), dim, rep.mask));
    rows.emplace_back(least, std::move(row));
  }
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  ClassSummary s;
  s.scenario = scenario;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    ClassRow& row = rows[i].second;
    row.class_id = static_cast<int>(i);
    s.total += row.orbit;
    if (row.wiring) {
      s.wirings += row.orbit;
      ++s.wiring_classes;
    }
    s.classes.push_back(std::move(row));
  }
  s.nonwirings = s.total - s.wirings;
  return s;
}

}  // namespace boxlab
