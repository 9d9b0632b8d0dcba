#include "boxlab/relabelling.hpp"

#include "boxlab/errors.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

namespace boxlab {

namespace {

std::vector<int> iota_perm(int n) {
  std::vector<int> p(static_cast<std::size_t>(n));
  std::iota(p.begin(), p.end(), 0);
  return p;
}

bool is_permutation_of(const std::vector<int>& p, int n) {
  if (p.size() != static_cast<std::size_t>(n)) return false;
  std::vector<bool> seen(p.size(), false);
  for (int v : p) {
    if (v < 0 || v >= n || seen[static_cast<std::size_t>(v)]) return false;
    seen[static_cast<std::size_t>(v)] = true;
  }
  return true;
}

std::vector<int> invert(const std::vector<int>& p) {
  std::vector<int> inv(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) inv[static_cast<std::size_t>(p[i])] = static_cast<int>(i);
  return inv;
}

void require_compatible(const Scenario& scenario, const Relabelling& g) {
  if (!g.compatible(scenario)) throw DomainError("relabelling does not match scenario " + scenario.to_string());
}

}  // namespace

Relabelling Relabelling::identity(const Scenario& scenario) {
  Relabelling g;
  g.party_perm = iota_perm(scenario.parties);
  g.input_perms.assign(static_cast<std::size_t>(scenario.parties), iota_perm(scenario.inputs));
  g.output_perms.assign(static_cast<std::size_t>(scenario.parties),
                        std::vector<std::vector<int>>(static_cast<std::size_t>(scenario.inputs),
                                                      iota_perm(scenario.outputs)));
  return g;
}

bool Relabelling::compatible(const Scenario& scenario) const {
  if (!is_permutation_of(party_perm, scenario.parties)) return false;
  if (input_perms.size() != static_cast<std::size_t>(scenario.parties)) return false;
  if (output_perms.size() != static_cast<std::size_t>(scenario.parties)) return false;
  for (std::size_t p = 0; p < input_perms.size(); ++p) {
    if (!is_permutation_of(input_perms[p], scenario.inputs)) return false;
    if (output_perms[p].size() != static_cast<std::size_t>(scenario.inputs)) return false;
    for (const auto& t : output_perms[p])
      if (!is_permutation_of(t, scenario.outputs)) return false;
  }
  return true;
}

Relabelling compose(const Relabelling& g, const Relabelling& h) {
  const std::size_t n = h.party_perm.size();
  Relabelling r = h;
  for (std::size_t p = 0; p < n; ++p) {
    const auto q = static_cast<std::size_t>(h.party_perm[p]);
    r.party_perm[p] = g.party_perm[q];
    for (std::size_t x = 0; x < h.input_perms[p].size(); ++x) {
      const auto hx = static_cast<std::size_t>(h.input_perms[p][x]);
      r.input_perms[p][x] = g.input_perms[q][hx];
      for (std::size_t a = 0; a < h.output_perms[p][x].size(); ++a) {
        const auto ha = static_cast<std::size_t>(h.output_perms[p][x][a]);
        r.output_perms[p][x][a] = g.output_perms[q][hx][ha];
      }
    }
  }
  return r;
}

Relabelling inverse(const Relabelling& g) {
  const std::size_t n = g.party_perm.size();
  Relabelling r = g;
  for (std::size_t p = 0; p < n; ++p) {
    const auto q = static_cast<std::size_t>(g.party_perm[p]);
    r.party_perm[q] = static_cast<int>(p);
    r.input_perms[q] = invert(g.input_perms[p]);
    for (std::size_t x = 0; x < g.input_perms[p].size(); ++x) {
      const auto gx = static_cast<std::size_t>(g.input_perms[p][x]);
      r.output_perms[q][gx] = invert(g.output_perms[p][x]);
    }
  }
  return r;
}

std::vector<std::uint32_t> coordinate_map(const Scenario& scenario, const Relabelling& g) {
  require_compatible(scenario, g);
  const auto n = static_cast<std::size_t>(scenario.parties);
  std::vector<std::uint32_t> map(scenario.dimension());
  std::vector<int> a(n), x(n);
  for (std::size_t i = 0; i < map.size(); ++i) {
    const Event e = inverse_index(scenario, i);
    for (std::size_t p = 0; p < n; ++p) {
      const auto q = static_cast<std::size_t>(g.party_perm[p]);
      const auto xp = static_cast<std::size_t>(e.settings[p]);
      x[q] = g.input_perms[p][xp];
      a[q] = g.output_perms[p][xp][static_cast<std::size_t>(e.outcomes[p])];
    }
    map[i] = static_cast<std::uint32_t>(flat_index(scenario, a, x));
  }
  return map;
}

std::vector<std::uint32_t> det_state_map(const Scenario& scenario, const Relabelling& g) {
  require_compatible(scenario, g);
  const auto n = static_cast<std::size_t>(scenario.parties);
  const auto ni = static_cast<std::size_t>(scenario.inputs);
  // Strategy action of every party's local relabelling, computed once.
  std::vector<std::vector<std::size_t>> local(n, std::vector<std::size_t>(scenario.strategy_count()));
  std::vector<int> image(ni);
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t s = 0; s < scenario.strategy_count(); ++s) {
      const auto f = decode_strategy(scenario, s);
      for (std::size_t x = 0; x < ni; ++x)
        image[static_cast<std::size_t>(g.input_perms[p][x])] =
            g.output_perms[p][x][static_cast<std::size_t>(f[x])];
      local[p][s] = encode_strategy(scenario, image);
    }
  }
  std::vector<std::uint32_t> map(scenario.det_state_count());
  std::vector<std::size_t> moved(n);
  for (std::size_t d = 0; d < map.size(); ++d) {
    const auto strategies = decode_det_state(scenario, d);
    for (std::size_t p = 0; p < n; ++p)
      moved[static_cast<std::size_t>(g.party_perm[p])] = local[p][strategies[p]];
    map[d] = static_cast<std::uint32_t>(encode_det_state(scenario, moved));
  }
  return map;
}

EffectRep apply_relabelling(const Relabelling& g, const EffectRep& e) {
  const auto map = coordinate_map(e.scenario, g);
  EffectRep out = zero_effect(e.scenario);
  for (std::size_t i = 0; i < map.size(); ++i) out.coords[map[i]] = e.coords[i];
  return out;
}

StateRep apply_relabelling(const Relabelling& g, const StateRep& s) {
  const auto map = coordinate_map(s.scenario, g);
  StateRep out(s.scenario, RationalVector(s.coords.size()));
  for (std::size_t i = 0; i < map.size(); ++i) out.coords[map[i]] = s.coords[i];
  return out;
}

SparseVector apply_map(const std::vector<std::uint32_t>& map, const SparseVector& v) {
  std::vector<std::pair<std::uint32_t, Rational>> moved;
  moved.reserve(v.index.size());
  for (std::size_t k = 0; k < v.index.size(); ++k) moved.emplace_back(map[v.index[k]], v.value[k]);
  std::sort(moved.begin(), moved.end(), [](const auto& l, const auto& r) { return l.first < r.first; });
  SparseVector out;
  for (auto& [i, val] : moved) {
    out.index.push_back(i);
    out.value.push_back(std::move(val));
  }
  return out;
}

Bits apply_map(const std::vector<std::uint32_t>& map, const Bits& bits) {
  Bits out(bits.size());
  bits.for_each_set([&](std::size_t i) { out.set(map[i]); });
  return out;
}

Fingerprint apply_map(const std::vector<std::uint32_t>& map, const Fingerprint& f) {
  Fingerprint out;
  out.values.resize(f.values.size());
  for (std::size_t i = 0; i < map.size(); ++i) out.values[map[i]] = f.values[i];
  return out;
}

std::vector<Relabelling> group_generators(const Scenario& scenario) {
  std::vector<Relabelling> gens;
  const Relabelling id = Relabelling::identity(scenario);
  auto cycle = [](std::vector<int>& p) { std::rotate(p.begin(), p.begin() + 1, p.end()); };
  if (scenario.parties >= 2) {
    Relabelling g = id;
    std::swap(g.party_perm[0], g.party_perm[1]);
    gens.push_back(g);
    if (scenario.parties >= 3) {
      g = id;
      cycle(g.party_perm);
      gens.push_back(g);
    }
  }
  if (scenario.inputs >= 2) {
    Relabelling g = id;
    std::swap(g.input_perms[0][0], g.input_perms[0][1]);
    gens.push_back(g);
    if (scenario.inputs >= 3) {
      g = id;
      cycle(g.input_perms[0]);
      gens.push_back(g);
    }
  }
  if (scenario.outputs >= 2) {
    Relabelling g = id;
    std::swap(g.output_perms[0][0][0], g.output_perms[0][0][1]);
    gens.push_back(g);
    if (scenario.outputs >= 3) {
      g = id;
      cycle(g.output_perms[0][0]);
      gens.push_back(g);
    }
  }
  return gens;
}

void for_each_relabelling(const Scenario& scenario,
                          const std::function<void(const Relabelling&)>& visit) {
  struct Local {
    std::vector<int> inputs;
    std::vector<std::vector<int>> outputs;
  };
  std::vector<Local> locals;
  std::vector<int> sigma = iota_perm(scenario.inputs);
  std::vector<std::vector<int>> all_tau;
  {
    std::vector<int> tau = iota_perm(scenario.outputs);
    do all_tau.push_back(tau);
    while (std::next_permutation(tau.begin(), tau.end()));
  }
  do {
    std::vector<std::size_t> digit(static_cast<std::size_t>(scenario.inputs), 0);
    while (true) {
      Local l{sigma, {}};
      for (auto d : digit) l.outputs.push_back(all_tau[d]);
      locals.push_back(std::move(l));
      std::size_t k = 0;
      while (k < digit.size() && ++digit[k] == all_tau.size()) digit[k++] = 0;
      if (k == digit.size()) break;
    }
  } while (std::next_permutation(sigma.begin(), sigma.end()));

  const auto n = static_cast<std::size_t>(scenario.parties);
  Relabelling g = Relabelling::identity(scenario);
  std::vector<int> pi = iota_perm(scenario.parties);
  do {
    g.party_perm = pi;
    std::vector<std::size_t> digit(n, 0);
    while (true) {
      for (std::size_t p = 0; p < n; ++p) {
        g.input_perms[p] = locals[digit[p]].inputs;
        g.output_perms[p] = locals[digit[p]].outputs;
      }
      visit(g);
      std::size_t k = 0;
      while (k < n && ++digit[k] == locals.size()) digit[k++] = 0;
      if (k == n) break;
    }
  } while (std::next_permutation(pi.begin(), pi.end()));
}

CanonicalForm canonical_form(const EffectRep& e) {
  const Scenario& sc = e.scenario;
  const auto gens = group_generators(sc);
  std::vector<std::vector<std::uint32_t>> maps;
  for (const auto& g : gens) maps.push_back(det_state_map(sc, g));

  std::unordered_map<Fingerprint, Relabelling, FingerprintHash> seen;
  std::deque<Fingerprint> queue;
  Fingerprint start = fingerprint(e);
  seen.emplace(start, Relabelling::identity(sc));
  queue.push_back(start);
  CanonicalForm best{start, Relabelling::identity(sc)};
  while (!queue.empty()) {
    Fingerprint f = std::move(queue.front());
    queue.pop_front();
    const Relabelling g = seen.at(f);
    if (f < best.fingerprint) best = {f, g};
    for (std::size_t k = 0; k < gens.size(); ++k) {
      Fingerprint next = apply_map(maps[k], f);
      if (seen.contains(next)) continue;
      seen.emplace(next, compose(gens[k], g));
      queue.push_back(std::move(next));
    }
  }
  return best;
}

std::uint64_t orbit_size(const EffectRep& e) {
  const Scenario& sc = e.scenario;
  std::vector<std::vector<std::uint32_t>> maps;
  for (const auto& g : group_generators(sc)) maps.push_back(det_state_map(sc, g));
  std::unordered_set<Fingerprint, FingerprintHash> seen;
  std::deque<Fingerprint> queue;
  Fingerprint start = fingerprint(e);
  seen.insert(start);
  queue.push_back(std::move(start));
  while (!queue.empty()) {
    Fingerprint f = std::move(queue.front());
    queue.pop_front();
    for (const auto& m : maps) {
      Fingerprint next = apply_map(m, f);
      if (seen.insert(next).second) queue.push_back(std::move(next));
    }
  }
  return seen.size();
}

SymmetryTables::SymmetryTables(const Scenario& scenario) : generators_(group_generators(scenario)) {
  for (const auto& g : generators_) {
    det_maps_.push_back(det_state_map(scenario, g));
    coord_maps_.push_back(coordinate_map(scenario, g));
  }
}

namespace {

std::vector<Bits> bfs_orbit(const Bits& start, const std::vector<std::vector<std::uint32_t>>& maps) {
  std::vector<Bits> orbit{start};
  std::unordered_set<Bits, BitsHash> seen{start};
  for (std::size_t head = 0; head < orbit.size(); ++head) {
    for (const auto& m : maps) {
      Bits next = apply_map(m, orbit[head]);
      if (seen.insert(next).second) orbit.push_back(std::move(next));
    }
  }
  return orbit;
}

}  // namespace

std::vector<Bits> SymmetryTables::fingerprint_orbit(const Bits& fingerprint) const {
  return bfs_orbit(fingerprint, det_maps_);
}

std::vector<Bits> SymmetryTables::representation_orbit(const Bits& rep) const {
  return bfs_orbit(rep, coord_maps_);
}

GroupTable::GroupTable(const Scenario& scenario) {
  const std::uint64_t order = scenario.symmetry_group_order();
  det_.width = scenario.det_state_count();
  coord_.width = scenario.dimension();
  // Both position tables hold two entries per (element, position) and must
  // stay below 1 GiB together.
  if (order * (det_.width + coord_.width) * 2 * sizeof(std::uint32_t) > (std::uint64_t{1} << 30))
    throw DomainError("symmetry group of " + scenario.to_string() + " too large to tabulate");
  order_ = static_cast<std::size_t>(order);
  det_.inverse.resize(order_ * det_.width);
  coord_.inverse.resize(order_ * coord_.width);
  std::size_t g = 0;
  for_each_relabelling(scenario, [&](const Relabelling& r) {
    const auto d = det_state_map(scenario, r);
    const auto c = coordinate_map(scenario, r);
    for (std::size_t i = 0; i < det_.width; ++i) det_.inverse[d[i] * order_ + g] = static_cast<std::uint32_t>(i);
    for (std::size_t i = 0; i < coord_.width; ++i) coord_.inverse[c[i] * order_ + g] = static_cast<std::uint32_t>(i);
    ++g;
  });
  det_.index_sources(order_);
  coord_.index_sources(order_);
}

void GroupTable::PositionTable::index_sources(std::size_t order) {
  by_source.resize(inverse.size());
  start.assign(width * (width + 1), 0);
  for (std::size_t t = 0; t < width; ++t) {
    const std::uint32_t* row = inverse.data() + t * order;
    std::uint32_t* begin = start.data() + t * (width + 1);
    for (std::size_t g = 0; g < order; ++g) ++begin[row[g] + 1];
    for (std::size_t i = 0; i < width; ++i) begin[i + 1] += begin[i];
    std::vector<std::uint32_t> next(begin, begin + width);
    for (std::size_t g = 0; g < order; ++g) by_source[t * order + next[row[g]]++] = static_cast<std::uint32_t>(g);
  }
}

// Fills the minimum image position by position, keeping only the elements whose
// image agrees with it so far. The survivors at the end fix the minimum image,
// and their number is the stabilizer order. While many elements survive they
// are kept in a bitmap, and each position visits only the elements that carry
// the rarer input value there; afterwards the survivors are filtered as a list.
Bits GroupTable::PositionTable::canonical(const Bits& bits, std::size_t order, std::size_t* stabilizer) const {
  Bits best(bits.size());
  std::vector<std::uint32_t> ones, zeros;
  for (std::size_t i = 0; i < width; ++i) (bits.test(i) ? ones : zeros).push_back(static_cast<std::uint32_t>(i));
  const bool visit_ones = ones.size() <= zeros.size();
  const std::vector<std::uint32_t>& visited = visit_ones ? ones : zeros;
  const std::size_t bitmap_cost = visited.size() * order / width;

  std::size_t t = 0;
  std::vector<std::uint32_t> alive;
  if (bitmap_cost < order) {
    std::vector<std::uint64_t> live((order + 63) / 64, ~std::uint64_t{0});
    if (order % 64) live.back() = (std::uint64_t{1} << (order % 64)) - 1;
    std::size_t count = order;
    std::vector<std::uint32_t> hits;
    for (; t < width && count > bitmap_cost; ++t) {
      const std::uint32_t* elements = by_source.data() + t * order;
      const std::uint32_t* begin = start.data() + t * (width + 1);
      hits.clear();
      for (auto i : visited)
        for (std::uint32_t k = begin[i]; k < begin[i + 1]; ++k) {
          const std::uint32_t g = elements[k];
          if ((live[g >> 6] >> (g & 63)) & 1U) hits.push_back(g);
        }
      if (visit_ones) {
        // hits carry a one at t: drop them unless every survivor does.
        if (hits.size() == count) {
          best.set(t);
        } else {
          for (auto g : hits) live[g >> 6] &= ~(std::uint64_t{1} << (g & 63));
          count -= hits.size();
        }
      } else if (hits.empty()) {
        best.set(t);
      } else {
        // hits carry a zero at t: keep only them.
        std::fill(live.begin(), live.end(), 0);
        for (auto g : hits) live[g >> 6] |= std::uint64_t{1} << (g & 63);
        count = hits.size();
      }
    }
    alive.reserve(count);
    for (std::size_t w = 0; w < live.size(); ++w)
      for (std::uint64_t word = live[w]; word; word &= word - 1)
        alive.push_back(static_cast<std::uint32_t>(w * 64 + static_cast<std::size_t>(std::countr_zero(word))));
  } else {
    alive.resize(order);
    std::iota(alive.begin(), alive.end(), 0U);
  }

  for (; t < width; ++t) {
    const std::uint32_t* row = inverse.data() + t * order;
    std::size_t kept = 0;
    for (auto g : alive)
      if (!bits.test(row[g])) alive[kept++] = g;
    if (kept == 0)
      best.set(t);
    else
      alive.resize(kept);
  }
  if (stabilizer) *stabilizer = alive.size();
  return best;
}

Bits GroupTable::canonical_fingerprint(const Bits& fingerprint, std::size_t* stabilizer) const {
  return det_.canonical(fingerprint, order_, stabilizer);
}

Bits GroupTable::canonical_representation(const Bits& rep, std::size_t* stabilizer) const {
  return coord_.canonical(rep, order_, stabilizer);
}

}  // namespace boxlab
