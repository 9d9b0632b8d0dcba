#include "boxlab/tasks.hpp"

#include "boxlab/errors.hpp"
#include "boxlab/lp.hpp"
#include "boxlab/tensor.hpp"
#include "boxlab/validity.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace boxlab {

namespace {

const Scenario kBipartite(2, 2, 2);

Rational sparse_dot(const SparseVector& e, const RationalVector& v) {
  Rational r;
  for (std::size_t k = 0; k < e.index.size(); ++k) r += e.value[k] * v[e.index[k]];
  return r;
}

Rational dense_dot(const RationalVector& a, const RationalVector& b) {
  Rational r;
  for (std::size_t k = 0; k < a.size(); ++k)
    if (!is_zero(a[k])) r += a[k] * b[k];
  return r;
}

std::vector<SparseVector> catalog_effects(const Catalog& catalog, bool wiring_only) {
  if (catalog.symmetry_reduced) return expanded_effects(catalog, wiring_only);
  std::vector<SparseVector> out;
  for (const auto& e : catalog.entries)
    if (!wiring_only || e.wiring) out.push_back(e.representative);
  return out;
}

void require_bipartite(const StateRep& s) {
  if (s.scenario != kBipartite) throw DomainError("expected a two-party, two-input, two-output box");
}

std::size_t box_index(int a, int b, int x, int y) {
  const int outcomes[] = {a, b};
  const int settings[] = {x, y};
  return flat_index(kBipartite, outcomes, settings);
}

EffectRep effect_of_terms(const Scenario& sc, std::initializer_list<const char*> labels) {
  std::vector<std::pair<Rational, std::string>> terms;
  for (const char* l : labels) terms.emplace_back(Rational(1), l);
  return effect_from_terms(sc, terms);
}

}  // namespace

Ensemble Ensemble::uniform(std::vector<StateRep> states) {
  Ensemble e;
  const Rational w(1, static_cast<unsigned long>(std::max<std::size_t>(states.size(), 1)));
  e.weights.assign(states.size(), w);
  e.states = std::move(states);
  return e;
}

void Ensemble::validate() const {
  if (states.empty()) throw DomainError("ensemble has no states");
  if (weights.size() != states.size()) throw DomainError("ensemble weight count mismatch");
  Rational total;
  for (std::size_t k = 0; k < states.size(); ++k) {
    if (states[k].scenario != states.front().scenario) throw DomainError("ensemble mixes scenarios");
    if (!is_valid_state(states[k])) throw DomainError("ensemble contains an invalid state");
    if (sgn(weights[k]) < 0) throw DomainError("negative ensemble weight");
    total += weights[k];
  }
  if (total != 1) throw DomainError("ensemble weights do not sum to one");
}

DistanceResult boxworld_distance(const StateRep& s1, const StateRep& s2, const Catalog& effects,
                                 bool wiring_only) {
  if (s1.scenario != s2.scenario || s1.scenario != effects.scenario)
    throw DomainError("states and catalog belong to different scenarios");
  if (!is_valid_state(s1) || !is_valid_state(s2)) throw DomainError("invalid state");
  RationalVector diff(s1.coords.size());
  for (std::size_t k = 0; k < diff.size(); ++k) diff[k] = s1.coords[k] - s2.coords[k];
  const auto list = catalog_effects(effects, wiring_only);
  if (list.empty()) throw DomainError("no effects to scan");
  DistanceResult best;
  best.distance = -1;
  bool complement = false;
  const SparseVector* arg = nullptr;
  for (const auto& e : list) {
    const Rational v = sparse_dot(e, diff);
    const Rational a = abs(v);
    if (a > best.distance) {
      best.distance = a;
      arg = &e;
      complement = sgn(v) < 0;
    }
  }
  if (!complement) {
    best.witness = *arg;
  } else {
    // <u - e, s1 - s2> = -<e, s1 - s2> since both states are normalized.
    RationalVector c = identity_effect(s1.scenario).coords;
    for (std::size_t k = 0; k < arg->index.size(); ++k) c[arg->index[k]] -= arg->value[k];
    best.witness = SparseVector::from_dense(c);
  }
  return best;
}

Rational guessing_probability(const Ensemble& ensemble, const Measurement& measurement,
                              const std::vector<int>& guess) {
  ensemble.validate();
  const std::size_t n = measurement.effects.size();
  if (guess.empty() && n != ensemble.states.size())
    throw DomainError("measurement and ensemble sizes differ and no guess map was given");
  if (!guess.empty() && guess.size() != n) throw DomainError("guess map size does not match the measurement");
  Rational total;
  for (std::size_t k = 0; k < n; ++k) {
    const int target = guess.empty() ? static_cast<int>(k) : guess[k];
    if (target < 0 || static_cast<std::size_t>(target) >= ensemble.states.size())
      throw DomainError("guess map names a missing state");
    const auto t = static_cast<std::size_t>(target);
    total += ensemble.weights[t] * inner(measurement.effects[k], ensemble.states[t]);
  }
  return total;
}

WiringGuess max_guessing_wirings(const Ensemble& ensemble) {
  ensemble.validate();
  const Scenario& sc = ensemble.states.front().scenario;
  const std::size_t dim = sc.dimension();
  RationalVector best(dim);
  std::vector<int> arg(dim, 0);
  for (std::size_t i = 0; i < dim; ++i) {
    best[i] = ensemble.weights[0] * ensemble.states[0].coords[i];
    for (std::size_t k = 1; k < ensemble.states.size(); ++k) {
      const Rational v = ensemble.weights[k] * ensemble.states[k].coords[i];
      if (v > best[i]) {
        best[i] = v;
        arg[i] = static_cast<int>(k);
      }
    }
  }
  WiringGuess out;
  out.value = -1;
  for (const auto& base : wiring_bases(sc)) {
    Rational v;
    base.for_each_set([&](std::size_t i) { v += best[i]; });
    if (v > out.value) {
      out.value = v;
      out.base = base;
    }
  }
  out.guess.clear();
  out.base.for_each_set([&](std::size_t i) { out.guess.push_back(arg[i]); });
  return out;
}

AdvantageResult advantage_lp(const EffectRep& e, const Catalog& wiring_rows, std::optional<Rational> mu) {
  const Scenario& sc = e.scenario;
  if (wiring_rows.scenario != sc) throw DomainError("wiring catalog belongs to a different scenario");
  if (!is_valid_effect(sc, e)) throw DomainError("advantage LP needs a valid effect");
  const std::size_t dim = sc.dimension();
  const bool search = !mu.has_value();
  const std::size_t nu_var = 2 * dim, mu_var = 2 * dim + 1;
  lp::LinearProgram prog(search ? 2 * dim + 2 : 2 * dim + 1);
  const std::size_t n = prog.num_vars;

  const std::size_t block = sc.outcome_count();
  for (int state = 0; state < 2; ++state) {
    const std::size_t off = static_cast<std::size_t>(state) * dim;
    for (std::size_t b = 0; b < sc.setting_count(); ++b) {
      RationalVector row(n);
      for (std::size_t a = 0; a < block; ++a) row[off + b * block + a] = 1;
      prog.add_row(std::move(row), lp::Relation::Equal, 1);
    }
    for (const auto& move : ns_generators(sc)) {
      RationalVector row(n);
      for (auto k : move.plus) row[off + k] += 1;
      for (auto k : move.minus) row[off + k] -= 1;
      prog.add_row(std::move(row), lp::Relation::Equal, 0);
    }
  }
  {
    RationalVector row(n);
    for (std::size_t k = 0; k < dim; ++k) {
      row[k] = e.coords[k];
      row[dim + k] = -e.coords[k];
    }
    if (search) row[mu_var] = -1;
    prog.add_row(std::move(row), lp::Relation::Equal, search ? Rational(0) : *mu);
  }
  prog.objective.assign(n, Rational());
  if (search) {
    prog.sense = lp::Sense::Maximize;
    prog.objective[mu_var] = 1;
    prog.objective[nu_var] = -1;
  } else {
    prog.sense = lp::Sense::Minimize;
    prog.objective[nu_var] = 1;
  }

  // The zero effect is a wiring, so nu >= 0 holds at the optimum and keeps the
  // relaxations bounded before any wiring row is present.
  const auto pool = catalog_effects(wiring_rows, true);
  if (pool.empty()) throw DomainError("catalog has no wiring effects");
  const lp::Separator separate = [&](const RationalVector& point) {
    RationalVector diff(dim);
    for (std::size_t k = 0; k < dim; ++k) diff[k] = point[k] - point[dim + k];
    std::vector<std::pair<Rational, std::size_t>> violated;
    for (std::size_t j = 0; j < pool.size(); ++j) {
      Rational v = sparse_dot(pool[j], diff) - point[nu_var];
      if (sgn(v) > 0) violated.emplace_back(std::move(v), j);
    }
    constexpr std::size_t kBatch = 32;
    if (violated.size() > kBatch) {
      std::partial_sort(violated.begin(), violated.begin() + kBatch, violated.end(),
                        [](const auto& a, const auto& b) { return a.first > b.first || (a.first == b.first && a.second < b.second); });
      violated.resize(kBatch);
    }
    std::vector<lp::Row> rows;
    for (const auto& [value, j] : violated) {
      lp::Row r;
      r.coeffs.assign(n, Rational());
      for (std::size_t k = 0; k < pool[j].index.size(); ++k) {
        r.coeffs[pool[j].index[k]] = pool[j].value[k];
        r.coeffs[dim + pool[j].index[k]] = -pool[j].value[k];
      }
      r.coeffs[nu_var] = -1;
      r.relation = lp::Relation::LessEqual;
      r.rhs = 0;
      rows.push_back(std::move(r));
    }
    return rows;
  };
  const auto result = lp::solve_with_row_generation(std::move(prog), separate);
  AdvantageResult out;
  if (result.status != lp::Status::Optimal) return out;
  const auto& p = *result.point;
  out.feasible = true;
  out.s1 = StateRep(sc, RationalVector(p.begin(), p.begin() + static_cast<std::ptrdiff_t>(dim)));
  out.s2 = StateRep(sc, RationalVector(p.begin() + static_cast<std::ptrdiff_t>(dim),
                                       p.begin() + static_cast<std::ptrdiff_t>(2 * dim)));
  out.nu = p[nu_var];
  out.mu = search ? p[mu_var] : *mu;
  return out;
}

NlweFixture nlwe_fixture() {
  const Scenario single(1, 2, 2);
  const StateRep t[4] = {
      StateRep(single, {1, 0, 1, 0}),
      StateRep(single, {1, 0, 0, 1}),
      StateRep(single, {0, 1, 1, 0}),
      StateRep(single, {0, 1, 0, 1}),
  };
  const int factors[8][3] = {{3, 4, 2}, {1, 4, 2}, {4, 2, 3}, {4, 2, 1},
                             {1, 1, 3}, {1, 3, 1}, {3, 1, 4}, {3, 1, 2}};
  std::vector<StateRep> states;
  for (const auto& f : factors) states.push_back(tensor_product({t[f[0] - 1], t[f[1] - 1], t[f[2] - 1]}));

  const Scenario sc(3, 2, 2);
  auto measurement_of = [&](std::initializer_list<const char*> labels) {
    Measurement m;
    m.scenario = sc;
    int k = 1;
    for (const char* l : labels) {
      m.effects.push_back(standard_basis_effect(sc, index_of_label(sc, l)));
      m.labels.push_back("e" + std::to_string(k++));
    }
    return m;
  };
  NlweFixture out;
  out.ensemble = Ensemble::uniform(std::move(states));
  out.measurement =
      measurement_of({"110|000", "011|001", "111|010", "100|100", "001|000", "010|001", "101|010", "000|100"});
  out.best_wiring =
      measurement_of({"110|000", "010|000", "111|010", "100|100", "001|000", "011|000", "101|010", "000|100"});
  return out;
}

CrossSection parse_cross_section(const std::string& name) {
  if (name == "I") return CrossSection::I;
  if (name == "III") return CrossSection::III;
  throw DomainError("unknown cross section '" + name + "' (expected I or III)");
}

StateRep local_box(int index) {
  if (index < 1 || index > 16) throw DomainError("local box index out of range");
  const int i = index - 1;
  const int tau = i & 1, sigma = (i >> 1) & 1, nu = (i >> 2) & 1, mu = (i >> 3) & 1;
  RationalVector c(kBipartite.dimension());
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) c[box_index((mu * x) ^ nu, (sigma * y) ^ tau, x, y)] = 1;
  return StateRep(kBipartite, std::move(c));
}

StateRep nonlocal_box(int index) {
  if (index < 1 || index > 8) throw DomainError("nonlocal box index out of range");
  const int i = index - 1;
  const int sigma = i & 1, nu = (i >> 1) & 1, mu = (i >> 2) & 1;
  RationalVector c(kBipartite.dimension());
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          if ((a ^ b) == ((x & y) ^ (mu & x) ^ (nu & y) ^ sigma)) c[box_index(a, b, x, y)] = Rational(1, 2);
  return StateRep(kBipartite, std::move(c));
}

StateRep cross_section_state(const CrossSectionPoint& p) {
  if (sgn(p.eta) < 0 || sgn(p.omega) < 0 || p.eta + p.omega > 1)
    throw DomainError("cross-section parameters must satisfy eta, omega >= 0 and eta + omega <= 1");
  const StateRep nl1 = nonlocal_box(1), nl2 = nonlocal_box(2);
  const StateRep l1 = local_box(1), lk = local_box(p.section == CrossSection::I ? 6 : 9);
  const Rational rest = 1 - p.omega - p.eta;
  RationalVector c(kBipartite.dimension());
  for (std::size_t k = 0; k < c.size(); ++k) {
    const Rational po = Rational(3, 4) * nl1.coords[k] + Rational(1, 4) * nl2.coords[k];
    c[k] = p.omega * nl1.coords[k] + p.eta / 2 * (l1.coords[k] + lk.coords[k]) + rest * po;
  }
  StateRep s(kBipartite, std::move(c));
  if (!is_valid_state(s)) throw std::logic_error("cross-section state is not a valid box");
  return s;
}

Rational chsh(const StateRep& box) {
  require_bipartite(box);
  Rational total;
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) {
      Rational corr;
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
          const Rational& p = box.coords[box_index(a, b, x, y)];
          if (a == b) corr += p;
          else corr -= p;
        }
      if (x == 1 && y == 1) total -= corr;
      else total += corr;
    }
  return total;
}

Rational reference_chsh_polynomial(CrossSection section, const Rational& eta, const Rational& omega) {
  const Rational& w = omega;
  const Rational& h = eta;
  Rational v;
  if (section == CrossSection::I) {
    v = 7 * w * w * w - 15 * h * h * h + 33 * w * w + 57 * w + 3 * h * h * (7 + 11 * w) +
        3 * h * (9 + 26 * w + 13 * w * w) + 31;
  } else {
    v = 7 * w * w * w + 5 * h * h * h + 33 * w * w + 57 * w + h * h * (13 + 25 * w) +
        3 * h * (5 + 18 * w + 9 * w * w) + 31;
  }
  return v / 32;
}

void DistillationProtocol::validate() const {
  if (copies < 1) throw DomainError("a protocol needs at least one copy");
  const Scenario sc(copies, 2, 2);
  for (const EffectRep* e : {&alice[0], &alice[1], &bob[0], &bob[1]})
    if (e->scenario != sc || !is_valid_effect(sc, *e)) throw DomainError("protocol contains an invalid effect");
}

DistillationProtocol reference_protocol() {
  const Scenario sc(3, 2, 2);
  DistillationProtocol p;
  p.copies = 3;
  p.alice[0] = effect_of_terms(sc, {"000|000", "011|000", "101|000", "110|000"});
  p.alice[1] = effect_of_terms(sc, {"111|011", "100|101", "001|110", "010|111"});
  p.bob[0] = effect_of_terms(sc, {"011|011", "110|101", "000|110", "101|111"});
  p.bob[1] = effect_of_terms(sc, {"101|000", "000|001", "110|010", "011|100"});
  return p;
}

DistillResult distill(const DistillationProtocol& protocol, const StateRep& base) {
  protocol.validate();
  require_bipartite(base);
  if (!is_valid_state(base)) throw DomainError("base box is not a valid state");
  const int t = protocol.copies;
  const StateRep joint = tensor_product(std::vector<StateRep>(static_cast<std::size_t>(t), base));
  const Scenario side(t, 2, 2);
  const RationalVector unit = identity_effect(side).coords;

  std::vector<int> alice_parties, bob_parties, order;
  for (int k = 0; k < t; ++k) {
    alice_parties.push_back(2 * k);
    bob_parties.push_back(2 * k + 1);
  }
  for (int k = 0; k < 2 * t; ++k) order.push_back(k);

  auto outcome_effect = [&](const EffectRep& e, int outcome) {
    if (outcome == 0) return e.coords;
    RationalVector c = unit;
    for (std::size_t k = 0; k < c.size(); ++k) c[k] -= e.coords[k];
    return c;
  };

  RationalVector out(kBipartite.dimension());
  for (int x = 0; x < 2; ++x)
    for (int a = 0; a < 2; ++a) {
      const RationalVector ea = outcome_effect(protocol.alice[x], a);
      for (int y = 0; y < 2; ++y)
        for (int b = 0; b < 2; ++b) {
          const RationalVector fb = outcome_effect(protocol.bob[y], b);
          const RationalVector joint_effect =
              tensor_compose(2, 2, {TensorFactor{ea, alice_parties}, TensorFactor{fb, bob_parties}}, order);
          out[box_index(a, b, x, y)] = dense_dot(joint_effect, joint.coords);
        }
    }
  DistillResult r;
  r.output = StateRep(kBipartite, std::move(out));
  if (!is_valid_state(r.output)) throw std::logic_error("distilled box is not a valid state");
  r.chsh = chsh(r.output);
  return r;
}

std::vector<AlicePair> alice_pairs(const Catalog& candidates) {
  const auto effects = catalog_effects(candidates, false);
  std::vector<AlicePair> out;
  out.reserve(effects.size() * effects.size());
  for (const auto& e0 : effects)
    for (const auto& e1 : effects) out.push_back(AlicePair{e0, e1});
  return out;
}

namespace {

// Bob's side for one input: maximize <c, g> over valid effects g. Validity is
// g >= 0 together with u - g + sum z_j r_j >= 0 for free z.
struct BobProgram {
  std::size_t dim;
  std::vector<NsMove> moves;
  RationalVector unit;

  explicit BobProgram(const Scenario& sc)
      : dim(sc.dimension()), moves(ns_generators(sc)), unit(identity_effect(sc).coords) {}

  std::pair<Rational, RationalVector> solve(const RationalVector& c) const {
    const std::size_t n = dim + moves.size();
    lp::LinearProgram prog(n);
    for (std::size_t j = dim; j < n; ++j) prog.set_free(j);
    std::vector<RationalVector> rows(dim, RationalVector(n));
    for (std::size_t k = 0; k < dim; ++k) rows[k][k] = 1;
    for (std::size_t j = 0; j < moves.size(); ++j) {
      for (auto k : moves[j].plus) rows[k][dim + j] -= 1;
      for (auto k : moves[j].minus) rows[k][dim + j] += 1;
    }
    for (std::size_t k = 0; k < dim; ++k) prog.add_row(std::move(rows[k]), lp::Relation::LessEqual, unit[k]);
    prog.objective.assign(n, Rational());
    for (std::size_t k = 0; k < dim; ++k) prog.objective[k] = c[k];
    prog.sense = lp::Sense::Maximize;
    const auto r = lp::solve(prog);
    if (r.status != lp::Status::Optimal) throw std::logic_error("Bob's effect program is not bounded and feasible");
    return {*r.value, RationalVector(r.point->begin(), r.point->begin() + static_cast<std::ptrdiff_t>(dim))};
  }
};

}  // namespace

SearchResult distillation_search(const StateRep& base, int copies, const std::vector<AlicePair>& pairs) {
  require_bipartite(base);
  if (!is_valid_state(base)) throw DomainError("base box is not a valid state");
  if (copies < 1) throw DomainError("a protocol needs at least one copy");
  if (pairs.empty()) throw DomainError("no Alice candidates to scan");
  const Scenario side(copies, 2, 2);
  const Scenario both(2 * copies, 2, 2);
  const std::size_t dim = side.dimension();
  const StateRep joint = tensor_product(std::vector<StateRep>(static_cast<std::size_t>(copies), base));

  // Joint coordinate of Alice event i and Bob event j, parties interleaved.
  std::vector<std::uint32_t> joint_index(dim * dim);
  for (std::size_t i = 0; i < dim; ++i) {
    const Event ea = inverse_index(side, i);
    for (std::size_t j = 0; j < dim; ++j) {
      const Event eb = inverse_index(side, j);
      std::vector<int> outcomes, settings;
      for (int k = 0; k < copies; ++k) {
        outcomes.push_back(ea.outcomes[k]);
        outcomes.push_back(eb.outcomes[k]);
        settings.push_back(ea.settings[k]);
        settings.push_back(eb.settings[k]);
      }
      joint_index[i * dim + j] = static_cast<std::uint32_t>(flat_index(both, outcomes, settings));
    }
  }
  const BobProgram bob(side);
  const SparseVector unit = SparseVector::from_dense(bob.unit);

  // Bob's functional for Alice's correlator 2 e - u: b[j] = sum_i (2e - u)[i] s(i, j).
  auto bob_functional = [&](const SparseVector& e) {
    RationalVector alice(dim);
    for (std::size_t k = 0; k < unit.index.size(); ++k) alice[unit.index[k]] -= unit.value[k];
    for (std::size_t k = 0; k < e.index.size(); ++k) alice[e.index[k]] += 2 * e.value[k];
    RationalVector b(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      if (is_zero(alice[i])) continue;
      for (std::size_t j = 0; j < dim; ++j) b[j] += alice[i] * joint.coords[joint_index[i * dim + j]];
    }
    return b;
  };

  struct Best {
    bool found = false;
    Rational value;
    std::size_t index = 0;
    RationalVector f0, f1;
  };
  auto evaluate = [&](std::size_t p, Best& best) {
    const RationalVector b0 = bob_functional(pairs[p].e0);
    const RationalVector b1 = bob_functional(pairs[p].e1);
    // CHSH = sum_xy sign_xy <b_x, 2 f_y - u> = <2(b0 + b1), f0> + <2(b0 - b1), f1> - 2 <b0, u>.
    RationalVector c0(dim), c1(dim);
    for (std::size_t j = 0; j < dim; ++j) {
      c0[j] = 2 * (b0[j] + b1[j]);
      c1[j] = 2 * (b0[j] - b1[j]);
    }
    auto [v0, f0] = bob.solve(c0);
    auto [v1, f1] = bob.solve(c1);
    const Rational value = v0 + v1 - 2 * sparse_dot(unit, b0);
    if (!best.found || value > best.value) {
      best = Best{true, value, p, std::move(f0), std::move(f1)};
    }
  };

  const std::size_t workers = std::min<std::size_t>(worker_count(), pairs.size());
  std::vector<Best> partial(workers);
  std::vector<std::thread> threads;
  const std::size_t chunk = (pairs.size() + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    threads.emplace_back([&, w] {
      const std::size_t lo = w * chunk, hi = std::min(pairs.size(), lo + chunk);
      for (std::size_t p = lo; p < hi; ++p) evaluate(p, partial[w]);
    });
  }
  for (auto& t : threads) t.join();
  Best best;
  for (auto& b : partial)
    if (b.found && (!best.found || b.value > best.value)) best = std::move(b);

  SearchResult out;
  out.protocol.copies = copies;
  out.protocol.alice[0] = EffectRep(side, pairs[best.index].e0.to_dense(dim));
  out.protocol.alice[1] = EffectRep(side, pairs[best.index].e1.to_dense(dim));
  out.protocol.bob[0] = EffectRep(side, std::move(best.f0));
  out.protocol.bob[1] = EffectRep(side, std::move(best.f1));
  out.chsh = best.value;
  out.pair_index = best.index;
  out.pairs_scanned = pairs.size();
  if (distill(out.protocol, base).chsh != out.chsh)
    throw std::logic_error("search value disagrees with the distilled box");
  return out;
}

std::vector<GridRow> distillation_grid(CrossSection section, int steps) {
  if (steps < 1) throw DomainError("grid needs at least one step");
  const DistillationProtocol protocol = reference_protocol();
  std::vector<GridRow> rows;
  for (int i = 0; i <= steps; ++i)
    for (int j = 0; i + j <= steps; ++j) {
      const Rational eta = make_rational(i, steps), omega = make_rational(j, steps);
      const StateRep s = cross_section_state({section, eta, omega});
      GridRow r{eta, omega, chsh(s), distill(protocol, s).chsh, reference_chsh_polynomial(section, eta, omega)};
      rows.push_back(std::move(r));
    }
  return rows;
}

std::string format_rational(const Rational& value, bool as_float) {
  if (!as_float) return to_string(value);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", value.get_d());
  return buf;
}

std::string format_grid_csv(const std::vector<GridRow>& rows, bool as_float) {
  std::ostringstream out;
  out << "eta,omega,chsh_i,chsh_f,polynomial\n";
  for (const auto& r : rows)
    out << format_rational(r.eta, as_float) << ',' << format_rational(r.omega, as_float) << ','
        << format_rational(r.chsh_initial, as_float) << ',' << format_rational(r.chsh_final, as_float) << ','
        << format_rational(r.polynomial, as_float) << '\n';
  return out.str();
}

}  // namespace boxlab
