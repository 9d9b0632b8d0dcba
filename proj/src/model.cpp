#include "boxlab/model.hpp"

#include "boxlab/errors.hpp"

#include <algorithm>

namespace boxlab {

EffectRep::EffectRep(Scenario s, RationalVector c) : scenario(s), coords(std::move(c)) {
  if (coords.size() != scenario.dimension()) throw DomainError("effect has wrong dimension");
}

StateRep::StateRep(Scenario s, RationalVector c) : scenario(s), coords(std::move(c)) {
  if (coords.size() != scenario.dimension()) throw DomainError("state has wrong dimension");
}

SparseVector SparseVector::from_dense(const RationalVector& dense) {
  SparseVector sv;
  for (std::size_t i = 0; i < dense.size(); ++i) {
    if (!is_zero(dense[i])) {
      sv.index.push_back(static_cast<std::uint32_t>(i));
      sv.value.push_back(dense[i]);
    }
  }
  return sv;
}

SparseVector SparseVector::from_bits(const Bits& bits) {
  SparseVector sv;
  bits.for_each_set([&](std::size_t i) {
    sv.index.push_back(static_cast<std::uint32_t>(i));
    sv.value.emplace_back(1);
  });
  return sv;
}

RationalVector SparseVector::to_dense(std::size_t dimension) const {
  RationalVector dense(dimension);
  for (std::size_t k = 0; k < index.size(); ++k) dense[index[k]] = value[k];
  return dense;
}

bool SparseVector::is_01_valued() const {
  return std::all_of(value.begin(), value.end(), [](const Rational& v) { return v == 1; });
}

Bits SparseVector::support(std::size_t dimension) const {
  Bits b(dimension);
  for (auto i : index) b.set(i);
  return b;
}

bool Fingerprint::is_01_valued() const {
  return std::all_of(values.begin(), values.end(),
                     [](const Rational& v) { return v == 0 || v == 1; });
}

bool Fingerprint::all_ones() const {
  return std::all_of(values.begin(), values.end(), [](const Rational& v) { return v == 1; });
}

Bits Fingerprint::to_bits() const {
  if (!is_01_valued()) throw DomainError("fingerprint is not {0,1}-valued");
  Bits b(values.size());
  for (std::size_t i = 0; i < values.size(); ++i)
    if (values[i] == 1) b.set(i);
  return b;
}

Fingerprint Fingerprint::from_bits(const Bits& bits) {
  Fingerprint f;
  f.values.resize(bits.size());
  bits.for_each_set([&](std::size_t i) { f.values[i] = 1; });
  return f;
}

std::vector<int> NsMove::dense(std::size_t dimension) const {
  std::vector<int> v(dimension, 0);
  for (auto i : plus) v[i] += 1;
  for (auto i : minus) v[i] -= 1;
  return v;
}

EffectRep zero_effect(const Scenario& scenario) {
  return EffectRep(scenario, RationalVector(scenario.dimension()));
}

EffectRep identity_effect(const Scenario& scenario) {
  EffectRep e = zero_effect(scenario);
  // Settings block 0 holds every outcome tuple at x = 0...0.
  for (std::size_t a = 0; a < scenario.outcome_count(); ++a) e.coords[a] = 1;
  return e;
}

EffectRep standard_basis_effect(const Scenario& scenario, std::size_t index) {
  if (index >= scenario.dimension()) throw DomainError("basis index out of range");
  EffectRep e = zero_effect(scenario);
  e.coords[index] = 1;
  return e;
}

EffectRep effect_from_terms(const Scenario& scenario,
                            const std::vector<std::pair<Rational, std::string>>& terms) {
  EffectRep e = zero_effect(scenario);
  for (const auto& [weight, label] : terms) e.coords[index_of_label(scenario, label)] += weight;
  return e;
}

bool is_01_valued(const EffectRep& e) {
  return std::all_of(e.coords.begin(), e.coords.end(),
                     [](const Rational& v) { return v == 0 || v == 1; });
}

bool is_nonnegative(const RationalVector& v) {
  return std::all_of(v.begin(), v.end(), [](const Rational& x) { return sgn(x) >= 0; });
}

Rational inner(const EffectRep& e, const StateRep& s) {
  if (e.scenario != s.scenario) throw DomainError("inner product across different scenarios");
  Rational acc;
  for (std::size_t k = 0; k < e.coords.size(); ++k)
    if (!is_zero(e.coords[k])) acc += e.coords[k] * s.coords[k];
  return acc;
}

Rational inner(const SparseVector& e, const StateRep& s) {
  Rational acc;
  for (std::size_t k = 0; k < e.index.size(); ++k) acc += e.value[k] * s.coords[e.index[k]];
  return acc;
}

std::vector<std::uint32_t> det_state_support(const Scenario& scenario, std::size_t det_index) {
  if (det_index >= scenario.det_state_count()) throw DomainError("det state index out of range");
  const auto strategies = decode_det_state(scenario, det_index);
  std::vector<std::vector<int>> f;
  f.reserve(strategies.size());
  for (auto s : strategies) f.push_back(decode_strategy(scenario, s));

  const auto n = static_cast<std::size_t>(scenario.parties);
  std::vector<int> x(n, 0), a(n, 0);
  std::vector<std::uint32_t> support;
  support.reserve(scenario.setting_count());
  for (std::size_t xi = 0; xi < scenario.setting_count(); ++xi) {
    std::size_t rest = xi;
    for (std::size_t p = n; p-- > 0;) {
      x[p] = static_cast<int>(rest % scenario.inputs);
      rest /= scenario.inputs;
    }
    for (std::size_t p = 0; p < n; ++p) a[p] = f[p][static_cast<std::size_t>(x[p])];
    support.push_back(static_cast<std::uint32_t>(flat_index(scenario, a, x)));
  }
  return support;
}

std::vector<StateRep> local_deterministic_states(const Scenario& scenario) {
  std::vector<StateRep> states;
  states.reserve(scenario.det_state_count());
  for (std::size_t i = 0; i < scenario.det_state_count(); ++i) {
    StateRep s(scenario, RationalVector(scenario.dimension()));
    for (auto k : det_state_support(scenario, i)) s.coords[k] = 1;
    states.push_back(std::move(s));
  }
  return states;
}

std::vector<NsMove> ns_generators(const Scenario& scenario) {
  const auto n = static_cast<std::size_t>(scenario.parties);
  const std::size_t others = [&] {
    std::size_t c = 1;
    for (std::size_t i = 1; i < n; ++i) c *= static_cast<std::size_t>(scenario.inputs) * scenario.outputs;
    return c;
  }();
  std::vector<NsMove> moves;
  moves.reserve(n * others * static_cast<std::size_t>(scenario.inputs - 1));
  std::vector<int> a(n), x(n);
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t w = 0; w < others; ++w) {
      // Decode the (outcome, setting) pairs of the other parties.
      std::size_t rest = w;
      for (std::size_t q = n; q-- > 0;) {
        if (q == p) continue;
        a[q] = static_cast<int>(rest % scenario.outputs);
        rest /= scenario.outputs;
        x[q] = static_cast<int>(rest % scenario.inputs);
        rest /= scenario.inputs;
      }
      for (int alt = 1; alt < scenario.inputs; ++alt) {
        NsMove r;
        for (int ap = 0; ap < scenario.outputs; ++ap) {
          a[p] = ap;
          x[p] = 0;
          r.plus.push_back(static_cast<std::uint32_t>(flat_index(scenario, a, x)));
          x[p] = alt;
          r.minus.push_back(static_cast<std::uint32_t>(flat_index(scenario, a, x)));
        }
        moves.push_back(std::move(r));
      }
    }
  }
  return moves;
}

Fingerprint fingerprint(const EffectRep& e) {
  const Scenario& sc = e.scenario;
  Fingerprint f;
  f.values.resize(sc.det_state_count());
  for (std::size_t i = 0; i < f.values.size(); ++i)
    for (auto k : det_state_support(sc, i)) f.values[i] += e.coords[k];
  return f;
}

Fingerprint fingerprint(const Scenario& scenario, const SparseVector& e) {
  return fingerprint(EffectRep(scenario, e.to_dense(scenario.dimension())));
}

bool is_valid_state(const StateRep& s) {
  if (!is_nonnegative(s.coords)) return false;
  Rational norm;
  for (std::size_t a = 0; a < s.scenario.outcome_count(); ++a) norm += s.coords[a];
  if (norm != 1) return false;
  for (const auto& r : ns_generators(s.scenario)) {
    Rational acc;
    for (auto k : r.plus) acc += s.coords[k];
    for (auto k : r.minus) acc -= s.coords[k];
    if (!is_zero(acc)) return false;
  }
  return true;
}

bool is_identity(const EffectRep& e) { return fingerprint(e).all_ones(); }

Geometry::Geometry(const Scenario& scenario)
    : scenario_(scenario), support_size_(scenario.setting_count()) {
  const std::size_t dets = scenario.det_state_count();
  det_support_.reserve(dets * support_size_);
  cover_.assign(scenario.dimension(), Bits(dets));
  for (std::size_t d = 0; d < dets; ++d) {
    for (auto k : det_state_support(scenario, d)) {
      det_support_.push_back(k);
      cover_[k].set(d);
    }
  }
  moves_ = ns_generators(scenario);
}

Bits Geometry::subset_fingerprint(const Bits& rep) const {
  Bits f(scenario_.det_state_count());
  rep.for_each_set([&](std::size_t k) { f ^= cover_[k]; });
  return f;
}

bool Geometry::is_01_identity(const Bits& rep) const {
  Bits seen(scenario_.det_state_count());
  bool disjoint = true;
  rep.for_each_set([&](std::size_t k) {
    if (seen.intersects(cover_[k])) disjoint = false;
    seen |= cover_[k];
  });
  return disjoint && seen.count() == seen.size();
}

}  // namespace boxlab
