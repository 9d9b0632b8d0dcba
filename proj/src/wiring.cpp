#include "boxlab/wiring.hpp"

#include "boxlab/enumeration.hpp"
#include "boxlab/errors.hpp"
#include "boxlab/validity.hpp"

#include <algorithm>

namespace boxlab {

namespace {

std::size_t power(std::size_t base, int exponent) {
  std::size_t r = 1;
  for (int i = 0; i < exponent; ++i) r *= base;
  return r;
}

// Flat indices of a multi-party table with the digits of one party split out.
struct Digits {
  std::size_t settings_total;  // n_I^N
  std::size_t outcomes_total;  // n_O^N

  Digits(int parties, int inputs, int outputs)
      : settings_total(power(static_cast<std::size_t>(inputs), parties)),
        outcomes_total(power(static_cast<std::size_t>(outputs), parties)) {}
};

std::size_t digit_of(std::size_t value, std::size_t base, int parties, int party) {
  return (value / power(base, parties - 1 - party)) % base;
}

std::size_t without_digit(std::size_t value, std::size_t base, int parties, int party) {
  const std::size_t low_size = power(base, parties - 1 - party);
  const std::size_t high = value / (low_size * base);
  return high * low_size + value % low_size;
}

bool classify(int parties, int inputs, int outputs, const std::vector<std::uint32_t>& events,
              const WiringOptions& options) {
  if (parties == 1) return true;
  if (parties == 2 && options.two_party_shortcut) return true;
  if (events.empty()) return true;
  const Digits digits(parties, inputs, outputs);
  const auto ni = static_cast<std::size_t>(inputs);
  const auto no = static_cast<std::size_t>(outputs);
  for (int p = 0; p < parties; ++p) {
    const std::size_t first = digit_of(events.front() / digits.outcomes_total, ni, parties, p);
    const bool single_input = std::all_of(events.begin(), events.end(), [&](std::uint32_t e) {
      return digit_of(e / digits.outcomes_total, ni, parties, p) == first;
    });
    if (!single_input) continue;
    const std::size_t reduced_outcomes = digits.outcomes_total / no;
    std::vector<std::vector<std::uint32_t>> branches(no);
    for (auto e : events) {
      const std::size_t s = e / digits.outcomes_total;
      const std::size_t o = e % digits.outcomes_total;
      const std::size_t a = digit_of(o, no, parties, p);
      branches[a].push_back(static_cast<std::uint32_t>(without_digit(s, ni, parties, p) * reduced_outcomes +
                                                       without_digit(o, no, parties, p)));
    }
    bool all = true;
    for (auto& branch : branches) {
      std::sort(branch.begin(), branch.end());
      if (!classify(parties - 1, inputs, outputs, branch, options)) {
        all = false;
        break;
      }
    }
    if (all) return true;
  }
  return false;
}

}  // namespace

void Measurement::validate() const {
  if (effects.empty()) throw DomainError("measurement has no effects");
  if (!labels.empty() && labels.size() != effects.size()) throw DomainError("measurement label count mismatch");
  EffectRep total = zero_effect(scenario);
  for (const auto& e : effects) {
    if (e.scenario != scenario) throw DomainError("measurement effects span different scenarios");
    if (!is_valid_effect(scenario, e)) throw DomainError("measurement contains an invalid effect");
    for (std::size_t i = 0; i < total.coords.size(); ++i) total.coords[i] += e.coords[i];
  }
  if (!is_identity(total)) throw DomainError("measurement effects do not sum to the identity");
}

Measurement WiringMeasurement::induced(const Scenario& scenario, int outcomes) const {
  Measurement m;
  m.scenario = scenario;
  m.effects.assign(static_cast<std::size_t>(outcomes), zero_effect(scenario));
  for (int k = 0; k < outcomes; ++k) m.labels.push_back(std::to_string(k));
  const auto atoms = base.positions();
  if (atoms.size() != assignment.size()) throw DomainError("assignment does not match the base");
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    const int label = assignment[i];
    if (label < 0 || label >= outcomes) throw DomainError("assignment label out of range");
    m.effects[static_cast<std::size_t>(label)].coords[atoms[i]] += 1;
  }
  return m;
}

EffectRep condition_effect(const EffectRep& e, int party, int outcome) {
  const Scenario& sc = e.scenario;
  if (sc.parties < 2) throw DomainError("conditioning needs at least two parties");
  if (party < 0 || party >= sc.parties) throw DomainError("party out of range");
  if (outcome < 0 || outcome >= sc.outputs) throw DomainError("outcome out of range");
  const Scenario reduced(sc.parties - 1, sc.inputs, sc.outputs);
  EffectRep out = zero_effect(reduced);
  for (std::size_t i = 0; i < e.coords.size(); ++i) {
    if (is_zero(e.coords[i])) continue;
    Event ev = inverse_index(sc, i);
    const auto p = static_cast<std::size_t>(party);
    if (ev.settings[p] != 0)
      throw DomainError("nonzero entry " + label_of_index(sc, i) + " at a nonzero setting of the conditioned party");
    if (ev.outcomes[p] != outcome) continue;
    ev.settings.erase(ev.settings.begin() + party);
    ev.outcomes.erase(ev.outcomes.begin() + party);
    out.coords[flat_index(reduced, ev.outcomes, ev.settings)] = e.coords[i];
  }
  return out;
}

bool is_wiring_representation(const EffectRep& e, WiringOptions options) {
  if (!is_01_valued(e)) throw DomainError("wiring classification needs a {0,1}-valued representation");
  Bits support(e.coords.size());
  for (std::size_t i = 0; i < e.coords.size(); ++i)
    if (e.coords[i] == 1) support.set(i);
  return is_wiring_representation(e.scenario, support, options);
}

bool is_wiring_representation(const Scenario& scenario, const Bits& support, WiringOptions options) {
  if (support.size() != scenario.dimension()) throw DomainError("support size does not match scenario");
  std::vector<std::uint32_t> events;
  support.for_each_set([&](std::size_t i) { events.push_back(static_cast<std::uint32_t>(i)); });
  return classify(scenario.parties, scenario.inputs, scenario.outputs, events, options);
}

std::vector<Bits> wiring_bases(const Scenario& scenario) {
  EnumerationOptions options;
  options.classes = false;
  const IdentitySet set = enumerate_identity_reps_01(scenario, options);
  std::vector<Bits> out;
  for (const auto& rep : set.reps)
    if (rep.wiring) out.push_back(rep.coords.support(scenario.dimension()));
  return out;
}

void for_each_wiring_measurement(const Scenario& scenario, int outcomes,
                                 const std::function<bool(const WiringMeasurement&)>& visit) {
  if (outcomes < 1) throw DomainError("a measurement needs at least one outcome");
  for (const auto& base : wiring_bases(scenario)) {
    WiringMeasurement wm{base, std::vector<int>(base.count(), 0)};
    while (true) {
      if (!visit(wm)) return;
      std::size_t i = 0;
      while (i < wm.assignment.size() && ++wm.assignment[i] == outcomes) wm.assignment[i++] = 0;
      if (i == wm.assignment.size()) break;
    }
  }
}

}  // namespace boxlab
