#include "boxlab/scenario.hpp"

#include "boxlab/errors.hpp"

#include <sstream>

namespace boxlab {

namespace {

// Hard ceiling on the largest table any operation may need to index.
constexpr std::size_t kMaxTable = std::size_t{1} << 26;

std::size_t checked_pow(std::size_t base, int exponent) {
  std::size_t result = 1;
  for (int i = 0; i < exponent; ++i) {
    if (result > kMaxTable / base) throw DomainError("scenario too large");
    result *= base;
  }
  return result;
}

std::uint64_t factorial(int n) {
  std::uint64_t f = 1;
  for (int i = 2; i <= n; ++i) f *= static_cast<std::uint64_t>(i);
  return f;
}

}  // namespace

Scenario::Scenario(int parties_, int inputs_, int outputs_)
    : parties(parties_), inputs(inputs_), outputs(outputs_) {
  if (parties < 1 || inputs < 1 || outputs < 1)
    throw DomainError("scenario sizes must be positive");
  if (parties > 12 || inputs > 9 || outputs > 9) throw DomainError("scenario too large");
  (void)dimension();
  (void)det_state_count();
}

std::size_t Scenario::dimension() const {
  return checked_pow(static_cast<std::size_t>(inputs) * outputs, parties);
}

std::size_t Scenario::det_state_count() const {
  return checked_pow(static_cast<std::size_t>(outputs), inputs * parties);
}

std::uint64_t Scenario::symmetry_group_order() const {
  std::uint64_t local = factorial(inputs);
  for (int x = 0; x < inputs; ++x) local *= factorial(outputs);
  std::uint64_t order = factorial(parties);
  for (int p = 0; p < parties; ++p) order *= local;
  return order;
}

std::size_t Scenario::setting_count() const { return checked_pow(inputs, parties); }
std::size_t Scenario::outcome_count() const { return checked_pow(outputs, parties); }
std::size_t Scenario::strategy_count() const { return checked_pow(outputs, inputs); }

std::string Scenario::to_string() const {
  std::ostringstream os;
  os << "(" << parties << "," << inputs << "," << outputs << ")";
  return os.str();
}

std::size_t flat_index(const Scenario& scenario, std::span<const int> outcomes,
                       std::span<const int> settings) {
  const auto n = static_cast<std::size_t>(scenario.parties);
  if (outcomes.size() != n || settings.size() != n)
    throw DomainError("event arity does not match party count");
  std::size_t x_index = 0;
  std::size_t a_index = 0;
  for (std::size_t p = 0; p < n; ++p) {
    if (outcomes[p] < 0 || outcomes[p] >= scenario.outputs)
      throw DomainError("outcome out of range");
    if (settings[p] < 0 || settings[p] >= scenario.inputs)
      throw DomainError("setting out of range");
    x_index = x_index * scenario.inputs + settings[p];
    a_index = a_index * scenario.outputs + outcomes[p];
  }
  return x_index * scenario.outcome_count() + a_index;
}

Event inverse_index(const Scenario& scenario, std::size_t index) {
  if (index >= scenario.dimension()) throw DomainError("flat index out of range");
  const auto n = static_cast<std::size_t>(scenario.parties);
  Event event{std::vector<int>(n), std::vector<int>(n)};
  std::size_t a_index = index % scenario.outcome_count();
  std::size_t x_index = index / scenario.outcome_count();
  for (std::size_t p = n; p-- > 0;) {
    event.outcomes[p] = static_cast<int>(a_index % scenario.outputs);
    a_index /= scenario.outputs;
    event.settings[p] = static_cast<int>(x_index % scenario.inputs);
    x_index /= scenario.inputs;
  }
  return event;
}

std::size_t index_of_label(const Scenario& scenario, const std::string& label) {
  const auto bar = label.find('|');
  const auto n = static_cast<std::size_t>(scenario.parties);
  if (bar == std::string::npos || bar != n || label.size() != 2 * n + 1)
    throw DomainError("malformed event label '" + label + "'");
  std::vector<int> a(n), x(n);
  for (std::size_t p = 0; p < n; ++p) {
    a[p] = label[p] - '0';
    x[p] = label[bar + 1 + p] - '0';
  }
  return flat_index(scenario, a, x);
}

std::string label_of_index(const Scenario& scenario, std::size_t index) {
  const Event e = inverse_index(scenario, index);
  std::string s;
  for (int a : e.outcomes) s += static_cast<char>('0' + a);
  s += '|';
  for (int x : e.settings) s += static_cast<char>('0' + x);
  return s;
}

std::vector<int> decode_strategy(const Scenario& scenario, std::size_t strategy) {
  std::vector<int> f(static_cast<std::size_t>(scenario.inputs));
  for (std::size_t x = f.size(); x-- > 0;) {
    f[x] = static_cast<int>(strategy % scenario.outputs);
    strategy /= scenario.outputs;
  }
  return f;
}

std::size_t encode_strategy(const Scenario& scenario, std::span<const int> outputs_per_input) {
  std::size_t s = 0;
  for (int a : outputs_per_input) s = s * scenario.outputs + a;
  return s;
}

std::vector<std::size_t> decode_det_state(const Scenario& scenario, std::size_t index) {
  const std::size_t per_party = scenario.strategy_count();
  std::vector<std::size_t> strategies(static_cast<std::size_t>(scenario.parties));
  for (std::size_t p = strategies.size(); p-- > 0;) {
    strategies[p] = index % per_party;
    index /= per_party;
  }
  return strategies;
}

std::size_t encode_det_state(const Scenario& scenario, std::span<const std::size_t> strategies) {
  const std::size_t per_party = scenario.strategy_count();
  std::size_t index = 0;
  for (std::size_t s : strategies) index = index * per_party + s;
  return index;
}

}  // namespace boxlab
