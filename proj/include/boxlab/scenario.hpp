#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace boxlab {

// N parties, each with n_I inputs and n_O outputs.
struct Scenario {
  int parties = 1;
  int inputs = 1;
  int outputs = 1;

  Scenario() = default;
  Scenario(int parties, int inputs, int outputs);

  // (n_I n_O)^N
  std::size_t dimension() const;
  // n_O^(n_I N)
  std::size_t det_state_count() const;
  // ((n_O!)^{n_I} n_I!)^N N!
  std::uint64_t symmetry_group_order() const;

  std::size_t setting_count() const;   // n_I^N
  std::size_t outcome_count() const;   // n_O^N, also the unit count of a {0,1} identity
  std::size_t strategy_count() const;  // n_O^(n_I), deterministic strategies of one party

  std::string to_string() const;

  auto operator<=>(const Scenario&) const = default;
};

// Joint event (a, x): one outcome and one setting per party, party 0 first.
struct Event {
  std::vector<int> outcomes;
  std::vector<int> settings;

  bool operator==(const Event&) const = default;
};

// Position of P(a|x) in a state vector: settings block major, outcomes minor,
// party 0 most significant in both.
std::size_t flat_index(const Scenario& scenario, std::span<const int> outcomes,
                       std::span<const int> settings);
Event inverse_index(const Scenario& scenario, std::size_t index);

// Parses "010|101" style labels (outcomes|settings, one digit per party).
std::size_t index_of_label(const Scenario& scenario, const std::string& label);
std::string label_of_index(const Scenario& scenario, std::size_t index);

// Deterministic strategy of one party: f(x) for every input, f(0) most significant.
std::vector<int> decode_strategy(const Scenario& scenario, std::size_t strategy);
std::size_t encode_strategy(const Scenario& scenario, std::span<const int> outputs_per_input);

// Per-party strategy indices of the local deterministic state with the given index.
std::vector<std::size_t> decode_det_state(const Scenario& scenario, std::size_t index);
std::size_t encode_det_state(const Scenario& scenario, std::span<const std::size_t> strategies);

}  // namespace boxlab
