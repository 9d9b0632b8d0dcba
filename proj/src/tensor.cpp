#include "boxlab/tensor.hpp"

#include "boxlab/errors.hpp"

#include <algorithm>
#include <numeric>

namespace boxlab {

RationalVector tensor_compose(int inputs, int outputs, const std::vector<TensorFactor>& factors,
                              std::span<const int> target_order) {
  const int total = static_cast<int>(target_order.size());
  if (total == 0) throw DomainError("empty target order");
  const Scenario joint(total, inputs, outputs);

  // Locate every result party inside its factor.
  std::vector<int> owner(static_cast<std::size_t>(total), -1);
  std::vector<int> slot(static_cast<std::size_t>(total), -1);
  std::vector<Scenario> local;
  for (std::size_t f = 0; f < factors.size(); ++f) {
    const auto& parties = factors[f].parties;
    if (parties.empty()) throw DomainError("tensor factor without parties");
    local.emplace_back(static_cast<int>(parties.size()), inputs, outputs);
    if (factors[f].coords.size() != local.back().dimension())
      throw DomainError("tensor factor has wrong dimension");
    for (std::size_t k = 0; k < parties.size(); ++k) {
      const auto it = std::find(target_order.begin(), target_order.end(), parties[k]);
      if (it == target_order.end()) throw DomainError("factor party not in target order");
      const auto j = static_cast<std::size_t>(it - target_order.begin());
      if (owner[j] != -1) throw DomainError("overlapping factor parties");
      owner[j] = static_cast<int>(f);
      slot[j] = static_cast<int>(k);
    }
  }
  if (std::find(owner.begin(), owner.end(), -1) != owner.end())
    throw DomainError("factor parties do not cover the target order");

  RationalVector out(joint.dimension());
  std::vector<std::vector<int>> a(factors.size()), x(factors.size());
  for (std::size_t f = 0; f < factors.size(); ++f) {
    a[f].assign(factors[f].parties.size(), 0);
    x[f].assign(factors[f].parties.size(), 0);
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    const Event e = inverse_index(joint, i);
    for (std::size_t j = 0; j < owner.size(); ++j) {
      const auto f = static_cast<std::size_t>(owner[j]);
      const auto k = static_cast<std::size_t>(slot[j]);
      a[f][k] = e.outcomes[j];
      x[f][k] = e.settings[j];
    }
    Rational value(1);
    for (std::size_t f = 0; f < factors.size() && !is_zero(value); ++f)
      value *= factors[f].coords[flat_index(local[f], a[f], x[f])];
    out[i] = std::move(value);
  }
  return out;
}

StateRep tensor_product(const std::vector<StateRep>& states) {
  if (states.empty()) throw DomainError("empty tensor product");
  std::vector<TensorFactor> factors;
  int next = 0;
  for (const auto& s : states) {
    if (s.scenario.inputs != states.front().scenario.inputs ||
        s.scenario.outputs != states.front().scenario.outputs)
      throw DomainError("tensor factors with different input/output counts");
    TensorFactor f{s.coords, {}};
    for (int p = 0; p < s.scenario.parties; ++p) f.parties.push_back(next++);
    factors.push_back(std::move(f));
  }
  std::vector<int> order(static_cast<std::size_t>(next));
  std::iota(order.begin(), order.end(), 0);
  const auto& sc = states.front().scenario;
  return StateRep(Scenario(next, sc.inputs, sc.outputs),
                  tensor_compose(sc.inputs, sc.outputs, factors, order));
}

}  // namespace boxlab
