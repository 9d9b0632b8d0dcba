#include "boxlab/validity.hpp"

#include "boxlab/errors.hpp"
#include "boxlab/lp.hpp"

#include <algorithm>

namespace boxlab {

namespace {

// Is there w with v + sum_j w_j r_j >= 0?
bool has_nonnegative_representation(const RationalVector& v, const std::vector<NsMove>& moves) {
  if (is_nonnegative(v)) return true;
  lp::LinearProgram prog(moves.size());
  for (std::size_t j = 0; j < moves.size(); ++j) prog.set_free(j);
  std::vector<RationalVector> rows(v.size(), RationalVector(moves.size()));
  for (std::size_t j = 0; j < moves.size(); ++j) {
    for (auto k : moves[j].plus) rows[k][j] += 1;
    for (auto k : moves[j].minus) rows[k][j] -= 1;
  }
  for (std::size_t k = 0; k < v.size(); ++k)
    prog.add_row(std::move(rows[k]), lp::Relation::GreaterEqual, -v[k]);
  return lp::solve(prog).status == lp::Status::Optimal;
}

}  // namespace

bool is_valid_effect(const Scenario& scenario, const EffectRep& e) {
  if (e.scenario != scenario || e.coords.size() != scenario.dimension())
    throw DomainError("effect does not belong to scenario " + scenario.to_string());
  const auto moves = ns_generators(scenario);
  if (!has_nonnegative_representation(e.coords, moves)) return false;
  RationalVector complement = identity_effect(scenario).coords;
  for (std::size_t k = 0; k < complement.size(); ++k) complement[k] -= e.coords[k];
  return has_nonnegative_representation(complement, moves);
}

bool in_convex_hull(const EffectRep& e, std::span<const EffectRep> known) {
  std::vector<SparseVector> sparse;
  sparse.reserve(known.size());
  for (const auto& k : known) {
    if (k.scenario != e.scenario) throw DomainError("known effect from a different scenario");
    sparse.push_back(SparseVector::from_dense(k.coords));
  }
  return in_convex_hull(e.scenario, SparseVector::from_dense(e.coords), sparse);
}

bool in_convex_hull(const Scenario& scenario, const SparseVector& e, std::span<const SparseVector> known) {
  HullIndex index(scenario);
  for (const auto& k : known) index.add(k);
  return index.contains(fingerprint(scenario, e));
}

HullIndex::HullIndex(const Scenario& scenario) : scenario_(scenario) {}

void HullIndex::add(const SparseVector& rep) { add(fingerprint(scenario_, rep)); }

void HullIndex::add(Fingerprint f) {
  const std::size_t dets = scenario_.det_state_count();
  if (f.values.size() != dets) throw DomainError("fingerprint size does not match scenario");
  Bits support(dets), ones(dets);
  for (std::size_t d = 0; d < dets; ++d) {
    const int sign = sgn(f.values[d]);
    if (sign < 0 || f.values[d] > 1) throw DomainError("hull members must take values in [0,1] on deterministic states");
    if (sign > 0) support.set(d);
    if (f.values[d] == 1) ones.set(d);
  }
  members_.push_back(Member{std::move(f), std::move(support), std::move(ones)});
}

bool HullIndex::contains(const Fingerprint& target) const {
  const std::size_t dets = scenario_.det_state_count();
  if (target.values.size() != dets) throw DomainError("fingerprint size does not match scenario");
  Bits support(dets), ones(dets);
  for (std::size_t d = 0; d < dets; ++d) {
    if (sgn(target.values[d]) > 0) support.set(d);
    if (target.values[d] == 1) ones.set(d);
  }
  // A convex combination of [0,1]-valued vectors vanishes only where every
  // member with positive weight vanishes, and reaches one only where all of
  // them do; members violating either condition get zero weight.
  std::vector<const Fingerprint*> columns;
  for (const auto& m : members_)
    if (m.support.is_subset_of(support) && ones.is_subset_of(m.ones)) columns.push_back(&m.values);
  if (columns.empty()) return false;
  const auto rows = support.positions();
  lp::LinearProgram prog(columns.size());
  prog.objective.assign(columns.size(), Rational());
  for (auto d : rows) {
    RationalVector row(columns.size());
    for (std::size_t j = 0; j < columns.size(); ++j) row[j] = columns[j]->values[d];
    prog.add_row(std::move(row), lp::Relation::Equal, target.values[d]);
  }
  prog.add_row(RationalVector(columns.size(), Rational(1)), lp::Relation::Equal, 1);
  return lp::solve(prog).status == lp::Status::Optimal;
}

}  // namespace boxlab
