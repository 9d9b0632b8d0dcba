#include "boxlab/lp.hpp"

#include "boxlab/errors.hpp"

#include <algorithm>

namespace boxlab::lp {

LinearProgram::LinearProgram(std::size_t n)
    : num_vars(n), objective(n), lower(n, Rational(0)), upper(n) {}

void LinearProgram::set_free(std::size_t var) {
  lower.at(var).reset();
  upper.at(var).reset();
}

void LinearProgram::add_row(RationalVector coeffs, Relation relation, Rational rhs) {
  rows.push_back(Row{std::move(coeffs), relation, std::move(rhs)});
}

namespace {

// x_j = offset_j + sign_j * y_pos_j (- y_neg_j when free)
struct VarMap {
  Rational offset;
  int sign = 1;
  std::size_t pos = 0;
  std::optional<std::size_t> neg;
};

class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols)
      : a_(rows, RationalVector(cols)), rhs_(rows), basis_(rows, 0), cost_(cols) {}

  RationalVector& row(std::size_t i) { return a_[i]; }
  Rational& rhs(std::size_t i) { return rhs_[i]; }
  std::size_t& basic(std::size_t i) { return basis_[i]; }
  std::size_t rows() const { return a_.size(); }
  std::size_t cols() const { return cost_.size(); }

  // Loads a cost vector (minimization) and prices out the current basis.
  void set_cost(const RationalVector& c) {
    cost_ = c;
    value_ = 0;
    for (std::size_t i = 0; i < rows(); ++i) {
      const Rational cb = c[basis_[i]];
      if (is_zero(cb)) continue;
      for (std::size_t j = 0; j < cols(); ++j)
        if (!is_zero(a_[i][j])) cost_[j] -= cb * a_[i][j];
      value_ -= cb * rhs_[i];
    }
  }

  // Prices by most negative reduced cost and switches to Bland's rule while
  // pivots stay degenerate, which rules out cycling. Columns flagged in
  // `blocked` never enter. Returns false when unbounded.
  bool optimize(const std::vector<bool>& blocked) {
    constexpr int kDegenerateLimit = 3;
    int degenerate = 0;
    while (true) {
      const bool bland = degenerate >= kDegenerateLimit;
      std::size_t enter = cols();
      for (std::size_t j = 0; j < cols(); ++j) {
        if (blocked[j] || sgn(cost_[j]) >= 0) continue;
        if (enter == cols() || cost_[j] < cost_[enter]) enter = j;
        if (bland) break;
      }
      if (enter == cols()) return true;
      std::size_t leave = rows();
      Rational best_ratio;
      for (std::size_t i = 0; i < rows(); ++i) {
        if (sgn(a_[i][enter]) <= 0) continue;
        Rational ratio = rhs_[i] / a_[i][enter];
        if (leave == rows() || ratio < best_ratio ||
            (ratio == best_ratio && basis_[i] < basis_[leave])) {
          leave = i;
          best_ratio = std::move(ratio);
        }
      }
      if (leave == rows()) return false;
      degenerate = is_zero(best_ratio) ? degenerate + 1 : 0;
      pivot(leave, enter);
    }
  }

  void pivot(std::size_t r, std::size_t c) {
    RationalVector& prow = a_[r];
    const Rational inv = 1 / prow[c];
    std::vector<std::size_t> nz;
    for (std::size_t j = 0; j < cols(); ++j) {
      if (is_zero(prow[j])) continue;
      prow[j] *= inv;
      nz.push_back(j);
    }
    rhs_[r] *= inv;
    for (std::size_t i = 0; i < rows(); ++i) {
      if (i == r || is_zero(a_[i][c])) continue;
      const Rational f = a_[i][c];
      for (auto j : nz) a_[i][j] -= f * prow[j];
      rhs_[i] -= f * rhs_[r];
    }
    if (!is_zero(cost_[c])) {
      const Rational f = cost_[c];
      for (auto j : nz) cost_[j] -= f * prow[j];
      value_ -= f * rhs_[r];
    }
    basis_[r] = c;
  }

  // Removes every column from `first` on; they must all be nonbasic.
  void truncate_columns(std::size_t first) {
    for (auto& row : a_) row.resize(first);
    cost_.resize(first);
  }

  void drop_row(std::size_t r) {
    a_.erase(a_.begin() + static_cast<std::ptrdiff_t>(r));
    rhs_.erase(rhs_.begin() + static_cast<std::ptrdiff_t>(r));
    basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(r));
  }

  // Objective value of the minimization: -value_ tracks sum c_B b.
  Rational objective() const { return -value_; }

 private:
  std::vector<RationalVector> a_;
  RationalVector rhs_;
  std::vector<std::size_t> basis_;
  RationalVector cost_;
  Rational value_;
};

void validate(const LinearProgram& lp) {
  if (lp.objective.size() != lp.num_vars) throw DomainError("objective length != num_vars");
  if (lp.lower.size() != lp.num_vars || lp.upper.size() != lp.num_vars)
    throw DomainError("bound vectors length != num_vars");
  for (const auto& r : lp.rows)
    if (r.coeffs.size() != lp.num_vars) throw DomainError("row length != num_vars");
  for (std::size_t j = 0; j < lp.num_vars; ++j)
    if (lp.lower[j] && lp.upper[j] && *lp.upper[j] < *lp.lower[j])
      throw DomainError("variable upper bound below lower bound");
}

}  // namespace

LPResult solve(const LinearProgram& lp) {
  validate(lp);

  // Substitute bounds so every structural variable is nonnegative.
  std::vector<VarMap> vars(lp.num_vars);
  std::size_t ny = 0;
  struct Extra {
    std::size_t y;
    Rational bound;
  };
  std::vector<Extra> extra_rows;
  for (std::size_t j = 0; j < lp.num_vars; ++j) {
    auto& v = vars[j];
    const auto& lo = lp.lower[j];
    const auto& up = lp.upper[j];
    v.pos = ny++;
    if (lo) {
      v.offset = *lo;
      if (up) extra_rows.push_back({v.pos, *up - *lo});
    } else if (up) {
      v.offset = *up;
      v.sign = -1;
    } else {
      v.neg = ny++;
    }
  }

  const std::size_t m = lp.rows.size() + extra_rows.size();
  // Columns: y variables, one slack per inequality, one artificial per row.
  std::vector<Relation> rel(m);
  std::vector<RationalVector> coef(m, RationalVector(ny));
  RationalVector rhs(m);
  for (std::size_t i = 0; i < lp.rows.size(); ++i) {
    const auto& r = lp.rows[i];
    rel[i] = r.relation;
    rhs[i] = r.rhs;
    for (std::size_t j = 0; j < lp.num_vars; ++j) {
      if (is_zero(r.coeffs[j])) continue;
      const auto& v = vars[j];
      rhs[i] -= r.coeffs[j] * v.offset;
      coef[i][v.pos] += v.sign * r.coeffs[j];
      if (v.neg) coef[i][*v.neg] -= r.coeffs[j];
    }
  }
  for (std::size_t k = 0; k < extra_rows.size(); ++k) {
    const std::size_t i = lp.rows.size() + k;
    rel[i] = Relation::LessEqual;
    coef[i][extra_rows[k].y] = 1;
    rhs[i] = extra_rows[k].bound;
  }

  std::size_t slacks = 0;
  for (auto r : rel)
    if (r != Relation::Equal) ++slacks;
  const std::size_t art0 = ny + slacks;
  const std::size_t cols = art0 + m;
  Tableau t(m, cols);
  std::vector<bool> is_art(cols, false);
  std::size_t s = ny;
  for (std::size_t i = 0; i < m; ++i) {
    auto& row = t.row(i);
    for (std::size_t j = 0; j < ny; ++j) row[j] = coef[i][j];
    std::optional<std::size_t> slack;
    if (rel[i] != Relation::Equal) {
      slack = s++;
      row[*slack] = rel[i] == Relation::LessEqual ? 1 : -1;
    }
    t.rhs(i) = rhs[i];
    if (sgn(t.rhs(i)) < 0) {
      for (auto& v : row) v = -v;
      t.rhs(i) = -t.rhs(i);
    }
    if (slack && row[*slack] == 1) {
      t.basic(i) = *slack;
    } else {
      row[art0 + i] = 1;
      t.basic(i) = art0 + i;
      is_art[art0 + i] = true;
    }
  }

  // Rows with a zero right-hand side can be pivoted on any nonzero entry
  // without changing any right-hand side, so their artificials leave the
  // basis up front. Rows left without a structural entry are redundant.
  for (std::size_t i = 0; i < t.rows();) {
    if (t.basic(i) < art0 || !is_zero(t.rhs(i))) {
      ++i;
      continue;
    }
    std::size_t c = art0;
    for (std::size_t j = 0; j < art0; ++j) {
      if (!is_zero(t.row(i)[j])) {
        c = j;
        break;
      }
    }
    if (c == art0) {
      is_art[t.basic(i)] = false;
      t.drop_row(i);
    } else {
      t.pivot(i, c);
      ++i;
    }
  }

  // Phase 1: minimize the sum of the remaining artificials.
  RationalVector phase1(cols);
  bool any_art = false;
  for (std::size_t j = art0; j < cols; ++j) {
    if (is_art[j]) {
      phase1[j] = 1;
      any_art = true;
    }
  }
  std::vector<bool> blocked(cols, false);
  for (std::size_t j = art0; j < cols; ++j) blocked[j] = !is_art[j];
  if (any_art) {
    t.set_cost(phase1);
    t.optimize(blocked);
    if (sgn(t.objective()) > 0) return LPResult{Status::Infeasible, std::nullopt, std::nullopt};
    // Drive artificials out of the basis, dropping redundant rows.
    for (std::size_t i = 0; i < t.rows();) {
      if (t.basic(i) < art0) {
        ++i;
        continue;
      }
      std::size_t c = art0;
      for (std::size_t j = 0; j < art0; ++j) {
        if (!is_zero(t.row(i)[j])) {
          c = j;
          break;
        }
      }
      if (c == art0) {
        t.drop_row(i);
      } else {
        t.pivot(i, c);
        ++i;
      }
    }
  }
  // Artificials are nonbasic now and never re-enter.
  t.truncate_columns(art0);
  blocked.assign(art0, false);

  // Phase 2.
  RationalVector cost(art0);
  for (std::size_t j = 0; j < lp.num_vars; ++j) {
    Rational c = lp.sense == Sense::Maximize ? Rational(-lp.objective[j]) : lp.objective[j];
    const auto& v = vars[j];
    cost[v.pos] += v.sign * c;
    if (v.neg) cost[*v.neg] -= c;
  }
  t.set_cost(cost);
  if (!t.optimize(blocked)) return LPResult{Status::Unbounded, std::nullopt, std::nullopt};

  RationalVector y(ny);
  for (std::size_t i = 0; i < t.rows(); ++i)
    if (t.basic(i) < ny) y[t.basic(i)] = t.rhs(i);
  RationalVector x(lp.num_vars);
  Rational value;
  for (std::size_t j = 0; j < lp.num_vars; ++j) {
    const auto& v = vars[j];
    x[j] = v.offset + v.sign * y[v.pos];
    if (v.neg) x[j] -= y[*v.neg];
    value += lp.objective[j] * x[j];
  }
  return LPResult{Status::Optimal, value, x};
}

LPResult solve_with_row_generation(LinearProgram lp, const Separator& separate,
                                   std::size_t max_rounds) {
  for (std::size_t round = 0; round < max_rounds; ++round) {
    LPResult result = solve(lp);
    if (result.status != Status::Optimal) return result;
    auto cuts = separate(*result.point);
    if (cuts.empty()) return result;
    for (auto& c : cuts) lp.rows.push_back(std::move(c));
  }
  throw DomainError("row generation did not converge");
}

bool satisfies(const LinearProgram& lp, const RationalVector& point) {
  if (point.size() != lp.num_vars) return false;
  for (std::size_t j = 0; j < lp.num_vars; ++j) {
    if (lp.lower[j] && point[j] < *lp.lower[j]) return false;
    if (lp.upper[j] && point[j] > *lp.upper[j]) return false;
  }
  for (const auto& r : lp.rows) {
    Rational lhs;
    for (std::size_t j = 0; j < lp.num_vars; ++j)
      if (!is_zero(r.coeffs[j])) lhs += r.coeffs[j] * point[j];
    switch (r.relation) {
      case Relation::LessEqual:
        if (lhs > r.rhs) return false;
        break;
      case Relation::Equal:
        if (lhs != r.rhs) return false;
        break;
      case Relation::GreaterEqual:
        if (lhs < r.rhs) return false;
        break;
    }
  }
  return true;
}

}  // namespace boxlab::lp
