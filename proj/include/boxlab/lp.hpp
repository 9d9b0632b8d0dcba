#pragma once

#include "boxlab/rational.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

namespace boxlab::lp {

enum class Relation { LessEqual, Equal, GreaterEqual };
enum class Sense { Maximize, Minimize };
enum class Status { Optimal, Infeasible, Unbounded };

struct Row {
  RationalVector coeffs;
  Relation relation = Relation::LessEqual;
  Rational rhs;
};

// Variables default to x >= 0; use set_free / the bound vectors to change that.
struct LinearProgram {
  std::size_t num_vars = 0;
  std::vector<Row> rows;
  RationalVector objective;
  Sense sense = Sense::Maximize;
  std::vector<std::optional<Rational>> lower;
  std::vector<std::optional<Rational>> upper;

  LinearProgram() = default;
  explicit LinearProgram(std::size_t n);

  void set_free(std::size_t var);
  void add_row(RationalVector coeffs, Relation relation, Rational rhs);
};

struct LPResult {
  Status status = Status::Infeasible;
  std::optional<Rational> value;
  std::optional<RationalVector> point;
};

// Two-phase primal simplex over the rationals with Bland's rule. Free
// variables are split into a difference of nonnegative parts, finite upper
// bounds become rows. Throws DomainError on malformed dimensions.
LPResult solve(const LinearProgram& lp);

// Cutting-plane driver for programs whose rows are too many to materialize.
// `separate` receives each optimal point and returns rows it violates; the
// loop stops when it returns none. Infeasible or unbounded relaxations are
// returned as they are.
using Separator = std::function<std::vector<Row>(const RationalVector& point)>;
LPResult solve_with_row_generation(LinearProgram lp, const Separator& separate,
                                   std::size_t max_rounds = 10000);

// Evaluates every row of the program at a point; used by tests and callers
// that want to certify a reported optimum.
bool satisfies(const LinearProgram& lp, const RationalVector& point);

}  // namespace boxlab::lp
