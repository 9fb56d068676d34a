#pragma once

#include "vasco/rational.hpp"

#include <optional>
#include <vector>

namespace vasco {

enum class Rel { Le, Eq, Ge };

struct LpRow {
  std::vector<Rat> coeffs;  // one per variable, missing entries treated as 0
  Rel rel = Rel::Le;
  Rat rhs;
};

// max/min c.x subject to rows; per-variable optional lower bounds, variables
// without one are free. No implicit nonnegativity.
struct LinearProgram {
  int num_vars = 0;
  std::vector<LpRow> rows;
  std::vector<Rat> objective;  // empty means feasibility only (objective 0)
  bool maximize = true;
  std::vector<std::optional<Rat>> lower_bounds;  // sized num_vars or empty

  int add_var(std::optional<Rat> lower = std::nullopt);
  void add_row(std::vector<Rat> coeffs, Rel rel, Rat rhs);
};

enum class LpStatus { Optimal, Unbounded, Infeasible };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  std::vector<Rat> point;  // Optimal: an optimal basic solution; Unbounded: a feasible point
  Rat value;               // objective value at point when Optimal
  std::vector<Rat> ray;    // Unbounded: recession direction strictly improving the objective
};

// Two-phase primal simplex over exact rationals with Bland's pivot rule
// (smallest eligible index for both the entering and the leaving variable),
// so the solve terminates on every input and is deterministic.
LpResult lp_solve(const LinearProgram& lp);

// Phase-one only: some feasible point, or nothing.
std::optional<std::vector<Rat>> lp_feasible_point(const LinearProgram& lp);

// Running totals for report statistics.
struct LpStats {
  std::uint64_t solves = 0;
  std::uint64_t pivots = 0;
};
LpStats& lp_stats();
void lp_stats_reset();

enum class LinSolve { Unique, Inconsistent, Underdetermined };

struct LinSolveResult {
  LinSolve status = LinSolve::Inconsistent;
  std::vector<Rat> x;
};

// Exact Gaussian elimination for square-rank systems given as rows of
// (coefficients, rhs).
LinSolveResult solve_linear_system(int num_vars,
                                   const std::vector<std::pair<std::vector<Rat>, Rat>>& rows);

}  // namespace vasco
