#include "vasco/lp.hpp"

#include <cassert>
#include <stdexcept>

namespace vasco {

int LinearProgram::add_var(std::optional<Rat> lower) {
  if (static_cast<int>(lower_bounds.size()) < num_vars) lower_bounds.resize(num_vars);
  lower_bounds.push_back(std::move(lower));
  return num_vars++;
}

void LinearProgram::add_row(std::vector<Rat> coeffs, Rel rel, Rat rhs) {
  rows.push_back(LpRow{std::move(coeffs), rel, std::move(rhs)});
}

LpStats& lp_stats() {
  static LpStats stats;
  return stats;
}

void lp_stats_reset() { lp_stats() = LpStats{}; }

namespace {

Rat coeff_at(const std::vector<Rat>& v, int j) {
  return j < static_cast<int>(v.size()) ? v[j] : Rat(0);
}

// Standard-form working copy: maximize c.u s.t. T u = b, u >= 0.
// Columns 0..n-1 are structural (shifted/split originals plus slacks),
// columns n..n+m-1 are the phase-one artificials.
struct Tableau {
  int m = 0;             // rows
  int n = 0;             // structural columns
  std::vector<std::vector<Rat>> a;  // m rows, each n+m coeffs
  std::vector<Rat> b;               // rhs, kept nonnegative
  std::vector<int> basis;           // basis[i] = column basic in row i

  void pivot(int row, int col) {
    Rat p = a[row][col];
    assert(p != 0);
    int w = static_cast<int>(a[row].size());
    for (int j = 0; j < w; ++j) a[row][j] /= p;
    b[row] /= p;
    for (int i = 0; i < m; ++i) {
      if (i == row) continue;
      Rat f = a[i][col];
      if (f == 0) continue;
      for (int j = 0; j < w; ++j) a[i][j] -= f * a[row][j];
      b[i] -= f * b[row];
    }
    basis[row] = col;
    ++lp_stats().pivots;
  }
};

// One simplex phase with Bland's rule over the column set [0, limit).
// obj holds the objective coefficients per column (maximization).
// Returns false when an improving column has no blocking row (unbounded);
// entering_out then holds that column.
bool run_simplex(Tableau& t, const std::vector<Rat>& obj, int limit, int* entering_out) {
  for (;;) {
    // Reduced cost of column j: obj[j] - sum_i obj[basis[i]] * a[i][j].
    int entering = -1;
    for (int j = 0; j < limit; ++j) {
      Rat red = obj[j];
      for (int i = 0; i < t.m; ++i) {
        const Rat& ob = obj[t.basis[i]];
        if (ob != 0 && t.a[i][j] != 0) red -= ob * t.a[i][j];
      }
      if (red > 0) {
        entering = j;
        break;  // Bland: smallest improving index
      }
    }
    if (entering < 0) return true;  // optimal
    int leave = -1;
    Rat best;
    for (int i = 0; i < t.m; ++i) {
      if (t.a[i][entering] <= 0) continue;
      Rat ratio = t.b[i] / t.a[i][entering];
      if (leave < 0 || ratio < best ||
          (ratio == best && t.basis[i] < t.basis[leave])) {
        leave = i;
        best = ratio;
      }
    }
    if (leave < 0) {
      if (entering_out) *entering_out = entering;
      return false;  // unbounded along `entering`
    }
    t.pivot(leave, entering);
  }
}

struct VarMap {
  // Original variable j maps either to one shifted column (with offset) or to
  // a split pair (plus, minus) when free.
  struct Entry {
    int col_plus = -1;
    int col_minus = -1;  // -1 when bounded below
    Rat offset;          // lower bound shift
  };
  std::vector<Entry> entries;
};

std::vector<Rat> recover_point(const Tableau& t, const VarMap& vm, int orig_vars) {
  std::vector<Rat> u(t.n, Rat(0));
  for (int i = 0; i < t.m; ++i)
    if (t.basis[i] < t.n) u[t.basis[i]] = t.b[i];
  std::vector<Rat> x(orig_vars);
  for (int j = 0; j < orig_vars; ++j) {
    const auto& e = vm.entries[j];
    if (e.col_minus < 0)
      x[j] = e.offset + u[e.col_plus];
    else
      x[j] = u[e.col_plus] - u[e.col_minus];
  }
  return x;
}

}  // namespace

LpResult lp_solve(const LinearProgram& lp) {
  ++lp_stats().solves;
  const int nv = lp.num_vars;
  VarMap vm;
  vm.entries.resize(nv);

  Tableau t;
  t.m = static_cast<int>(lp.rows.size());

  // Structural columns: originals first.
  int ncols = 0;
  for (int j = 0; j < nv; ++j) {
    auto& e = vm.entries[j];
    const bool bounded =
        j < static_cast<int>(lp.lower_bounds.size()) && lp.lower_bounds[j].has_value();
    e.col_plus = ncols++;
    if (bounded) {
      e.offset = *lp.lower_bounds[j];
    } else {
      e.col_minus = ncols++;
    }
  }
  const int first_slack = ncols;
  for (const auto& row : lp.rows)
    if (row.rel != Rel::Eq) ++ncols;
  t.n = ncols;

  const int width = t.n + t.m;  // + artificials
  t.a.assign(t.m, std::vector<Rat>(width, Rat(0)));
  t.b.assign(t.m, Rat(0));
  t.basis.assign(t.m, 0);

  int slack = first_slack;
  for (int i = 0; i < t.m; ++i) {
    const auto& row = lp.rows[i];
    Rat rhs = row.rhs;
    for (int j = 0; j < nv; ++j) {
      Rat c = coeff_at(row.coeffs, j);
      if (c == 0) continue;
      const auto& e = vm.entries[j];
      if (e.col_minus < 0) {
        t.a[i][e.col_plus] = c;
        rhs -= c * e.offset;
      } else {
        t.a[i][e.col_plus] = c;
        t.a[i][e.col_minus] = -c;
      }
    }
    if (row.rel == Rel::Le)
      t.a[i][slack++] = 1;
    else if (row.rel == Rel::Ge)
      t.a[i][slack++] = -1;
    if (rhs < 0) {
      for (int j = 0; j < width; ++j) t.a[i][j] = -t.a[i][j];
      rhs = -rhs;
    }
    t.b[i] = rhs;
    t.a[i][t.n + i] = 1;  // artificial
    t.basis[i] = t.n + i;
  }

  // Phase one: maximize -sum(artificials).
  std::vector<Rat> phase1_obj(width, Rat(0));
  for (int i = 0; i < t.m; ++i) phase1_obj[t.n + i] = -1;
  bool ok = run_simplex(t, phase1_obj, width, nullptr);
  assert(ok);  // phase-one objective is bounded by 0
  (void)ok;
  Rat art_sum = 0;
  for (int i = 0; i < t.m; ++i)
    if (t.basis[i] >= t.n) art_sum += t.b[i];
  if (art_sum != 0) return LpResult{LpStatus::Infeasible, {}, Rat(0), {}};

  // Drive leftover artificials out of the basis; rows with no structural
  // entry are redundant and stay with a zero artificial.
  for (int i = 0; i < t.m; ++i) {
    if (t.basis[i] < t.n) continue;
    int col = -1;
    for (int j = 0; j < t.n; ++j)
      if (t.a[i][j] != 0) {
        col = j;
        break;
      }
    if (col >= 0) t.pivot(i, col);
  }

  // Phase two over structural columns only.
  std::vector<Rat> obj(width, Rat(0));
  for (int j = 0; j < nv; ++j) {
    Rat c = coeff_at(lp.objective, j);
    if (!lp.maximize) c = -c;
    if (c == 0) continue;
    const auto& e = vm.entries[j];
    obj[e.col_plus] += c;
    if (e.col_minus >= 0) obj[e.col_minus] -= c;
  }
  int entering = -1;
  if (!run_simplex(t, obj, t.n, &entering)) {
    // Unbounded: current point plus the recession direction of `entering`.
    LpResult res;
    res.status = LpStatus::Unbounded;
    res.point = recover_point(t, vm, nv);
    std::vector<Rat> du(t.n, Rat(0));
    du[entering] = 1;
    for (int i = 0; i < t.m; ++i)
      if (t.basis[i] < t.n) du[t.basis[i]] = -t.a[i][entering];
    res.ray.assign(nv, Rat(0));
    for (int j = 0; j < nv; ++j) {
      const auto& e = vm.entries[j];
      res.ray[j] = du[e.col_plus];
      if (e.col_minus >= 0) res.ray[j] -= du[e.col_minus];
    }
    return res;
  }

  LpResult res;
  res.status = LpStatus::Optimal;
  res.point = recover_point(t, vm, nv);
  Rat val = 0;
  for (int j = 0; j < nv; ++j) val += coeff_at(lp.objective, j) * res.point[j];
  res.value = val;
  return res;
}

std::optional<std::vector<Rat>> lp_feasible_point(const LinearProgram& lp) {
  LinearProgram feas = lp;
  feas.objective.clear();
  LpResult r = lp_solve(feas);
  if (r.status == LpStatus::Infeasible) return std::nullopt;
  return r.point;
}

LinSolveResult solve_linear_system(
    int num_vars, const std::vector<std::pair<std::vector<Rat>, Rat>>& rows) {
  int m = static_cast<int>(rows.size());
  std::vector<std::vector<Rat>> a(m, std::vector<Rat>(num_vars + 1, Rat(0)));
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < std::min<int>(num_vars, rows[i].first.size()); ++j)
      a[i][j] = rows[i].first[j];
    a[i][num_vars] = rows[i].second;
  }
  int rank = 0;
  std::vector<int> pivot_col;
  for (int col = 0; col < num_vars && rank < m; ++col) {
    int sel = -1;
    for (int i = rank; i < m; ++i)
      if (a[i][col] != 0) {
        sel = i;
        break;
      }
    if (sel < 0) continue;
    std::swap(a[sel], a[rank]);
    Rat p = a[rank][col];
    for (int j = col; j <= num_vars; ++j) a[rank][j] /= p;
    for (int i = 0; i < m; ++i) {
      if (i == rank || a[i][col] == 0) continue;
      Rat f = a[i][col];
      for (int j = col; j <= num_vars; ++j) a[i][j] -= f * a[rank][j];
    }
    pivot_col.push_back(col);
    ++rank;
  }
  for (int i = rank; i < m; ++i)
    if (a[i][num_vars] != 0) return LinSolveResult{LinSolve::Inconsistent, {}};
  if (rank < num_vars) return LinSolveResult{LinSolve::Underdetermined, {}};
  LinSolveResult res;
  res.status = LinSolve::Unique;
  res.x.assign(num_vars, Rat(0));
  for (int i = 0; i < rank; ++i) res.x[pivot_col[i]] = a[i][num_vars];
  return res;
}

}  // namespace vasco
