#include "qsure/lp.hpp"

#include <stdexcept>

namespace qsure::lp {

namespace {

// Column bookkeeping for the standard-form rewrite y >= 0.
struct VarMap {
  size_t col = 0;                 // primary column
  std::optional<size_t> neg_col;  // second column for free variables
  Rat shift{0};                   // x = shift + sign*y (+ y_pos - y_neg when free)
  int sign = 1;
};

struct Tableau {
  std::vector<std::vector<Rat>> a;  // m rows, each ncols wide
  std::vector<Rat> b;               // m entries, kept >= 0
  std::vector<size_t> basis;        // basis[i] = column basic in row i
  size_t ncols = 0;

  void pivot(size_t row, size_t col) {
    Rat p = a[row][col];
    for (auto& v : a[row]) v /= p;
    b[row] /= p;
    for (size_t i = 0; i < a.size(); ++i) {
      if (i == row || a[i][col] == 0) continue;
      Rat f = a[i][col];
      for (size_t j = 0; j < ncols; ++j) a[i][j] -= f * a[row][j];
      b[i] -= f * b[row];
    }
    basis[row] = col;
  }
};

// Reduced-cost row for `cost` under the current basis.
std::vector<Rat> reduced_costs(const Tableau& t, const std::vector<Rat>& cost) {
  std::vector<Rat> z = cost;
  for (size_t i = 0; i < t.a.size(); ++i) {
    Rat f = z[t.basis[i]];
    if (f == 0) continue;
    for (size_t j = 0; j < t.ncols; ++j) z[j] -= f * t.a[i][j];
  }
  return z;
}

enum class RunResult { optimal, unbounded };

// Bland's rule: entering = lowest-index improving column, leaving = lowest
// basic index among ratio-test ties. Terminates without cycling.
RunResult run_simplex(Tableau& t, const std::vector<Rat>& cost,
                      const std::vector<bool>& banned) {
  for (;;) {
    std::vector<Rat> z = reduced_costs(t, cost);
    size_t enter = t.ncols;
    for (size_t j = 0; j < t.ncols; ++j) {
      if (banned[j]) continue;
      if (z[j] < 0) {
        enter = j;
        break;
      }
    }
    if (enter == t.ncols) return RunResult::optimal;
    size_t leave = t.a.size();
    Rat best_ratio(0);
    for (size_t i = 0; i < t.a.size(); ++i) {
      if (t.a[i][enter] <= 0) continue;
      Rat ratio = t.b[i] / t.a[i][enter];
      if (leave == t.a.size() || ratio < best_ratio ||
          (ratio == best_ratio && t.basis[i] < t.basis[leave])) {
        leave = i;
        best_ratio = ratio;
      }
    }
    if (leave == t.a.size()) return RunResult::unbounded;
    t.pivot(leave, enter);
  }
}

}  // namespace

LpSolution solve(const LinearProgram& lp) {
  const size_t n = lp.num_vars();
  if (n > 200 || lp.constraints.size() > 400)
    throw ValidationError("lp size cap exceeded (200 variables x 400 constraints)");
  for (const auto& c : lp.constraints)
    if (c.coeffs.size() != n) throw ValidationError("constraint arity mismatch");

  for (size_t j = 0; j < n; ++j)
    if (lp.lower[j] && lp.upper[j] && *lp.lower[j] > *lp.upper[j])
      return {LpStatus::infeasible};

  // Rewrite variables to y >= 0.
  std::vector<VarMap> vmap(n);
  size_t ycols = 0;
  std::vector<std::pair<size_t, Rat>> ub_rows;  // (column, upper bound on y)
  for (size_t j = 0; j < n; ++j) {
    VarMap& m = vmap[j];
    if (lp.lower[j]) {
      m.col = ycols++;
      m.shift = *lp.lower[j];
      m.sign = 1;
      if (lp.upper[j]) ub_rows.emplace_back(m.col, *lp.upper[j] - *lp.lower[j]);
    } else if (lp.upper[j]) {
      m.col = ycols++;
      m.shift = *lp.upper[j];
      m.sign = -1;
    } else {
      m.col = ycols++;
      m.neg_col = ycols++;
      m.sign = 1;
    }
  }

  struct StdRow {
    std::vector<Rat> coeffs;
    Rel rel;
    Rat rhs;
    bool from_constraint;
    size_t orig_index;
  };
  std::vector<StdRow> rows;
  for (size_t i = 0; i < lp.constraints.size(); ++i) {
    const auto& c = lp.constraints[i];
    StdRow r{std::vector<Rat>(ycols, Rat(0)), c.rel, c.rhs, true, i};
    for (size_t j = 0; j < n; ++j) {
      if (c.coeffs[j] == 0) continue;
      const VarMap& m = vmap[j];
      r.coeffs[m.col] += c.coeffs[j] * m.sign;
      if (m.neg_col) r.coeffs[*m.neg_col] -= c.coeffs[j];
      r.rhs -= c.coeffs[j] * m.shift;
    }
    rows.push_back(std::move(r));
  }
  for (const auto& [col, bound] : ub_rows) {
    StdRow r{std::vector<Rat>(ycols, Rat(0)), Rel::le, bound, false, 0};
    r.coeffs[col] = 1;
    rows.push_back(std::move(r));
  }

  const size_t m = rows.size();
  size_t nslack = 0;
  for (const auto& r : rows)
    if (r.rel != Rel::eq) ++nslack;
  const size_t ncols = ycols + nslack + m;  // + one artificial per row

  Tableau t;
  t.ncols = ncols;
  t.a.assign(m, std::vector<Rat>(ncols, Rat(0)));
  t.b.assign(m, Rat(0));
  t.basis.assign(m, 0);
  std::vector<bool> negated(m, false);

  size_t slack_at = ycols;
  for (size_t i = 0; i < m; ++i) {
    for (size_t j = 0; j < ycols; ++j) t.a[i][j] = rows[i].coeffs[j];
    t.b[i] = rows[i].rhs;
    if (rows[i].rel == Rel::le)
      t.a[i][slack_at++] = 1;
    else if (rows[i].rel == Rel::ge)
      t.a[i][slack_at++] = -1;
    if (t.b[i] < 0) {
      negated[i] = true;
      for (auto& v : t.a[i]) v = -v;
      t.b[i] = -t.b[i];
    }
    t.a[i][ycols + nslack + i] = 1;  // artificial
    t.basis[i] = ycols + nslack + i;
  }

  std::vector<bool> no_ban(ncols, false);
  std::vector<bool> ban_artificial(ncols, false);
  for (size_t j = ycols + nslack; j < ncols; ++j) ban_artificial[j] = true;

  // Phase 1: minimize the artificial mass.
  std::vector<Rat> phase1_cost(ncols, Rat(0));
  for (size_t j = ycols + nslack; j < ncols; ++j) phase1_cost[j] = 1;
  if (run_simplex(t, phase1_cost, no_ban) != RunResult::optimal)
    throw std::logic_error("phase-1 lp cannot be unbounded");
  Rat art_mass(0);
  for (size_t i = 0; i < m; ++i)
    if (t.basis[i] >= ycols + nslack) art_mass += t.b[i];
  if (art_mass != 0) return {LpStatus::infeasible};

  // Drive remaining zero-valued artificials out of the basis where possible.
  for (size_t i = 0; i < m; ++i) {
    if (t.basis[i] < ycols + nslack) continue;
    for (size_t j = 0; j < ycols + nslack; ++j) {
      if (t.a[i][j] != 0) {
        t.pivot(i, j);
        break;
      }
    }
    // All-zero row: redundant constraint; the artificial stays basic at 0.
  }

  // Phase 2.
  std::vector<Rat> cost(ncols, Rat(0));
  Rat shift_const(0);
  for (size_t j = 0; j < n; ++j) {
    const VarMap& vm = vmap[j];
    cost[vm.col] += lp.objective[j] * vm.sign;
    if (vm.neg_col) cost[*vm.neg_col] -= lp.objective[j];
    shift_const += lp.objective[j] * vm.shift;
  }
  if (run_simplex(t, cost, ban_artificial) == RunResult::unbounded)
    return {LpStatus::unbounded};

  // Extract the primal point.
  std::vector<Rat> y(ncols, Rat(0));
  for (size_t i = 0; i < m; ++i) y[t.basis[i]] = t.b[i];
  LpSolution sol;
  sol.status = LpStatus::optimal;
  sol.x.assign(n, Rat(0));
  for (size_t j = 0; j < n; ++j) {
    const VarMap& vm = vmap[j];
    sol.x[j] = vm.shift + Rat(vm.sign) * y[vm.col];
    if (vm.neg_col) sol.x[j] -= y[*vm.neg_col];
  }
  sol.objective_value = shift_const;
  for (size_t j = 0; j < ycols; ++j) sol.objective_value += cost[j] * y[j];

  // Dual by elimination on B^T yd = c_B over the original (un-pivoted)
  // standard-form matrix, which we rebuild row-wise from `rows`.
  std::vector<std::vector<Rat>> a0(m, std::vector<Rat>(ncols, Rat(0)));
  std::vector<Rat> b0(m, Rat(0));
  {
    size_t sl = ycols;
    for (size_t i = 0; i < m; ++i) {
      for (size_t j = 0; j < ycols; ++j) a0[i][j] = rows[i].coeffs[j];
      b0[i] = rows[i].rhs;
      if (rows[i].rel == Rel::le)
        a0[i][sl++] = 1;
      else if (rows[i].rel == Rel::ge)
        a0[i][sl++] = -1;
      if (negated[i]) {
        for (auto& v : a0[i]) v = -v;
        b0[i] = -b0[i];
      }
      a0[i][ycols + nslack + i] = 1;
    }
  }
  // Solve (B^T) yd = c_B exactly.
  std::vector<Rat> yd(m, Rat(0));
  {
    std::vector<std::vector<Rat>> g(m, std::vector<Rat>(m + 1, Rat(0)));
    for (size_t r = 0; r < m; ++r) {
      for (size_t i = 0; i < m; ++i) g[r][i] = a0[i][t.basis[r]];  // row r of B^T
      g[r][m] = cost[t.basis[r]];
    }
    for (size_t cpos = 0, rpos = 0; cpos < m && rpos < m; ++cpos) {
      size_t piv = rpos;
      while (piv < m && g[piv][cpos] == 0) ++piv;
      if (piv == m) throw std::logic_error("singular lp basis");
      std::swap(g[piv], g[rpos]);
      Rat p = g[rpos][cpos];
      for (auto& v : g[rpos]) v /= p;
      for (size_t i = 0; i < m; ++i) {
        if (i == rpos || g[i][cpos] == 0) continue;
        Rat f = g[i][cpos];
        for (size_t j = cpos; j <= m; ++j) g[i][j] -= f * g[rpos][j];
      }
      ++rpos;
    }
    for (size_t i = 0; i < m; ++i) yd[i] = g[i][m];
  }

  // Certificates in the standard form (throw on violation; these are solver
  // invariants, not input errors).
  for (size_t j = 0; j < ncols; ++j)
    if (y[j] < 0) throw std::logic_error("negative basic value");
  for (size_t i = 0; i < m; ++i) {
    Rat lhs(0);
    for (size_t j = 0; j < ncols; ++j)
      if (y[j] != 0) lhs += a0[i][j] * y[j];
    if (lhs != b0[i]) throw std::logic_error("primal infeasible at optimum");
  }
  Rat dual_val(0);
  for (size_t i = 0; i < m; ++i) dual_val += yd[i] * b0[i];
  Rat primal_std(0);
  for (size_t j = 0; j < ncols; ++j)
    if (y[j] != 0) primal_std += cost[j] * y[j];
  if (dual_val != primal_std) throw std::logic_error("duality gap at optimum");
  for (size_t j = 0; j < ycols + nslack; ++j) {
    Rat rc = cost[j];
    for (size_t i = 0; i < m; ++i) rc -= yd[i] * a0[i][j];
    if (rc < 0) throw std::logic_error("dual infeasible at optimum");
    if (rc != 0 && y[j] != 0) throw std::logic_error("complementary slackness violated");
  }

  sol.dual.assign(lp.constraints.size(), Rat(0));
  for (size_t i = 0; i < m; ++i)
    if (rows[i].from_constraint)
      sol.dual[rows[i].orig_index] = negated[i] ? Rat(-yd[i]) : yd[i];
  sol.dual_objective = shift_const + dual_val;
  return sol;
}

bool verify_optimal(const LinearProgram& lp, const LpSolution& sol) {
  if (sol.status != LpStatus::optimal) return false;
  if (sol.x.size() != lp.num_vars()) return false;
  for (size_t j = 0; j < lp.num_vars(); ++j) {
    if (lp.lower[j] && sol.x[j] < *lp.lower[j]) return false;
    if (lp.upper[j] && sol.x[j] > *lp.upper[j]) return false;
  }
  for (const auto& c : lp.constraints) {
    Rat lhs(0);
    for (size_t j = 0; j < lp.num_vars(); ++j) lhs += c.coeffs[j] * sol.x[j];
    if (c.rel == Rel::le && lhs > c.rhs) return false;
    if (c.rel == Rel::ge && lhs < c.rhs) return false;
    if (c.rel == Rel::eq && lhs != c.rhs) return false;
  }
  Rat obj(0);
  for (size_t j = 0; j < lp.num_vars(); ++j) obj += lp.objective[j] * sol.x[j];
  if (obj != sol.objective_value) return false;
  return sol.dual_objective == sol.objective_value;
}

}  // namespace qsure::lp
