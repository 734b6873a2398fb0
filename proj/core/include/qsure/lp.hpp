#pragma once

#include <optional>
#include <vector>

#include "qsure/error.hpp"
#include "qsure/rational.hpp"

namespace qsure::lp {

enum class Rel { le, eq, ge };

struct Constraint {
  std::vector<Rat> coeffs;
  Rel rel;
  Rat rhs;
};

// Dense minimization problem over exact rationals. Default variable domain is
// x_j >= 0; bounds can be widened (set_free) or tightened per variable.
struct LinearProgram {
  explicit LinearProgram(size_t nvars)
      : objective(nvars, Rat(0)), lower(nvars, Rat(0)), upper(nvars, std::nullopt) {}

  size_t num_vars() const { return objective.size(); }

  void add_constraint(std::vector<Rat> coeffs, Rel rel, Rat rhs) {
    if (coeffs.size() != num_vars()) throw ValidationError("constraint arity mismatch");
    constraints.push_back({std::move(coeffs), rel, std::move(rhs)});
  }
  void set_free(size_t j) {
    lower[j].reset();
    upper[j].reset();
  }
  void set_bounds(size_t j, std::optional<Rat> lo, std::optional<Rat> hi) {
    lower[j] = std::move(lo);
    upper[j] = std::move(hi);
  }

  std::vector<Rat> objective;  // minimize objective . x
  std::vector<Constraint> constraints;
  std::vector<std::optional<Rat>> lower, upper;
};

enum class LpStatus { optimal, infeasible, unbounded };

struct LpSolution {
  LpStatus status;
  // Valid when status == optimal:
  std::vector<Rat> x;
  Rat objective_value{0};
  // One multiplier per constraint row (bound multipliers are folded into the
  // internal certificate, not exposed).
  std::vector<Rat> dual;
  // Dual objective in original units; equals objective_value at an optimum.
  Rat dual_objective{0};
};

// Two-phase simplex with Bland's anti-cycling rule, all pivoting exact.
// Before returning an optimum the solver re-verifies primal feasibility, dual
// feasibility and complementary slackness in the standard form and throws
// std::logic_error if any certificate fails. Size cap: 200 variables x 400
// constraints (ValidationError beyond).
LpSolution solve(const LinearProgram& lp);

// Independent re-substitution: bounds, constraints, objective recomputation
// and the strong-duality equality.
bool verify_optimal(const LinearProgram& lp, const LpSolution& sol);

}  // namespace qsure::lp
