#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "qsure/lp.hpp"
#include "test_support.hpp"

using namespace qsure;
using namespace qsure::lp;

namespace {

// Exhaustive vertex oracle for small bounded LPs: intersect every choice of
// n candidate hyperplanes (constraints as equalities plus active bounds),
// keep feasible points, return the best objective.
std::optional<Rat> vertex_oracle(const LinearProgram& p) {
  const size_t n = p.num_vars();
  struct Plane {
    std::vector<Rat> a;
    Rat b;
  };
  std::vector<Plane> planes;
  for (const auto& c : p.constraints) planes.push_back({c.coeffs, c.rhs});
  for (size_t j = 0; j < n; ++j) {
    std::vector<Rat> e(n, Rat(0));
    e[j] = 1;
    if (p.lower[j]) planes.push_back({e, *p.lower[j]});
    if (p.upper[j]) planes.push_back({e, *p.upper[j]});
  }
  std::vector<size_t> idx(planes.size());
  for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;

  std::optional<Rat> best;
  std::vector<size_t> pick(n);
  auto feasible = [&](const std::vector<Rat>& x) {
    for (size_t j = 0; j < n; ++j) {
      if (p.lower[j] && x[j] < *p.lower[j]) return false;
      if (p.upper[j] && x[j] > *p.upper[j]) return false;
    }
    for (const auto& c : p.constraints) {
      Rat lhs(0);
      for (size_t j = 0; j < n; ++j) lhs += c.coeffs[j] * x[j];
      if (c.rel == Rel::le && lhs > c.rhs) return false;
      if (c.rel == Rel::ge && lhs < c.rhs) return false;
      if (c.rel == Rel::eq && lhs != c.rhs) return false;
    }
    return true;
  };
  auto try_pick = [&]() {
    // solve the n x n system by exact elimination
    std::vector<std::vector<Rat>> g(n, std::vector<Rat>(n + 1, Rat(0)));
    for (size_t i = 0; i < n; ++i) {
      g[i] = planes[pick[i]].a;
      g[i].push_back(planes[pick[i]].b);
    }
    for (size_t c = 0, r = 0; c < n; ++c) {
      size_t piv = r;
      while (piv < n && g[piv][c] == 0) ++piv;
      if (piv == n) return;  // singular: not a vertex
      std::swap(g[piv], g[r]);
      Rat pv = g[r][c];
      for (auto& v : g[r]) v /= pv;
      for (size_t i = 0; i < n; ++i) {
        if (i == r || g[i][c] == 0) continue;
        Rat f = g[i][c];
        for (size_t j = c; j <= n; ++j) g[i][j] -= f * g[r][j];
      }
      if (++r == n) break;
    }
    std::vector<Rat> x(n);
    for (size_t i = 0; i < n; ++i) x[i] = g[i][n];
    if (!feasible(x)) return;
    Rat obj(0);
    for (size_t j = 0; j < n; ++j) obj += p.objective[j] * x[j];
    if (!best || obj < *best) best = obj;
  };
  // iterate over n-subsets of planes
  std::vector<size_t> comb(n);
  auto rec = [&](auto&& self, size_t start, size_t depth) -> void {
    if (depth == n) {
      pick = comb;
      try_pick();
      return;
    }
    for (size_t i = start; i < planes.size(); ++i) {
      comb[depth] = i;
      self(self, i + 1, depth + 1);
    }
  };
  rec(rec, 0, 0);
  return best;
}

}  // namespace

TEST_CASE("one-variable floors") {
  LinearProgram p(1);
  p.objective = {Rat(1)};
  p.add_constraint({Rat(1)}, Rel::ge, Rat(1));
  auto s = solve(p);
  REQUIRE(s.status == LpStatus::optimal);
  CHECK(s.x[0] == Rat(1));
  CHECK(s.objective_value == Rat(1));
  CHECK(verify_optimal(p, s));
}

TEST_CASE("infeasible box") {
  LinearProgram p(1);
  p.add_constraint({Rat(1)}, Rel::le, Rat(-1));
  auto s = solve(p);  // x >= 0 by default
  CHECK(s.status == LpStatus::infeasible);
}

TEST_CASE("unbounded ray") {
  LinearProgram p(1);
  p.objective = {Rat(-1)};
  auto s = solve(p);
  CHECK(s.status == LpStatus::unbounded);
}

TEST_CASE("free variables and lower bounds") {
  LinearProgram p(1);
  p.objective = {Rat(1)};
  p.set_free(0);
  p.add_constraint({Rat(1)}, Rel::ge, Rat(-5));
  auto s = solve(p);
  REQUIRE(s.status == LpStatus::optimal);
  CHECK(s.x[0] == Rat(-5));
  CHECK(verify_optimal(p, s));
}

TEST_CASE("equality rows carry duals") {
  LinearProgram p(2);
  p.objective = {Rat(1), Rat(2)};
  p.add_constraint({Rat(1), Rat(1)}, Rel::eq, Rat(2));
  auto s = solve(p);
  REQUIRE(s.status == LpStatus::optimal);
  CHECK(s.objective_value == Rat(2));  // all mass on the cheap variable
  CHECK(s.x[0] == Rat(2));
  CHECK(s.dual_objective == s.objective_value);
  CHECK(s.dual.size() == 1);
  CHECK(verify_optimal(p, s));
}

TEST_CASE("half-l1 distance as an lp") {
  // d_tv(Bern(3/10), Bern(7/10)) via: min (t_h + t_t)/2, t_a >= +-(mu_a - nu_a).
  LinearProgram p(2);
  p.objective = {Rat(1, 2), Rat(1, 2)};
  Rat diff_h = Rat(7, 10) - Rat(3, 10);   // heads weights
  Rat diff_t = Rat(3, 10) - Rat(7, 10);   // tails weights
  p.add_constraint({Rat(-1), Rat(0)}, Rel::le, diff_h * -1);
  p.add_constraint({Rat(-1), Rat(0)}, Rel::le, diff_h);
  p.add_constraint({Rat(0), Rat(-1)}, Rel::le, diff_t * -1);
  p.add_constraint({Rat(0), Rat(-1)}, Rel::le, diff_t);
  // constraints read -t_a <= +-diff_a, i.e. t_a >= -+diff_a
  auto s = solve(p);
  REQUIRE(s.status == LpStatus::optimal);
  CHECK(s.objective_value == Rat(2, 5));
  CHECK(verify_optimal(p, s));
}

TEST_CASE("row and column permutations preserve the optimum") {
  LinearProgram p(3);
  p.objective = {Rat(3), Rat(1), Rat(2)};
  p.add_constraint({Rat(1), Rat(1), Rat(1)}, Rel::ge, Rat(4));
  p.add_constraint({Rat(2), Rat(0), Rat(1)}, Rel::ge, Rat(3));
  p.add_constraint({Rat(0), Rat(1), Rat(3)}, Rel::le, Rat(10));
  auto s0 = solve(p);
  REQUIRE(s0.status == LpStatus::optimal);

  LinearProgram rowp = p;
  std::swap(rowp.constraints[0], rowp.constraints[2]);
  auto s1 = solve(rowp);
  REQUIRE(s1.status == LpStatus::optimal);
  CHECK(s1.objective_value == s0.objective_value);

  // column permutation (0 2 1)
  LinearProgram colp(3);
  std::vector<size_t> perm{0, 2, 1};
  for (size_t j = 0; j < 3; ++j) colp.objective[perm[j]] = p.objective[j];
  for (const auto& c : p.constraints) {
    std::vector<Rat> cc(3, Rat(0));
    for (size_t j = 0; j < 3; ++j) cc[perm[j]] = c.coeffs[j];
    colp.add_constraint(cc, c.rel, c.rhs);
  }
  auto s2 = solve(colp);
  REQUIRE(s2.status == LpStatus::optimal);
  CHECK(s2.objective_value == s0.objective_value);
}

TEST_CASE("random small lps match exhaustive vertex enumeration") {
  tsup::Rng rng(71);
  int solved = 0;
  for (int iter = 0; iter < 60; ++iter) {
    size_t n = static_cast<size_t>(rng.range(1, 4));
    LinearProgram p(n);
    for (size_t j = 0; j < n; ++j) {
      p.objective[j] = Rat(rng.range(-6, 6), rng.range(1, 3));
      p.set_bounds(j, Rat(0), Rat(rng.range(1, 5)));  // box keeps it bounded
    }
    int rows = static_cast<int>(rng.range(0, 3));
    for (int r = 0; r < rows; ++r) {
      std::vector<Rat> a(n);
      for (size_t j = 0; j < n; ++j) a[j] = Rat(rng.range(-4, 4));
      // nonnegative rhs keeps x = 0 feasible
      p.add_constraint(a, Rel::le, Rat(rng.range(0, 8)));
    }
    auto s = solve(p);
    REQUIRE(s.status == LpStatus::optimal);
    CHECK(verify_optimal(p, s));
    auto oracle = vertex_oracle(p);
    REQUIRE(oracle.has_value());
    CHECK(s.objective_value == *oracle);
    ++solved;
  }
  CHECK(solved == 60);
}

TEST_CASE("size cap") {
  CHECK_THROWS_AS(solve(LinearProgram(201)), ValidationError);
}
