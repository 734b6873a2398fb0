#include "qsure/testing.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

#include "qsure/lp.hpp"

namespace qsure::testing {

AtomSet TestProblem::universe() const {
  AtomSet u = h0.universe();
  auto u1 = h1.universe();
  u.insert(u1.begin(), u1.end());
  return u;
}

TestFunction::TestFunction(BoundedFunction f) : f_(std::move(f)) {
  auto in_range = [](const Rat& v) { return v >= 0 && v <= 1; };
  if (!in_range(f_.default_value))
    throw ValidationError("test default value " + rat_str(f_.default_value) +
                          " is outside [0, 1]");
  for (const auto& [id, v] : f_.values)
    if (!in_range(v))
      throw ValidationError("test value " + rat_str(v) + " at atom '" + id +
                            "' is outside [0, 1]");
}

TestFunction TestFunction::indicator(const AtomSet& atoms) {
  BoundedFunction f;
  for (const auto& id : atoms) f.values.emplace(id, Rat(1));
  return TestFunction(std::move(f));
}

TestFunction TestFunction::constant(const Rat& c) {
  BoundedFunction f;
  f.default_value = c;
  return TestFunction(std::move(f));
}

Rat expectation(const ProbabilityMeasure& mu, const TestFunction& phi) {
  Rat e(0);
  for (const auto& [id, w] : mu.weights()) e += w * phi.at(id);
  return e;
}

Rat risk(const TestFunction& phi, const TestProblem& prob) {
  Rat sup0(0);
  bool first = true;
  for (const auto& mu : prob.h0.members()) {
    Rat e = expectation(mu, phi);
    if (first || e > sup0) sup0 = e;
    first = false;
  }
  Rat sup1(0);
  first = true;
  for (const auto& nu : prob.h1.members()) {
    Rat e = Rat(1) - expectation(nu, phi);
    if (first || e > sup1) sup1 = e;
    first = false;
  }
  return sup0 + sup1;
}

HullDistance min_tv_between_hulls(const TestProblem& prob) {
  const auto& ms = prob.h0.members();
  const auto& ns = prob.h1.members();
  AtomSet uni = prob.universe();
  std::vector<std::string> atoms(uni.begin(), uni.end());
  size_t m = ms.size(), n = ns.size(), k = atoms.size();

  // variables: lambda (m), gamma (n), t (k); minimize (1/2) sum t
  lp::LinearProgram prog(m + n + k);
  for (size_t a = 0; a < k; ++a) prog.objective[m + n + a] = Rat(1, 2);
  for (size_t a = 0; a < k; ++a) {
    // t_a >= sum lambda_i mu_i(a) - sum gamma_j nu_j(a) and the mirror
    std::vector<Rat> up(m + n + k, Rat(0)), down(m + n + k, Rat(0));
    for (size_t i = 0; i < m; ++i) {
      up[i] = ms[i].at(atoms[a]);
      down[i] = -up[i];
    }
    for (size_t j = 0; j < n; ++j) {
      up[m + j] = -ns[j].at(atoms[a]);
      down[m + j] = -up[m + j];
    }
    up[m + n + a] = down[m + n + a] = Rat(-1);
    prog.add_constraint(std::move(up), lp::Rel::le, Rat(0));
    prog.add_constraint(std::move(down), lp::Rel::le, Rat(0));
  }
  {
    std::vector<Rat> simplex0(m + n + k, Rat(0)), simplex1(m + n + k, Rat(0));
    for (size_t i = 0; i < m; ++i) simplex0[i] = 1;
    for (size_t j = 0; j < n; ++j) simplex1[m + j] = 1;
    prog.add_constraint(std::move(simplex0), lp::Rel::eq, Rat(1));
    prog.add_constraint(std::move(simplex1), lp::Rel::eq, Rat(1));
  }

  auto sol = lp::solve(prog);
  if (sol.status != lp::LpStatus::optimal)
    throw std::logic_error("hull-distance program must be feasible and bounded");

  std::vector<Rat> lam(sol.x.begin(), sol.x.begin() + m);
  std::vector<Rat> gam(sol.x.begin() + m, sol.x.begin() + m + n);
  return HullDistance{sol.objective_value, mix(lam, ms), mix(gam, ns), std::move(lam),
                      std::move(gam)};
}

TestFunction optimal_test(const ProbabilityMeasure& mu, const ProbabilityMeasure& nu) {
  auto hj = hahn_jordan(nu.measure() - mu.measure());
  return TestFunction::indicator(hj.pos_atoms);
}

TestSolution min_risk(const TestProblem& prob) {
  auto hull = min_tv_between_hulls(prob);
  const auto& ms = prob.h0.members();
  const auto& ns = prob.h1.members();
  AtomSet uni = prob.universe();
  std::vector<std::string> atoms(uni.begin(), uni.end());
  size_t k = atoms.size();

  // variables: phi (k) in [0,1], then the two epigraph maxima s, t >= 0;
  // minimize s + t
  lp::LinearProgram prog(k + 2);
  prog.objective[k] = prog.objective[k + 1] = Rat(1);
  for (size_t a = 0; a < k; ++a) prog.set_bounds(a, Rat(0), Rat(1));
  for (const auto& mu : ms) {
    std::vector<Rat> row(k + 2, Rat(0));
    for (size_t a = 0; a < k; ++a) row[a] = mu.at(atoms[a]);
    row[k] = Rat(-1);
    prog.add_constraint(std::move(row), lp::Rel::le, Rat(0));
  }
  for (const auto& nu : ns) {
    std::vector<Rat> row(k + 2, Rat(0));
    for (size_t a = 0; a < k; ++a) row[a] = -nu.at(atoms[a]);
    row[k + 1] = Rat(-1);
    prog.add_constraint(std::move(row), lp::Rel::le, Rat(-1));
  }

  auto sol = lp::solve(prog);
  if (sol.status != lp::LpStatus::optimal)
    throw std::logic_error("minimax-risk program must be feasible and bounded");
  if (sol.objective_value != Rat(1) - hull.d)
    throw std::logic_error("minimax risk must equal one minus the hull distance");

  // canonical optimizer: the deterministic indicator from the optimal hull
  // pair when it already attains the optimum, else the program's vertex
  TestFunction phi = optimal_test(hull.mu_star, hull.nu_star);
  if (risk(phi, prob) != sol.objective_value) {
    BoundedFunction f;
    for (size_t a = 0; a < k; ++a)
      if (sol.x[a] != 0) f.values.emplace(atoms[a], sol.x[a]);
    phi = TestFunction(std::move(f));
    if (risk(phi, prob) != sol.objective_value)
      throw std::logic_error("risk of the program optimizer must match its objective");
  }

  return TestSolution{hull.d,          hull.mu_star,          hull.nu_star, std::move(phi),
                      sol.objective_value, std::move(hull.h0_weights),
                      std::move(hull.h1_weights)};
}

UnbiasedResult strictly_unbiased_exists(const TestProblem& prob, const Rat& epsilon) {
  if (epsilon < 0) throw ValidationError("epsilon must be nonnegative");
  auto solution = min_risk(prob);
  UnbiasedResult out;
  out.d_tv = solution.d_tv;
  if (!(solution.d_tv > epsilon)) return out;  // boundary equality stays false

  const auto& phi = solution.phi_star;
  Rat sup0(0), inf1(0);
  bool first = true;
  for (const auto& mu : prob.h0.members()) {
    Rat e = expectation(mu, phi);
    if (first || e > sup0) sup0 = e;
    first = false;
  }
  first = true;
  for (const auto& nu : prob.h1.members()) {
    Rat e = expectation(nu, phi);
    if (first || e < inf1) inf1 = e;
    first = false;
  }
  if (!(inf1 > sup0 + epsilon))
    throw std::logic_error("optimal test must witness the strict gap");
  out.exists = true;
  out.witness = phi;
  out.h0_sup = sup0;
  out.h1_inf = inf1;
  return out;
}

}  // namespace qsure::testing
