#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qsure/family.hpp"
#include "qsure/measure.hpp"

namespace qsure::testing {

// Null and alternative hypothesis families over a shared finite universe.
// epsilon is the unbiasedness margin some workflows carry along.
struct TestProblem {
  MeasureFamily h0, h1;
  std::optional<Rat> epsilon;

  AtomSet universe() const;
};

// A randomized test: atomwise acceptance probability in [0, 1].
class TestFunction {
 public:
  explicit TestFunction(BoundedFunction f);  // validates the range

  static TestFunction indicator(const AtomSet& atoms);
  static TestFunction constant(const Rat& c);

  const BoundedFunction& fn() const { return f_; }
  const Rat& at(const std::string& atom_id) const { return f_.at(atom_id); }

  friend bool operator==(const TestFunction&, const TestFunction&) = default;

 private:
  BoundedFunction f_;
};

Rat expectation(const ProbabilityMeasure& mu, const TestFunction& phi);

// Worst-case error sum: sup over H0 of E_mu(phi) plus sup over H1 of
// E_nu(1 - phi). The suprema over the convex hulls are attained at members,
// so both are member maxima.
Rat risk(const TestFunction& phi, const TestProblem& prob);

// Exact total-variation distance between the two convex hulls with the
// optimizing hull points and their mixing weights.
struct HullDistance {
  Rat d;
  ProbabilityMeasure mu_star, nu_star;
  std::vector<Rat> h0_weights, h1_weights;
};

HullDistance min_tv_between_hulls(const TestProblem& prob);

// Indicator of the positive part of nu - mu; attains
// E_nu(phi) - E_mu(phi) = d_TV(mu, nu) exactly.
TestFunction optimal_test(const ProbabilityMeasure& mu, const ProbabilityMeasure& nu);

struct TestSolution {
  Rat d_tv;
  ProbabilityMeasure mu_star, nu_star;
  TestFunction phi_star;
  Rat min_risk;
  std::vector<Rat> h0_weights, h1_weights;
};

// Minimax risk by a primal program over tests, with the identity
// min_risk = 1 - d_tv asserted in exact arithmetic. phi_star is the
// deterministic indicator built from the optimal hull pair whenever that
// indicator already attains the optimum, otherwise the program's own
// optimizer.
TestSolution min_risk(const TestProblem& prob);

struct UnbiasedResult {
  bool exists = false;
  Rat d_tv;
  // Present when exists: a test with h1_inf > h0_sup + epsilon.
  std::optional<TestFunction> witness;
  Rat h0_sup{0};  // sup over H0 of E(phi)
  Rat h1_inf{0};  // inf over H1 of E(phi)
};

// Strictly unbiased tests exist iff d_tv exceeds epsilon strictly; equality
// returns false. The witness is verified by exact evaluation.
UnbiasedResult strictly_unbiased_exists(const TestProblem& prob, const Rat& epsilon);

}  // namespace qsure::testing
