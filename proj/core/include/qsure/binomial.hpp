#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qsure/family.hpp"
#include "qsure/realset.hpp"

namespace qsure::binom {

// Parameter box for the one-step model: up factors in [u0, U0], down factors
// in [d0, D0], up probabilities in [pi0, Pi0].
struct ModelParams {
  Rat u0, U0, d0, D0, pi0, Pi0;

  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

struct ParamCheck {
  std::string name;
  bool pass;
  std::string detail;  // the instantiated inequality
};

struct ParamReport {
  std::vector<ParamCheck> checks;
  bool base_ok = false;          // box well-formed and d0 < 1 < U0
  bool strengthened_ok = false;  // d0 < min(u0,D0) and max(u0,D0) < U0
  bool overall = false;
};

ParamReport validate_params(const ModelParams& p);

// One model measure: price moves to u with probability pi, to d otherwise.
// u == d degenerates to the point mass at that value.
struct BinMeasure {
  Rat u, d, pi;

  bool is_point_mass() const { return u == d; }
  friend bool operator==(const BinMeasure&, const BinMeasure&) = default;
};

// Law as a discrete measure; atoms are the canonical rational strings of the
// price points.
ProbabilityMeasure law(const BinMeasure& r);
// The support {d, u}, ascending ({a} for a point mass).
std::vector<Rat> support_points(const BinMeasure& r);

enum class Component { r0, r1, r2, outside };

// The strictly disjointly supported alternative family inside the model:
//   r0: laws pi_tilde·δ_{f(d)} + (1−pi_tilde)·δ_d for d in [d0, m0)
//   r1: point masses δ_a for a in [u0, D0]           (only when overlapping)
//   r2: the boundary law with d = D0 = m0            (only when separated)
// where m0 = min(u0, D0), M0 = max(u0, D0) and f maps [d0, m0] onto [M0, U0]
// decreasingly with f(d0) = U0, f(m0) = M0. "Overlapping" means D0 >= u0.
struct DisjointAlternative {
  ModelParams params;
  std::shared_ptr<const sets::PiecewiseLinearBijection> f;
  Rat pi_tilde, m0, M0;
  bool overlapping = false;
};

// f defaults to the line through (d0, U0) and (m0, M0); a custom bijection
// must hit exactly those boundary values. pi_tilde defaults to the midpoint
// (pi0+Pi0)/2 and must stay inside [pi0, Pi0].
DisjointAlternative build_alternative(
    const ModelParams& p,
    std::shared_ptr<const sets::PiecewiseLinearBijection> f = nullptr,
    std::optional<Rat> pi_tilde = std::nullopt);

// Exact component membership. Two-point members need pi == pi_tilde and
// u == f(d); point masses land in r1. Parameters outside the box are errors.
Component classify_member(const BinMeasure& r, const DisjointAlternative& alt);

struct Cover {
  BinMeasure q1, q2;
  bool identity = false;    // q was already in the alternative
  bool support_ok = false;  // S_q inside S_q1 ∪ S_q2
  bool ac_ok = false;       // law(q) ≪ (law(q1)+law(q2))/2
};

// Two alternative members whose supports absorb S_q: q1 is built from d_q
// (upper leg f(d_q), or the point mass at d_q when d_q lies in the overlap),
// q2 from u_q (lower leg f⁻¹(u_q), or the point mass at u_q).
Cover cover(const BinMeasure& q, const DisjointAlternative& alt);

// One-measure no-arbitrage at unit spot: an up move is possible iff a down
// move is.
bool check_na_single(const BinMeasure& r);

struct NaRobustResult {
  bool na = false;
  // member charging both directions at once (the corner (U0, d0, pi0))
  std::optional<BinMeasure> witness;
  std::optional<BinMeasure> up_witness, down_witness;
  std::string explanation;  // filled when na is false or no moves exist
};

// No-arbitrage across every measure of the box: some member sees a gain iff
// some member sees a loss.
NaRobustResult check_na_robust(const ModelParams& p);

// Evenly spaced members: `per_component` laws from r0 (d from d0 toward m0,
// excluded), the r2 boundary when separated, and per_component+1 point
// masses across [u0, D0] when overlapping.
std::vector<BinMeasure> sample_members(const DisjointAlternative& alt, int per_component);

// Members whose parameter (d, or a for point masses) is a multiple of
// 1/denominator, plus the r2 boundary member when separated.
std::vector<BinMeasure> grid_members(const DisjointAlternative& alt, long denominator);

// Bridges to the family layer: atoms are canonical rational strings.
MeasureFamily family_from_members(const std::vector<BinMeasure>& rs);
Localization localization_from_members(const std::vector<BinMeasure>& rs);

}  // namespace qsure::binom
