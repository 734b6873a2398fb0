#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qsure/binomial.hpp"
#include "qsure/family.hpp"
#include "qsure/measure.hpp"
#include "qsure/realset.hpp"

namespace qsure::hx {

// One localization member that the extended measure actually touches: its
// label, its support as atom ids, and (when every atom id is a rational
// point) the support as points on the line, ascending.
struct ActiveSupport {
  std::string key;
  AtomSet atoms;
  std::vector<Rat> points;  // empty when some atom id is not numeric
};

// A finite signed measure carried from the base space onto the extension
// field generated by the member supports. Atoms live in exactly one active
// support; evaluation against a set expression distributes over the active
// members and intersects the expression with each support.
struct ExtendedMeasure {
  SignedMeasure base;
  std::vector<ActiveSupport> active;

  // Σ over active members of base(A ∩ S_Q). Throws when a touched support
  // has non-numeric atoms.
  Rat eval(const sets::SetExpr& a) const;
  Rat eval(const sets::ExprPtr& a) const;
  // Same sum for a plain atom set (always available).
  Rat eval_atoms(const AtomSet& a) const;
};

// Extension over the binomial alternative: every atom of mu must be a point
// some alternative member charges. Uncovered points are errors naming the
// atom.
ExtendedMeasure extend_measure(const SignedMeasure& mu, const binom::DisjointAlternative& alt);

// Extension over a finite localization with strictly disjoint supports.
ExtendedMeasure extend_measure(const SignedMeasure& mu, const Localization& loc);

// Total variation of the extension. Equals tv_norm(base) and is recomputed
// independently as the sum of per-support Hahn–Jordan masses; the two
// routes are asserted equal.
Rat extended_tv(const ExtendedMeasure& em);

struct AcProbe {
  std::string probe;  // canonical text of the probed set
  Rat p_mass;         // P-extension value
  Rat mu_abs_mass;    // |mu|-extension value
};

// Probe-level record of the equivalence "mu ≪ P iff the extensions are
// absolutely continuous". The probe list contains the active supports,
// their pairwise unions, the symbolic support unions over the parameter
// domain, canonicalizable complements, and the charged singletons; the
// singletons make the probe verdict exact here.
struct AcReport {
  bool ac = false;                  // is_abs_continuous(mu, P)
  bool probes_consistent = false;   // every P-null probe is |mu|-null
  std::vector<AcProbe> probes;
  std::optional<size_t> witness;    // index of a P-null, mu-charged probe
};

AcReport ac_preservation_report(const SignedMeasure& mu, const ProbabilityMeasure& p,
                                const binom::DisjointAlternative& alt);
AcReport ac_preservation_report(const SignedMeasure& mu, const ProbabilityMeasure& p,
                                const Localization& loc);

// Returns is_abs_continuous(mu, P) after asserting that the probe verdict
// on the extensions agrees with it.
bool check_ac_preservation(const SignedMeasure& mu, const ProbabilityMeasure& p,
                           const binom::DisjointAlternative& alt);
bool check_ac_preservation(const SignedMeasure& mu, const ProbabilityMeasure& p,
                           const Localization& loc);

// Piece rule over the alternative's parameter: for d in d_only keep the
// lower point {d}, in f_only the upper point {f(d)}, in both_sides both,
// elsewhere nothing. Point-mass members (overlapping regime) contribute
// their single point when their parameter lies in d_only or both_sides.
// The three domains must be pairwise disjoint.
struct ParamRule {
  sets::PlainSet d_only, f_only, both_sides;
};

struct RuleProbe {
  std::string probe;
  bool hypothesis;  // probe contains every sampled piece up to member-null
  bool conclusion;  // sampled supports meet E outside the probe only in null sets
};

// The essential supremum of the rule's pieces as a symbolic set, with a
// finite certificate for the two defining conditions: (a) each sampled
// piece lies inside the set, (b) any probed superset of the pieces covers
// the set up to polar. Members are sampled on the 1/denominator grid; the
// certificate is sound but not exhaustive and is labeled so.
struct ExtEssSup {
  sets::ExprPtr set;
  bool a_ok = false;
  bool b_ok = false;
  bool exhaustive = false;
  std::vector<RuleProbe> probes;
};

ExtEssSup extended_ess_sup(const binom::DisjointAlternative& alt, const ParamRule& rule,
                           unsigned denominator = 16);

// Exact identity tv_norm(mu) == extended_tv(extend_measure(mu, ·)), both
// sides computed by their own route.
bool restriction_isometry_check(const SignedMeasure& mu, const binom::DisjointAlternative& alt);
bool restriction_isometry_check(const SignedMeasure& mu, const Localization& loc);

}  // namespace qsure::hx
