#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qsure/measure.hpp"

namespace qsure {

// Finite family of probability measures over a shared atom universe. The
// universe is the union of member supports plus declared extra atoms; the
// extras are exactly the family's polar singletons at this scale.
class MeasureFamily {
 public:
  explicit MeasureFamily(std::vector<ProbabilityMeasure> members, AtomSet extras = {});

  const std::vector<ProbabilityMeasure>& members() const { return members_; }
  const AtomSet& extras() const { return extras_; }
  AtomSet universe() const;
  // true when some member gives the atom positive mass
  bool charges(const std::string& atom_id) const;

  friend bool operator==(const MeasureFamily&, const MeasureFamily&) = default;

 private:
  std::vector<ProbabilityMeasure> members_;
  AtomSet extras_;
};

// Candidate localizing system: measures Q with designated supports S_Q,
// parallel lists. make_localization enforces |measures| = |supports| and
// Q(S_Q) = 1; the struct stays open so verification failures can be probed.
struct Localization {
  std::vector<ProbabilityMeasure> measures;
  std::vector<AtomSet> supports;

  size_t size() const { return measures.size(); }
};

Localization make_localization(std::vector<ProbabilityMeasure> measures,
                               std::vector<AtomSet> supports);

// Every member assigns the set mass zero.
bool is_polar(const MeasureFamily& family, const AtomSet& atoms);

// A support set S for mu: mu lives on S and every mu-null part of S is polar
// for the family. At finite scale the candidate is supp(mu); it fails exactly
// when mu charges a family-polar atom (mu not dominated), reported as absent.
std::optional<AtomSet> is_supported_measure(const ProbabilityMeasure& mu,
                                            const MeasureFamily& family);

// One Dirac per charged atom of the universe, each supported on its own
// singleton. Verifies for every finite discrete family.
Localization dirac_localization(const MeasureFamily& family);

struct LocalizationReport {
  bool delta_ok = false;     // Q(S_R) = 1 iff Q = R
  bool disjoint_ok = false;  // supports pairwise disjoint (strict) or polar overlaps
  bool q_lll_p = false;      // every Q absolutely continuous w.r.t. some member
  bool p_lll_sconvq = false;  // every member dominated by a mixture of the Q's
  bool overall = false;

  // per localization member: index of a dominating family member
  std::vector<std::optional<size_t>> q_dominators;
  // per family member: mixing weights over localization members witnessing
  // domination (empty vector when no witness exists)
  std::vector<std::vector<Rat>> p_weights;
  std::vector<std::string> notes;
};

// strict_disjoint selects set disjointness of the supports; otherwise
// overlaps only need to be family-polar.
LocalizationReport verify_localization(const MeasureFamily& family, const Localization& loc,
                                       bool strict_disjoint);

// Indices of localization members whose support carries positive |mu| mass.
std::vector<size_t> family_of_mu(const Localization& loc, const SignedMeasure& mu);

// Rational-valued function with finitely many exceptional atoms; atoms
// outside `values` take `default_value`.
struct BoundedFunction {
  std::map<std::string, Rat> values;
  Rat default_value{0};

  const Rat& at(const std::string& atom_id) const {
    auto it = values.find(atom_id);
    return it == values.end() ? default_value : it->second;
  }

  friend bool operator==(const BoundedFunction&, const BoundedFunction&) = default;
};

// Probe-list generation shared by the certificate checks below. Depth 1 adds
// each support and its complement in the universe, depth 2 additionally all
// pairwise support unions and their complements, and so on for larger unions.
// The empty set and the full universe are always included. brute_force
// switches to all subsets of the universe (rejected above 12 atoms).
struct ProbeOptions {
  std::vector<AtomSet> extra_probes;
  int depth = 2;
  bool brute_force = false;
};

std::vector<AtomSet> generate_probes(const MeasureFamily& family, const Localization& loc,
                                     const ProbeOptions& opts);

struct ProbeCheck {
  AtomSet probe;
  bool hypothesis;   // Q(E_Q \ probe) = 0 for every Q
  bool conclusion;   // Q(S \ probe) = 0 for every Q
  bool ok() const { return !hypothesis || conclusion; }
};

struct EssSupCertificate {
  bool a_ok = false;  // Q(E_Q \ S) = 0 for all Q
  bool b_ok = false;  // every probe with a true hypothesis has a true conclusion
  bool exhaustive = false;  // probes covered all subsets of the universe
  std::vector<ProbeCheck> probes;
};

struct EssSupResult {
  AtomSet sup;
  EssSupCertificate cert;
};

// S = union of the pieces E_Q (one per localization member, parallel list),
// certified minimal against the probe list: any F that is Q-almost-sure over
// every piece must cover S up to Q-null sets. pieces[i] must sit inside
// supports[i].
EssSupResult essential_supremum(const MeasureFamily& family, const Localization& loc,
                                const std::vector<AtomSet>& pieces,
                                const ProbeOptions& opts = {});

// Level-set assembly of one function from per-member pieces g_Q: on the grid
// of all rational values appearing in the pieces, E_q = union of
// S_Q ∩ {g_Q >= q}, and h(atom) = max{q : atom in E_q}. h is 0 outside the
// union of supports and forced to 0 on polar atoms. Requires a localization
// that verifies with strictly disjoint supports and pieces vanishing off
// their supports on non-polar atoms.
BoundedFunction glue(const MeasureFamily& family, const Localization& loc,
                     const std::vector<BoundedFunction>& pieces);

// Integral of h against mu, exact.
Rat eval_functional(const BoundedFunction& h, const SignedMeasure& mu);

// Max of |h| over atoms charged by the family (the quasi-sure sup norm).
Rat qs_sup_norm(const BoundedFunction& h, const MeasureFamily& family);

// Whether `dominating` witnesses the family's localization property: same
// polar singletons, pairwise disjoint supports of full mass, and probe sets
// null on every support piece are null for every member.
bool check_hahn_property(const MeasureFamily& family, const Localization& dominating,
                         const ProbeOptions& opts = {});

// Pairwise-singular localization for a finite discrete family: the Dirac
// localization, or with `coarsen` one block per set of atoms charged by the
// same set of members.
Localization find_singular_countable_localization(const MeasureFamily& family,
                                                  bool coarsen = false);

}  // namespace qsure
