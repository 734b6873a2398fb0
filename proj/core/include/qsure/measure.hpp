#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "qsure/error.hpp"
#include "qsure/rational.hpp"

namespace qsure {

// A point of the underlying space. `value` is present when the atom denotes a
// point of the real line (e.g. a price); plain labels leave it empty.
struct Atom {
  std::string id;
  std::optional<Rat> value;

  friend bool operator==(const Atom&, const Atom&) = default;
};

using AtomSet = std::set<std::string>;

// Finitely supported signed measure in canonical form: zero weights are
// stripped on construction, so support queries are map-key queries.
class SignedMeasure {
 public:
  SignedMeasure() = default;
  explicit SignedMeasure(std::map<std::string, Rat> weights);

  const std::map<std::string, Rat>& weights() const { return weights_; }
  Rat at(const std::string& id) const;
  // Total mass of an atom set.
  Rat mass(const AtomSet& s) const;
  AtomSet support() const;
  bool is_zero() const { return weights_.empty(); }

  SignedMeasure restricted(const AtomSet& s) const;
  // Atomwise absolute value |mu|.
  SignedMeasure abs() const;
  SignedMeasure scaled(const Rat& c) const;

  friend SignedMeasure operator+(const SignedMeasure&, const SignedMeasure&);
  friend SignedMeasure operator-(const SignedMeasure&, const SignedMeasure&);
  friend bool operator==(const SignedMeasure&, const SignedMeasure&) = default;

 private:
  std::map<std::string, Rat> weights_;
};

// All weights strictly positive after canonicalization and summing to exactly
// one. Construction validates; violations raise ValidationError.
class ProbabilityMeasure {
 public:
  explicit ProbabilityMeasure(SignedMeasure m);
  explicit ProbabilityMeasure(std::map<std::string, Rat> weights);

  static ProbabilityMeasure dirac(const std::string& atom_id);

  const SignedMeasure& measure() const { return m_; }
  const std::map<std::string, Rat>& weights() const { return m_.weights(); }
  Rat at(const std::string& id) const { return m_.at(id); }
  Rat mass(const AtomSet& s) const { return m_.mass(s); }
  AtomSet support() const { return m_.support(); }

  friend bool operator==(const ProbabilityMeasure&, const ProbabilityMeasure&) = default;

 private:
  SignedMeasure m_;
};

Rat tv_norm(const SignedMeasure& mu);

struct HahnJordan {
  SignedMeasure pos, neg;  // mu = pos - neg, both nonnegative, disjoint supports
  AtomSet pos_atoms, neg_atoms;
};
HahnJordan hahn_jordan(const SignedMeasure& mu);

// supp(|mu|) subset of supp(|nu|).
bool is_abs_continuous(const SignedMeasure& mu, const SignedMeasure& nu);
bool is_abs_continuous(const SignedMeasure& mu, const ProbabilityMeasure& nu);

// Disjoint supports.
bool is_singular(const SignedMeasure& mu, const SignedMeasure& nu);

struct LebesgueParts {
  SignedMeasure ac;    // part absolutely continuous w.r.t. nu
  SignedMeasure sing;  // part singular to nu
};
LebesgueParts lebesgue_decompose(const SignedMeasure& mu, const SignedMeasure& nu);

// Exact convex combination; weights must be nonnegative and sum to 1.
ProbabilityMeasure mix(const std::vector<Rat>& weights,
                       const std::vector<ProbabilityMeasure>& measures);

// Serialization helpers for the model-file weight map form (atom-id -> "p/q").
std::map<std::string, std::string> serialize_weights(const SignedMeasure& mu);
SignedMeasure deserialize_weights(const std::map<std::string, std::string>& w);

}  // namespace qsure
