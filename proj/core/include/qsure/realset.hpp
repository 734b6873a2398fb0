#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "qsure/error.hpp"
#include "qsure/rational.hpp"

namespace qsure::sets {

// Strictly decreasing piecewise-linear bijection with exact rational knots.
// Knot x-coordinates increase, y-coordinates decrease; evaluation outside the
// domain (or inverse evaluation outside the range) is a ValidationError.
// Strict monotonicity is what keeps the map invertible; the constructor
// rejects tables that are not strictly decreasing.
class PiecewiseLinearBijection {
 public:
  explicit PiecewiseLinearBijection(std::vector<std::pair<Rat, Rat>> knots);

  // The line through (x0,y0) and (x1,y1) on domain [x0,x1], y0 > y1.
  static PiecewiseLinearBijection line(const Rat& x0, const Rat& x1, const Rat& y0,
                                       const Rat& y1);

  Rat operator()(const Rat& x) const;
  Rat inverse(const Rat& y) const;

  const Rat& domain_lo() const { return knots_.front().first; }
  const Rat& domain_hi() const { return knots_.back().first; }
  const Rat& range_lo() const { return knots_.back().second; }
  const Rat& range_hi() const { return knots_.front().second; }
  bool in_domain(const Rat& x) const { return x >= domain_lo() && x <= domain_hi(); }
  bool in_range(const Rat& y) const { return y >= range_lo() && y <= range_hi(); }

  const std::vector<std::pair<Rat, Rat>>& knots() const { return knots_; }

  friend bool operator==(const PiecewiseLinearBijection&,
                         const PiecewiseLinearBijection&) = default;

 private:
  std::vector<std::pair<Rat, Rat>> knots_;
};

struct Interval {
  std::optional<Rat> lo, hi;  // nullopt = unbounded on that side
  bool lo_closed = false, hi_closed = false;

  bool contains(const Rat& x) const;
  friend bool operator==(const Interval&, const Interval&) = default;
};

// Finite union of intervals and isolated points in canonical form: intervals
// pairwise disjoint, maximal, sorted; points sorted and not inside any
// interval. All boolean operations are exact.
class PlainSet {
 public:
  PlainSet() = default;  // empty

  static PlainSet reals();
  static PlainSet interval(std::optional<Rat> lo, bool lo_closed, std::optional<Rat> hi,
                           bool hi_closed);
  static PlainSet closed(const Rat& lo, const Rat& hi) {
    return interval(lo, true, hi, true);
  }
  static PlainSet points(std::vector<Rat> pts);
  static PlainSet single(const Rat& x) { return points({x}); }

  const std::vector<Interval>& intervals() const { return intervals_; }
  const std::vector<Rat>& points() const { return points_; }
  bool contains(const Rat& x) const;
  bool empty() const { return intervals_.empty() && points_.empty(); }
  bool is_subset_of(const PlainSet& other) const;

  friend PlainSet set_union(const PlainSet&, const PlainSet&);
  friend PlainSet set_intersect(const PlainSet&, const PlainSet&);
  friend PlainSet set_complement(const PlainSet&);
  friend PlainSet set_difference(const PlainSet& a, const PlainSet& b);

  friend bool operator==(const PlainSet&, const PlainSet&) = default;

 private:
  std::vector<Interval> intervals_;
  std::vector<Rat> points_;
};

// Exact image f(S ∩ dom f) and preimage f⁻¹(S ∩ ran f) of a plain set.
PlainSet apply_bijection(const PiecewiseLinearBijection& f, const PlainSet& s);
PlainSet apply_inverse(const PiecewiseLinearBijection& f, const PlainSet& s);

// Which points of the two-point supports {d, f(d)} a SupportUnion selects.
enum class SuSide { both, lower, upper };

struct SetExpr;
using ExprPtr = std::shared_ptr<const SetExpr>;

// The union of support pieces over a parameter domain D:
//   side both  -> ∪_{d∈D} {d, f(d)}
//   side lower -> ∪_{d∈D} {d}
//   side upper -> ∪_{d∈D} {f(d)}
// D must lie inside the parameter range of f.
struct SupportUnion {
  PlainSet domain;
  std::shared_ptr<const PiecewiseLinearBijection> f;
  SuSide side = SuSide::both;
};

struct UnionNode {
  ExprPtr a, b;
};
struct IsectNode {
  ExprPtr a, b;
};
struct ComplNode {
  ExprPtr a;
};

struct SetExpr {
  std::variant<PlainSet, SupportUnion, UnionNode, IsectNode, ComplNode> node;
};

ExprPtr expr_plain(PlainSet s);
ExprPtr expr_su(PlainSet domain, std::shared_ptr<const PiecewiseLinearBijection> f,
                SuSide side = SuSide::both);  // validates domain ⊆ dom f
ExprPtr expr_union(ExprPtr a, ExprPtr b);
ExprPtr expr_intersect(ExprPtr a, ExprPtr b);
ExprPtr expr_complement(ExprPtr a);

// Exact membership by structural recursion; support unions resolve through f
// and its exact inverse.
bool member(const Rat& x, const SetExpr& e);

// Canonical form: a plain part plus an optional symbolic support-union
// residue (parameter domains per side, shared f).
struct SuResidue {
  PlainSet lower_domain;  // contributes {d : d ∈ lower_domain}
  PlainSet upper_domain;  // contributes {f(d) : d ∈ upper_domain}
  std::shared_ptr<const PiecewiseLinearBijection> f;
};

struct CanonicalSet {
  PlainSet plain;
  std::optional<SuResidue> su;

  bool contains(const Rat& x) const;
};

// Boolean structure is pushed onto interval/point parts exactly. Support
// unions combine only through parameter-domain operations (union and, for
// pure support unions over the same f, intersection); a complement of a
// support union, or mixing one into an intersection with a plain part, has
// no canonical form here and is reported via `reason`. Membership queries on
// the raw expression remain available in every case.
struct NormalizeResult {
  std::optional<CanonicalSet> canonical;
  std::string reason;
  bool ok() const { return canonical.has_value(); }
};

NormalizeResult normalize(const SetExpr& e);

// The (≤ |pts|-point) subset of a finite support belonging to e. Extension
// sets always trace ordinary finite sets on a member support, so this is
// total even when normalize is not.
std::vector<Rat> intersect_with_support(const SetExpr& e, const std::vector<Rat>& pts);

// Textual grammar (see docs/model_format.md): I[a,b) intervals with "inf" /
// "-inf" endpoints, P{x1,x2} point sets, SU(D) / SUD(D) / SUF(D) support
// unions (both / lower / upper side) over a plain parameter-domain
// expression, and !, &, | with that precedence. Rationals are "p/q" or
// integer literals. `f` may be null when the text uses no SU form.
struct SetParseResult {
  ExprPtr expr;       // null on error
  std::string error;  // message when expr is null
  size_t pos = 0;     // byte offset of the error in the input
  bool ok() const { return expr != nullptr; }
};

SetParseResult parse_set_expr(std::string_view text,
                              std::shared_ptr<const PiecewiseLinearBijection> f);

// Canonical text for a parsed expression (used by report emission).
std::string set_expr_str(const SetExpr& e);

}  // namespace qsure::sets
