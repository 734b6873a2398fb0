#include "qsure/realset.hpp"

#include <algorithm>
#include <cctype>
#include <iterator>

namespace qsure::sets {

PiecewiseLinearBijection::PiecewiseLinearBijection(std::vector<std::pair<Rat, Rat>> knots)
    : knots_(std::move(knots)) {
  if (knots_.size() < 2) throw ValidationError("bijection needs at least two knots");
  for (size_t i = 1; i < knots_.size(); ++i) {
    if (knots_[i].first <= knots_[i - 1].first || knots_[i].second >= knots_[i - 1].second)
      throw ValidationError("bijection table must be strictly decreasing");
  }
}

PiecewiseLinearBijection PiecewiseLinearBijection::line(const Rat& x0, const Rat& x1,
                                                        const Rat& y0, const Rat& y1) {
  return PiecewiseLinearBijection({{x0, y0}, {x1, y1}});
}

Rat PiecewiseLinearBijection::operator()(const Rat& x) const {
  if (!in_domain(x)) throw ValidationError("bijection argument " + rat_str(x) + " outside domain");
  for (size_t i = 1; i < knots_.size(); ++i) {
    if (x <= knots_[i].first) {
      const auto& [x0, y0] = knots_[i - 1];
      const auto& [x1, y1] = knots_[i];
      return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
    }
  }
  return knots_.back().second;
}

Rat PiecewiseLinearBijection::inverse(const Rat& y) const {
  if (!in_range(y)) throw ValidationError("bijection value " + rat_str(y) + " outside range");
  for (size_t i = 1; i < knots_.size(); ++i) {
    if (y >= knots_[i].second) {
      const auto& [x0, y0] = knots_[i - 1];
      const auto& [x1, y1] = knots_[i];
      return x0 + (x1 - x0) * (y - y0) / (y1 - y0);
    }
  }
  return knots_.back().first;
}

namespace {

PiecewiseLinearBijection inverse_of(const PiecewiseLinearBijection& f) {
  std::vector<std::pair<Rat, Rat>> k;
  for (auto it = f.knots().rbegin(); it != f.knots().rend(); ++it)
    k.emplace_back(it->second, it->first);
  return PiecewiseLinearBijection(std::move(k));
}

// Internal building block: a single possibly-degenerate stretch of the line.
struct Span {
  std::optional<Rat> lo, hi;
  bool lo_closed = false, hi_closed = false;
};

bool span_valid(const Span& s) {
  if (!s.lo || !s.hi) return true;
  if (*s.lo < *s.hi) return true;
  return *s.lo == *s.hi && s.lo_closed && s.hi_closed;
}

// Order on lower bounds: -inf first; ties broken closed-before-open.
bool lb_less(const Span& a, const Span& b) {
  if (!a.lo) return static_cast<bool>(b.lo);
  if (!b.lo) return false;
  if (*a.lo != *b.lo) return *a.lo < *b.lo;
  return a.lo_closed && !b.lo_closed;
}

// True when span `b` (sorted after `a` by lower bound) overlaps or touches
// `a`, so that their union is one stretch.
bool connects(const Span& a, const Span& b) {
  if (!a.hi || !b.lo) return true;
  if (*b.lo < *a.hi) return true;
  if (*b.lo > *a.hi) return false;
  return a.hi_closed || b.lo_closed;
}

// Extend acc's upper bound to cover b's (max under: +inf last).
void extend_hi(Span& acc, const Span& b) {
  if (!acc.hi) return;
  if (!b.hi) {
    acc.hi.reset();
    acc.hi_closed = false;
    return;
  }
  if (*b.hi > *acc.hi) {
    acc.hi = b.hi;
    acc.hi_closed = b.hi_closed;
  } else if (*b.hi == *acc.hi) {
    acc.hi_closed = acc.hi_closed || b.hi_closed;
  }
}

std::vector<Span> to_spans(const PlainSet& s) {
  std::vector<Span> out;
  for (const auto& iv : s.intervals()) out.push_back({iv.lo, iv.hi, iv.lo_closed, iv.hi_closed});
  for (const auto& p : s.points()) out.push_back({p, p, true, true});
  std::sort(out.begin(), out.end(), lb_less);
  return out;
}

}  // namespace

bool Interval::contains(const Rat& x) const {
  if (lo) {
    if (x < *lo) return false;
    if (x == *lo && !lo_closed) return false;
  }
  if (hi) {
    if (x > *hi) return false;
    if (x == *hi && !hi_closed) return false;
  }
  return true;
}

PlainSet PlainSet::reals() { return interval(std::nullopt, false, std::nullopt, false); }

PlainSet PlainSet::interval(std::optional<Rat> lo, bool lo_closed, std::optional<Rat> hi,
                            bool hi_closed) {
  if (lo && hi && *lo > *hi)
    throw ValidationError("interval endpoints out of order: " + rat_str(*lo) + " > " +
                          rat_str(*hi));
  PlainSet s;
  if (lo && hi && *lo == *hi) {
    if (lo_closed && hi_closed) s.points_.push_back(*lo);
    return s;  // half-open degenerate interval is empty
  }
  s.intervals_.push_back({std::move(lo), std::move(hi), lo_closed, hi_closed});
  if (!s.intervals_[0].lo) s.intervals_[0].lo_closed = false;
  if (!s.intervals_[0].hi) s.intervals_[0].hi_closed = false;
  return s;
}

PlainSet PlainSet::points(std::vector<Rat> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  PlainSet s;
  s.points_ = std::move(pts);
  return s;
}

bool PlainSet::contains(const Rat& x) const {
  for (const auto& iv : intervals_)
    if (iv.contains(x)) return true;
  return std::binary_search(points_.begin(), points_.end(), x);
}

bool PlainSet::is_subset_of(const PlainSet& other) const {
  return set_difference(*this, other).empty();
}

PlainSet set_union(const PlainSet& a, const PlainSet& b) {
  auto spans = to_spans(a);
  auto more = to_spans(b);
  spans.insert(spans.end(), more.begin(), more.end());
  // merge directly to avoid factory recursion inside canonicalize
  spans.erase(std::remove_if(spans.begin(), spans.end(),
                             [](const Span& s) { return !span_valid(s); }),
              spans.end());
  std::sort(spans.begin(), spans.end(), lb_less);
  std::vector<Span> merged;
  for (auto& s : spans) {
    if (!merged.empty() && connects(merged.back(), s))
      extend_hi(merged.back(), s);
    else
      merged.push_back(s);
  }
  PlainSet out;
  for (auto& s : merged) {
    if (s.lo && s.hi && *s.lo == *s.hi)
      out.points_.push_back(*s.lo);
    else
      out.intervals_.push_back({s.lo, s.hi, s.lo && s.lo_closed, s.hi && s.hi_closed});
  }
  return out;
}

PlainSet set_intersect(const PlainSet& a, const PlainSet& b) {
  std::vector<Span> out;
  for (const auto& x : to_spans(a)) {
    for (const auto& y : to_spans(b)) {
      Span r;
      // max of lower bounds
      if (!x.lo) {
        r.lo = y.lo;
        r.lo_closed = y.lo_closed;
      } else if (!y.lo) {
        r.lo = x.lo;
        r.lo_closed = x.lo_closed;
      } else if (*x.lo > *y.lo) {
        r.lo = x.lo;
        r.lo_closed = x.lo_closed;
      } else if (*y.lo > *x.lo) {
        r.lo = y.lo;
        r.lo_closed = y.lo_closed;
      } else {
        r.lo = x.lo;
        r.lo_closed = x.lo_closed && y.lo_closed;
      }
      // min of upper bounds
      if (!x.hi) {
        r.hi = y.hi;
        r.hi_closed = y.hi_closed;
      } else if (!y.hi) {
        r.hi = x.hi;
        r.hi_closed = x.hi_closed;
      } else if (*x.hi < *y.hi) {
        r.hi = x.hi;
        r.hi_closed = x.hi_closed;
      } else if (*y.hi < *x.hi) {
        r.hi = y.hi;
        r.hi_closed = y.hi_closed;
      } else {
        r.hi = x.hi;
        r.hi_closed = x.hi_closed && y.hi_closed;
      }
      if (span_valid(r)) out.push_back(std::move(r));
    }
  }
  PlainSet res;
  std::sort(out.begin(), out.end(), lb_less);
  for (auto& s : out) {
    if (s.lo && s.hi && *s.lo == *s.hi)
      res.points_.push_back(*s.lo);
    else
      res.intervals_.push_back({s.lo, s.hi, s.lo && s.lo_closed, s.hi && s.hi_closed});
  }
  std::sort(res.points_.begin(), res.points_.end());
  res.points_.erase(std::unique(res.points_.begin(), res.points_.end()), res.points_.end());
  return res;
}

PlainSet set_complement(const PlainSet& a) {
  auto spans = to_spans(a);
  std::vector<Span> out;
  Span cur{std::nullopt, std::nullopt, false, false};  // accumulating gap, starts at -inf
  bool open_ended = true;
  for (const auto& s : spans) {
    if (s.lo) {
      Span gap = cur;
      gap.hi = s.lo;
      gap.hi_closed = !s.lo_closed;
      if (span_valid(gap)) out.push_back(gap);
    }
    // anything before s.hi is covered now
    if (!s.hi) {
      open_ended = false;
      break;
    }
    cur = Span{s.hi, std::nullopt, !s.hi_closed, false};
  }
  if (open_ended) out.push_back(cur);
  PlainSet res;
  for (auto& s : out) {
    if (s.lo && s.hi && *s.lo == *s.hi)
      res.points_.push_back(*s.lo);
    else
      res.intervals_.push_back({s.lo, s.hi, s.lo && s.lo_closed, s.hi && s.hi_closed});
  }
  return res;
}

PlainSet set_difference(const PlainSet& a, const PlainSet& b) {
  return set_intersect(a, set_complement(b));
}

PlainSet apply_bijection(const PiecewiseLinearBijection& f, const PlainSet& s) {
  PlainSet dom = PlainSet::closed(f.domain_lo(), f.domain_hi());
  PlainSet inside = set_intersect(s, dom);
  PlainSet acc;
  std::vector<Rat> pts;
  for (const auto& p : inside.points()) pts.push_back(f(p));
  if (!pts.empty()) acc = PlainSet::points(std::move(pts));
  for (const auto& iv : inside.intervals()) {
    // bounds are finite inside the (closed, bounded) domain
    Rat a = *iv.lo, b = *iv.hi;
    std::vector<Rat> cuts{a};
    for (const auto& [kx, ky] : f.knots())
      if (kx > a && kx < b) cuts.push_back(kx);
    cuts.push_back(b);
    for (size_t i = 0; i + 1 < cuts.size(); ++i) {
      bool locl = (cuts[i] == a) ? iv.lo_closed : true;
      bool hicl = (cuts[i + 1] == b) ? iv.hi_closed : true;
      // f decreasing: [c1,c2] maps to [f(c2), f(c1)], closedness swaps
      acc = set_union(acc, PlainSet::interval(f(cuts[i + 1]), hicl, f(cuts[i]), locl));
    }
  }
  return acc;
}

PlainSet apply_inverse(const PiecewiseLinearBijection& f, const PlainSet& s) {
  return apply_bijection(inverse_of(f), s);
}

ExprPtr expr_plain(PlainSet s) { return std::make_shared<SetExpr>(SetExpr{std::move(s)}); }

ExprPtr expr_su(PlainSet domain, std::shared_ptr<const PiecewiseLinearBijection> f,
                SuSide side) {
  if (!f) throw ValidationError("support union needs a bijection");
  PlainSet param_range = PlainSet::closed(f->domain_lo(), f->domain_hi());
  if (!domain.is_subset_of(param_range))
    throw ValidationError("support-union parameter domain leaves the bijection's domain");
  return std::make_shared<SetExpr>(SetExpr{SupportUnion{std::move(domain), std::move(f), side}});
}

ExprPtr expr_union(ExprPtr a, ExprPtr b) {
  return std::make_shared<SetExpr>(SetExpr{UnionNode{std::move(a), std::move(b)}});
}
ExprPtr expr_intersect(ExprPtr a, ExprPtr b) {
  return std::make_shared<SetExpr>(SetExpr{IsectNode{std::move(a), std::move(b)}});
}
ExprPtr expr_complement(ExprPtr a) {
  return std::make_shared<SetExpr>(SetExpr{ComplNode{std::move(a)}});
}

namespace {
bool su_member(const Rat& x, const SupportUnion& su) {
  if (su.side != SuSide::upper && su.domain.contains(x)) return true;
  if (su.side != SuSide::lower && su.f->in_range(x) && su.domain.contains(su.f->inverse(x)))
    return true;
  return false;
}
}  // namespace

bool member(const Rat& x, const SetExpr& e) {
  return std::visit(
      [&](const auto& n) -> bool {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, PlainSet>) return n.contains(x);
        else if constexpr (std::is_same_v<T, SupportUnion>) return su_member(x, n);
        else if constexpr (std::is_same_v<T, UnionNode>)
          return member(x, *n.a) || member(x, *n.b);
        else if constexpr (std::is_same_v<T, IsectNode>)
          return member(x, *n.a) && member(x, *n.b);
        else
          return !member(x, *n.a);
      },
      e.node);
}

bool CanonicalSet::contains(const Rat& x) const {
  if (plain.contains(x)) return true;
  if (!su) return false;
  if (su->lower_domain.contains(x)) return true;
  return su->f->in_range(x) && su->upper_domain.contains(su->f->inverse(x));
}

namespace {

bool same_f(const SuResidue& a, const SuResidue& b) {
  return a.f == b.f || *a.f == *b.f;
}

NormalizeResult fail(std::string reason) { return {std::nullopt, std::move(reason)}; }

std::optional<SuResidue> tidy(std::optional<SuResidue> su) {
  if (su && su->lower_domain.empty() && su->upper_domain.empty()) su.reset();
  return su;
}

bool value_empty(const CanonicalSet& c) { return c.plain.empty() && !c.su; }

}  // namespace

NormalizeResult normalize(const SetExpr& e) {
  return std::visit(
      [&](const auto& n) -> NormalizeResult {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, PlainSet>) {
          return {CanonicalSet{n, std::nullopt}, ""};
        } else if constexpr (std::is_same_v<T, SupportUnion>) {
          SuResidue r{PlainSet{}, PlainSet{}, n.f};
          if (n.side != SuSide::upper) r.lower_domain = n.domain;
          if (n.side != SuSide::lower) r.upper_domain = n.domain;
          return {CanonicalSet{PlainSet{}, tidy(std::move(r))}, ""};
        } else if constexpr (std::is_same_v<T, UnionNode>) {
          auto a = normalize(*n.a);
          if (!a.ok()) return a;
          auto b = normalize(*n.b);
          if (!b.ok()) return b;
          CanonicalSet out;
          out.plain = set_union(a.canonical->plain, b.canonical->plain);
          auto &sa = a.canonical->su, &sb = b.canonical->su;
          if (sa && sb) {
            if (!same_f(*sa, *sb))
              return fail("support unions over different alternatives cannot be combined");
            out.su = tidy(SuResidue{set_union(sa->lower_domain, sb->lower_domain),
                                    set_union(sa->upper_domain, sb->upper_domain), sa->f});
          } else {
            out.su = sa ? sa : sb;
          }
          return {std::move(out), ""};
        } else if constexpr (std::is_same_v<T, IsectNode>) {
          auto a = normalize(*n.a);
          if (!a.ok()) return a;
          auto b = normalize(*n.b);
          if (!b.ok()) return b;
          const auto &ca = *a.canonical, &cb = *b.canonical;
          if (value_empty(ca) || value_empty(cb)) return {CanonicalSet{}, ""};
          if (!ca.su && !cb.su)
            return {CanonicalSet{set_intersect(ca.plain, cb.plain), std::nullopt}, ""};
          if (ca.su && cb.su && ca.plain.empty() && cb.plain.empty()) {
            if (!same_f(*ca.su, *cb.su))
              return fail("support unions over different alternatives cannot be combined");
            const auto& f = *ca.su->f;
            // Points where one side selects d and the other selects f(d)
            // would leave the parameter-domain fragment.
            PlainSet cross1 = set_intersect(ca.su->lower_domain,
                                            apply_bijection(f, cb.su->upper_domain));
            PlainSet cross2 = set_intersect(cb.su->lower_domain,
                                            apply_bijection(f, ca.su->upper_domain));
            if (!cross1.empty() || !cross2.empty())
              return fail("support-union intersection meets its own image; not canonical");
            return {CanonicalSet{PlainSet{},
                                 tidy(SuResidue{
                                     set_intersect(ca.su->lower_domain, cb.su->lower_domain),
                                     set_intersect(ca.su->upper_domain, cb.su->upper_domain),
                                     ca.su->f})},
                    ""};
          }
          return fail("intersection mixes a support union with a plain part; not canonical");
        } else {  // ComplNode
          auto a = normalize(*n.a);
          if (!a.ok()) return a;
          if (a.canonical->su)
            return fail("complement of a support union is symbolic; not canonical");
          return {CanonicalSet{set_complement(a.canonical->plain), std::nullopt}, ""};
        }
      },
      e.node);
}

std::vector<Rat> intersect_with_support(const SetExpr& e, const std::vector<Rat>& pts) {
  std::vector<Rat> sp = pts;
  std::sort(sp.begin(), sp.end());
  sp.erase(std::unique(sp.begin(), sp.end()), sp.end());
  return std::visit(
      [&](const auto& n) -> std::vector<Rat> {
        using T = std::decay_t<decltype(n)>;
        std::vector<Rat> out;
        if constexpr (std::is_same_v<T, PlainSet>) {
          for (const auto& p : sp)
            if (n.contains(p)) out.push_back(p);
        } else if constexpr (std::is_same_v<T, SupportUnion>) {
          for (const auto& p : sp)
            if (su_member(p, n)) out.push_back(p);
        } else if constexpr (std::is_same_v<T, UnionNode>) {
          auto a = intersect_with_support(*n.a, sp);
          auto b = intersect_with_support(*n.b, sp);
          std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
        } else if constexpr (std::is_same_v<T, IsectNode>) {
          auto a = intersect_with_support(*n.a, sp);
          auto b = intersect_with_support(*n.b, sp);
          std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                                std::back_inserter(out));
        } else {
          auto a = intersect_with_support(*n.a, sp);
          std::set_difference(sp.begin(), sp.end(), a.begin(), a.end(),
                              std::back_inserter(out));
        }
        return out;
      },
      e.node);
}

// ---------------------------------------------------------------------------
// Grammar

namespace {

struct Cursor {
  std::string_view s;
  size_t i = 0;
  std::string err;
  size_t err_pos = 0;

  bool failed() const { return !err.empty(); }
  void fail(std::string m) {
    if (err.empty()) {
      err = std::move(m);
      err_pos = i;
    }
  }
  void ws() {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  }
  char peek() {
    ws();
    return i < s.size() ? s[i] : '\0';
  }
  bool eat(char c) {
    ws();
    if (i < s.size() && s[i] == c) {
      ++i;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!eat(c)) fail(std::string("expected '") + c + "'");
  }
  std::string word() {
    ws();
    size_t start = i;
    while (i < s.size() && std::isalpha(static_cast<unsigned char>(s[i]))) ++i;
    return std::string(s.substr(start, i - start));
  }
};

std::optional<Rat> lex_rat(Cursor& c) {
  c.ws();
  size_t start = c.i;
  if (c.i < c.s.size() && c.s[c.i] == '-') ++c.i;
  while (c.i < c.s.size() && std::isdigit(static_cast<unsigned char>(c.s[c.i]))) ++c.i;
  if (c.i < c.s.size() && c.s[c.i] == '/') {
    ++c.i;
    while (c.i < c.s.size() && std::isdigit(static_cast<unsigned char>(c.s[c.i]))) ++c.i;
  }
  auto r = parse_rat(c.s.substr(start, c.i - start));
  if (!r) {
    c.i = start;
    c.fail("expected a rational literal");
  }
  return r;
}

// endpoint := rational | "inf" | "-inf"; inner nullopt encodes an unbounded
// side, outer nullopt a parse failure
std::optional<std::optional<Rat>> lex_endpoint(Cursor& c, bool is_lo) {
  c.ws();
  size_t save = c.i;
  if (c.i < c.s.size() && (std::isalpha(static_cast<unsigned char>(c.s[c.i])) ||
                           (c.s[c.i] == '-' && c.i + 1 < c.s.size() &&
                            std::isalpha(static_cast<unsigned char>(c.s[c.i + 1]))))) {
    bool neg = c.s[c.i] == '-';
    if (neg) ++c.i;
    std::string w = c.word();
    if (w == "inf" && neg == is_lo) return std::optional<Rat>{};
    c.i = save;
    c.fail(is_lo ? "expected a rational literal or '-inf'"
                 : "expected a rational literal or 'inf'");
    return std::nullopt;
  }
  auto r = lex_rat(c);
  if (!r) return std::nullopt;
  return std::optional<Rat>{*r};
}

using FPtr = std::shared_ptr<const PiecewiseLinearBijection>;

ExprPtr p_expr(Cursor& c, const FPtr& f);

ExprPtr p_atom(Cursor& c, const FPtr& f) {
  if (c.eat('(')) {
    auto e = p_expr(c, f);
    c.expect(')');
    return c.failed() ? nullptr : e;
  }
  std::string w = c.word();
  if (w == "I") {
    bool lo_closed;
    if (c.eat('['))
      lo_closed = true;
    else if (c.eat('('))
      lo_closed = false;
    else {
      c.fail("expected '[' or '(' after I");
      return nullptr;
    }
    auto lo = lex_endpoint(c, true);
    if (!lo) return nullptr;
    c.expect(',');
    auto hi = lex_endpoint(c, false);
    if (!hi) return nullptr;
    bool hi_closed;
    if (c.eat(']'))
      hi_closed = true;
    else if (c.eat(')'))
      hi_closed = false;
    else {
      c.fail("expected ']' or ')'");
      return nullptr;
    }
    if (c.failed()) return nullptr;
    try {
      return expr_plain(PlainSet::interval(*lo, lo_closed, *hi, hi_closed));
    } catch (const ValidationError& e) {
      c.fail(e.what());
      return nullptr;
    }
  }
  if (w == "P") {
    c.expect('{');
    std::vector<Rat> pts;
    if (!c.eat('}')) {
      do {
        auto r = lex_rat(c);
        if (!r) return nullptr;
        pts.push_back(*r);
      } while (c.eat(','));
      c.expect('}');
    }
    if (c.failed()) return nullptr;
    return expr_plain(PlainSet::points(std::move(pts)));
  }
  if (w == "SU" || w == "SUD" || w == "SUF") {
    if (!f) {
      c.fail("support-union syntax needs a binomial alternative in scope");
      return nullptr;
    }
    c.expect('(');
    auto inner = p_expr(c, f);
    c.expect(')');
    if (c.failed() || !inner) return nullptr;
    auto norm = normalize(*inner);
    if (!norm.ok() || norm.canonical->su) {
      c.fail("support-union parameter domain must be a plain interval/point set");
      return nullptr;
    }
    SuSide side = w == "SU" ? SuSide::both : (w == "SUD" ? SuSide::lower : SuSide::upper);
    try {
      return expr_su(norm.canonical->plain, f, side);
    } catch (const ValidationError& e) {
      c.fail(e.what());
      return nullptr;
    }
  }
  c.fail("expected a set term (I, P, SU, SUD, SUF or parentheses)");
  return nullptr;
}

ExprPtr p_factor(Cursor& c, const FPtr& f) {
  if (c.eat('!')) {
    auto a = p_factor(c, f);
    return a ? expr_complement(a) : nullptr;
  }
  return p_atom(c, f);
}

ExprPtr p_term(Cursor& c, const FPtr& f) {
  auto a = p_factor(c, f);
  while (a && c.peek() == '&') {
    c.eat('&');
    auto b = p_factor(c, f);
    a = b ? expr_intersect(a, b) : nullptr;
  }
  return a;
}

ExprPtr p_expr(Cursor& c, const FPtr& f) {
  auto a = p_term(c, f);
  while (a && c.peek() == '|') {
    c.eat('|');
    auto b = p_term(c, f);
    a = b ? expr_union(a, b) : nullptr;
  }
  return a;
}

std::string endpoint_str(const std::optional<Rat>& v, bool lo) {
  if (!v) return lo ? "-inf" : "inf";
  return rat_str(*v);
}

std::string plain_str(const PlainSet& s) {
  std::string out;
  for (const auto& iv : s.intervals()) {
    if (!out.empty()) out += " | ";
    out += "I";
    out += iv.lo_closed ? '[' : '(';
    out += endpoint_str(iv.lo, true) + "," + endpoint_str(iv.hi, false);
    out += iv.hi_closed ? ']' : ')';
  }
  if (!s.points().empty() || out.empty()) {
    if (!out.empty()) out += " | ";
    out += "P{";
    for (size_t i = 0; i < s.points().size(); ++i) {
      if (i) out += ",";
      out += rat_str(s.points()[i]);
    }
    out += "}";
  }
  return out;
}

bool is_compound(const SetExpr& e) {
  if (std::holds_alternative<UnionNode>(e.node) || std::holds_alternative<IsectNode>(e.node))
    return true;
  // multi-piece plain sets print with '|' and need parentheses as operands
  if (const auto* p = std::get_if<PlainSet>(&e.node)) {
    size_t pieces = p->intervals().size() + (p->points().empty() ? 0 : 1);
    return pieces > 1;
  }
  return false;
}

std::string wrap(const SetExpr& e) {
  std::string s = set_expr_str(e);
  return is_compound(e) ? "(" + s + ")" : s;
}

}  // namespace

SetParseResult parse_set_expr(std::string_view text, FPtr f) {
  Cursor c{text};
  auto e = p_expr(c, f);
  if (e && !c.failed()) {
    c.ws();
    if (c.i != text.size()) c.fail("unexpected trailing input");
  }
  if (c.failed()) return {nullptr, c.err, c.err_pos};
  return {e, "", 0};
}

std::string set_expr_str(const SetExpr& e) {
  return std::visit(
      [&](const auto& n) -> std::string {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, PlainSet>) return plain_str(n);
        else if constexpr (std::is_same_v<T, SupportUnion>) {
          std::string head = n.side == SuSide::both ? "SU" : (n.side == SuSide::lower ? "SUD" : "SUF");
          return head + "(" + plain_str(n.domain) + ")";
        } else if constexpr (std::is_same_v<T, UnionNode>)
          return wrap(*n.a) + " | " + wrap(*n.b);
        else if constexpr (std::is_same_v<T, IsectNode>)
          return wrap(*n.a) + " & " + wrap(*n.b);
        else
          return "!" + wrap(*n.a);
      },
      e.node);
}

}  // namespace qsure::sets
