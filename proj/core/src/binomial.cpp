#include "qsure/binomial.hpp"

#include <algorithm>

namespace qsure::binom {

namespace {

void add_check(ParamReport& rep, const std::string& name, bool pass, std::string detail) {
  rep.checks.push_back({name, pass, std::move(detail)});
}

std::string ineq(const Rat& a, const char* rel, const Rat& b) {
  return rat_str(a) + " " + rel + " " + rat_str(b);
}

}  // namespace

ParamReport validate_params(const ModelParams& p) {
  ParamReport rep;
  Rat one(1), zero(0);
  add_check(rep, "0 < pi0", zero < p.pi0, ineq(zero, "<", p.pi0));
  add_check(rep, "pi0 <= Pi0", p.pi0 <= p.Pi0, ineq(p.pi0, "<=", p.Pi0));
  add_check(rep, "Pi0 < 1", p.Pi0 < one, ineq(p.Pi0, "<", one));
  add_check(rep, "d0 <= D0", p.d0 <= p.D0, ineq(p.d0, "<=", p.D0));
  add_check(rep, "u0 <= U0", p.u0 <= p.U0, ineq(p.u0, "<=", p.U0));
  add_check(rep, "0 < d0", zero < p.d0, ineq(zero, "<", p.d0));
  add_check(rep, "d0 < 1", p.d0 < one, ineq(p.d0, "<", one));
  add_check(rep, "1 < U0", one < p.U0, ineq(one, "<", p.U0));
  rep.base_ok = std::all_of(rep.checks.begin(), rep.checks.end(),
                            [](const ParamCheck& c) { return c.pass; });

  Rat m0 = std::min(p.u0, p.D0), M0 = std::max(p.u0, p.D0);
  add_check(rep, "d0 < min(u0, D0)", p.d0 < m0, ineq(p.d0, "<", m0));
  add_check(rep, "max(u0, D0) < U0", M0 < p.U0, ineq(M0, "<", p.U0));
  rep.strengthened_ok = rep.checks[8].pass && rep.checks[9].pass;
  rep.overall = rep.base_ok && rep.strengthened_ok;
  return rep;
}

ProbabilityMeasure law(const BinMeasure& r) {
  if (r.is_point_mass()) return ProbabilityMeasure::dirac(rat_str(r.u));
  return ProbabilityMeasure(
      std::map<std::string, Rat>{{rat_str(r.u), r.pi}, {rat_str(r.d), Rat(1) - r.pi}});
}

std::vector<Rat> support_points(const BinMeasure& r) {
  if (r.is_point_mass()) return {r.u};
  return r.d < r.u ? std::vector<Rat>{r.d, r.u} : std::vector<Rat>{r.u, r.d};
}

DisjointAlternative build_alternative(const ModelParams& p,
                                      std::shared_ptr<const sets::PiecewiseLinearBijection> f,
                                      std::optional<Rat> pi_tilde) {
  auto rep = validate_params(p);
  if (!rep.overall) {
    for (const auto& c : rep.checks)
      if (!c.pass)
        throw ValidationError("parameter assumption failed: " + c.name + " (" + c.detail + ")");
  }

  DisjointAlternative alt;
  alt.params = p;
  alt.m0 = std::min(p.u0, p.D0);
  alt.M0 = std::max(p.u0, p.D0);
  alt.overlapping = p.D0 >= p.u0;

  if (f) {
    if (f->domain_lo() != p.d0 || f->domain_hi() != alt.m0 || f->range_hi() != p.U0 ||
        f->range_lo() != alt.M0)
      throw ValidationError("f must map [d0, m0] onto [M0, U0] with f(d0) = U0");
    alt.f = std::move(f);
  } else {
    alt.f = std::make_shared<sets::PiecewiseLinearBijection>(
        sets::PiecewiseLinearBijection::line(p.d0, alt.m0, p.U0, alt.M0));
  }

  alt.pi_tilde = pi_tilde ? *pi_tilde : (p.pi0 + p.Pi0) / 2;
  if (alt.pi_tilde < p.pi0 || alt.pi_tilde > p.Pi0)
    throw ValidationError("pi_tilde must lie in [pi0, Pi0]");
  return alt;
}

Component classify_member(const BinMeasure& r, const DisjointAlternative& alt) {
  const auto& p = alt.params;
  if (r.u < p.u0 || r.u > p.U0)
    throw ValidationError("u = " + rat_str(r.u) + " outside [" + rat_str(p.u0) + ", " +
                          rat_str(p.U0) + "]");
  if (r.d < p.d0 || r.d > p.D0)
    throw ValidationError("d = " + rat_str(r.d) + " outside [" + rat_str(p.d0) + ", " +
                          rat_str(p.D0) + "]");
  if (r.pi < p.pi0 || r.pi > p.Pi0)
    throw ValidationError("pi = " + rat_str(r.pi) + " outside [" + rat_str(p.pi0) + ", " +
                          rat_str(p.Pi0) + "]");

  if (r.is_point_mass()) return Component::r1;  // range checks force the overlap case
  if (r.pi != alt.pi_tilde) return Component::outside;
  if (r.d >= p.d0 && r.d < alt.m0 && r.u == (*alt.f)(r.d)) return Component::r0;
  if (!alt.overlapping && r.d == alt.m0 && r.u == alt.M0) return Component::r2;
  return Component::outside;
}

Cover cover(const BinMeasure& q, const DisjointAlternative& alt) {
  Cover out;
  Component c = classify_member(q, alt);
  if (c != Component::outside) {
    out.q1 = out.q2 = q;
    out.identity = true;
  } else if (!alt.overlapping) {
    out.q1 = {(*alt.f)(q.d), q.d, alt.pi_tilde};
    out.q2 = {q.u, alt.f->inverse(q.u), alt.pi_tilde};
  } else {
    if (q.d < alt.params.u0)
      out.q1 = {(*alt.f)(q.d), q.d, alt.pi_tilde};
    else
      out.q1 = {q.d, q.d, alt.pi_tilde};  // point mass in the overlap
    if (q.u > alt.params.D0)
      out.q2 = {q.u, alt.f->inverse(q.u), alt.pi_tilde};
    else
      out.q2 = {q.u, q.u, alt.pi_tilde};
  }

  auto s1 = support_points(out.q1), s2 = support_points(out.q2);
  out.support_ok = true;
  for (const auto& x : support_points(q))
    if (std::find(s1.begin(), s1.end(), x) == s1.end() &&
        std::find(s2.begin(), s2.end(), x) == s2.end())
      out.support_ok = false;
  out.ac_ok = is_abs_continuous(
      law(q).measure(), mix({Rat(1, 2), Rat(1, 2)}, {law(out.q1), law(out.q2)}));
  return out;
}

bool check_na_single(const BinMeasure& r) {
  bool up = (r.pi > 0 && r.u > 1) || (r.pi < 1 && r.d > 1);
  bool down = (r.pi > 0 && r.u < 1) || (r.pi < 1 && r.d < 1);
  return up == down;
}

NaRobustResult check_na_robust(const ModelParams& p) {
  NaRobustResult res;
  bool up = (p.Pi0 > 0 && p.U0 > 1) || (p.pi0 < 1 && p.D0 > 1);
  bool down = (p.Pi0 > 0 && p.u0 < 1) || (p.pi0 < 1 && p.d0 < 1);
  res.na = up == down;

  if (up) {
    if (p.Pi0 > 0 && p.U0 > 1)
      res.up_witness = BinMeasure{p.U0, p.d0, p.Pi0};
    else
      res.up_witness = BinMeasure{p.u0, p.D0, p.pi0};
  }
  if (down) {
    if (p.pi0 < 1 && p.d0 < 1)
      res.down_witness = BinMeasure{p.U0, p.d0, p.pi0};
    else
      res.down_witness = BinMeasure{p.u0, p.D0, p.Pi0};
  }

  if (up && down) {
    // the corner member sees both directions when the base assumption holds
    BinMeasure corner{p.U0, p.d0, p.pi0};
    bool corner_up = corner.pi > 0 && corner.u > 1;
    bool corner_down = corner.pi < 1 && corner.d < 1;
    if (corner_up && corner_down) res.witness = corner;
  } else if (up) {
    res.explanation = "some member can gain but none can lose";
  } else if (down) {
    res.explanation = "some member can lose but none can gain";
  } else {
    res.explanation = "no member moves the price";
  }
  return res;
}

std::vector<BinMeasure> sample_members(const DisjointAlternative& alt, int per_component) {
  if (per_component < 1) throw ValidationError("need at least one sample per component");
  std::vector<BinMeasure> out;
  const auto& p = alt.params;
  Rat step = (alt.m0 - p.d0) / per_component;
  for (int t = 0; t < per_component; ++t) {
    Rat d = p.d0 + step * t;
    out.push_back({(*alt.f)(d), d, alt.pi_tilde});
  }
  if (!alt.overlapping) {
    out.push_back({alt.M0, alt.m0, alt.pi_tilde});  // the r2 boundary law
  } else if (p.D0 == p.u0) {
    out.push_back({p.u0, p.u0, alt.pi_tilde});
  } else {
    Rat astep = (p.D0 - p.u0) / per_component;
    for (int t = 0; t <= per_component; ++t) {
      Rat a = p.u0 + astep * t;
      out.push_back({a, a, alt.pi_tilde});
    }
  }
  return out;
}

std::vector<BinMeasure> grid_members(const DisjointAlternative& alt, long denominator) {
  if (denominator < 1) throw ValidationError("grid denominator must be positive");
  std::vector<BinMeasure> out;
  const auto& p = alt.params;
  Rat den(denominator);
  for (Int k = rat_ceil(p.d0 * den); Rat(k) / den < alt.m0; ++k) {
    Rat d = Rat(k) / den;
    out.push_back({(*alt.f)(d), d, alt.pi_tilde});
  }
  if (!alt.overlapping) {
    out.push_back({alt.M0, alt.m0, alt.pi_tilde});
  } else {
    for (Int k = rat_ceil(p.u0 * den); Rat(k) / den <= p.D0; ++k) {
      Rat a = Rat(k) / den;
      out.push_back({a, a, alt.pi_tilde});
    }
  }
  return out;
}

MeasureFamily family_from_members(const std::vector<BinMeasure>& rs) {
  std::vector<ProbabilityMeasure> laws;
  for (const auto& r : rs) laws.push_back(law(r));
  return MeasureFamily(std::move(laws));
}

Localization localization_from_members(const std::vector<BinMeasure>& rs) {
  std::vector<ProbabilityMeasure> laws;
  std::vector<AtomSet> supports;
  for (const auto& r : rs) {
    laws.push_back(law(r));
    AtomSet s;
    for (const auto& x : support_points(r)) s.insert(rat_str(x));
    supports.push_back(std::move(s));
  }
  return make_localization(std::move(laws), std::move(supports));
}

}  // namespace qsure::binom
