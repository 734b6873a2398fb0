#include "qsure/hahnext.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <utility>

namespace qsure::hx {

namespace {

AtomSet atoms_of(const std::vector<Rat>& pts) {
  AtomSet out;
  for (const auto& x : pts) out.insert(rat_str(x));
  return out;
}

// The covering alternative member for a point, as (key, support points).
// Branches are exclusive: the d-legs live on [d0, m0), the separated
// boundary pair owns {m0, M0}, point masses own [m0, D0] in the overlapping
// regime, and the image legs own (M0, U0].
std::pair<std::string, std::vector<Rat>> covering_support(
    const Rat& x, const binom::DisjointAlternative& alt, const std::string& atom_id) {
  const auto& p = alt.params;
  const auto& f = *alt.f;
  if (x >= p.d0 && x < alt.m0) return {"d=" + rat_str(x), {x, f(x)}};
  if (!alt.overlapping && (x == alt.m0 || x == alt.M0))
    return {"r2", {alt.m0, alt.M0}};
  if (alt.overlapping && x >= alt.m0 && x <= p.D0)
    return {"pm=" + rat_str(x), {x}};
  if (x > alt.M0 && x <= p.U0) {
    Rat d = f.inverse(x);
    return {"d=" + rat_str(d), {d, x}};
  }
  throw ValidationError("atom '" + atom_id + "' is not covered by any alternative support");
}

}  // namespace

Rat ExtendedMeasure::eval(const sets::SetExpr& a) const {
  Rat total(0);
  for (const auto& as : active) {
    if (as.points.empty() && !as.atoms.empty())
      throw ValidationError("support " + as.key +
                            " has non-numeric atoms; set evaluation needs points");
    for (const auto& x : sets::intersect_with_support(a, as.points))
      total += base.at(rat_str(x));
  }
  return total;
}

Rat ExtendedMeasure::eval(const sets::ExprPtr& a) const { return eval(*a); }

Rat ExtendedMeasure::eval_atoms(const AtomSet& a) const {
  Rat total(0);
  for (const auto& as : active)
    for (const auto& id : as.atoms)
      if (a.count(id)) total += base.at(id);
  return total;
}

ExtendedMeasure extend_measure(const SignedMeasure& mu, const binom::DisjointAlternative& alt) {
  std::map<std::string, ActiveSupport> found;
  for (const auto& id : mu.support()) {
    auto x = parse_rat(id);
    if (!x) throw ValidationError("atom '" + id + "' is not a point on the line");
    auto [key, pts] = covering_support(*x, alt, id);
    if (!found.count(key)) found[key] = ActiveSupport{key, atoms_of(pts), pts};
  }
  ExtendedMeasure em{mu, {}};
  for (auto& [key, as] : found) em.active.push_back(std::move(as));
  std::sort(em.active.begin(), em.active.end(),
            [](const ActiveSupport& a, const ActiveSupport& b) {
              return a.points.front() < b.points.front();
            });
  return em;
}

ExtendedMeasure extend_measure(const SignedMeasure& mu, const Localization& loc) {
  for (size_t i = 0; i < loc.size(); ++i)
    for (size_t j = i + 1; j < loc.size(); ++j)
      for (const auto& id : loc.supports[i])
        if (loc.supports[j].count(id))
          throw ValidationError(
              "localization supports overlap; the extension needs strictly disjoint supports");
  std::set<size_t> used;
  for (const auto& id : mu.support()) {
    bool covered = false;
    for (size_t j = 0; j < loc.size() && !covered; ++j)
      if (loc.supports[j].count(id)) {
        used.insert(j);
        covered = true;
      }
    if (!covered)
      throw ValidationError("atom '" + id + "' is not covered by any localization support");
  }
  ExtendedMeasure em{mu, {}};
  for (size_t j : used) {
    ActiveSupport as{"Q" + std::to_string(j), loc.supports[j], {}};
    std::vector<Rat> pts;
    bool numeric = true;
    for (const auto& id : as.atoms) {
      auto x = parse_rat(id);
      if (!x) {
        numeric = false;
        break;
      }
      pts.push_back(*x);
    }
    if (numeric) {
      std::sort(pts.begin(), pts.end());
      as.points = std::move(pts);
    }
    em.active.push_back(std::move(as));
  }
  return em;
}

Rat extended_tv(const ExtendedMeasure& em) {
  Rat direct = tv_norm(em.base);
  Rat summed(0);
  for (const auto& as : em.active) {
    auto hj = hahn_jordan(em.base.restricted(as.atoms));
    summed += hj.pos.mass(hj.pos.support()) + hj.neg.mass(hj.neg.support());
  }
  if (direct != summed)
    throw ValidationError("total variation mismatch between direct and per-support routes");
  return direct;
}

namespace {

// Probe catalogue over set expressions: the active supports as point sets,
// their pairwise unions, the symbolic support union over the whole
// parameter domain plus the non-leg component, complements of the plain
// probes, and the charged singletons. Singletons decide absolute
// continuity exactly; the rest exercise the extension field.
std::vector<sets::ExprPtr> binom_probes(const binom::DisjointAlternative& alt,
                                        const std::vector<ActiveSupport>& actives,
                                        const std::vector<Rat>& charged) {
  using sets::PlainSet;
  std::vector<PlainSet> plains;
  for (const auto& as : actives) plains.push_back(PlainSet::points(as.points));
  std::vector<sets::ExprPtr> out;
  std::set<std::string> seen;
  auto add = [&](const sets::ExprPtr& e) {
    if (seen.insert(sets::set_expr_str(*e)).second) out.push_back(e);
  };
  for (const auto& s : plains) {
    add(sets::expr_plain(s));
    add(sets::expr_complement(sets::expr_plain(s)));
  }
  for (size_t i = 0; i < plains.size(); ++i)
    for (size_t j = i + 1; j < plains.size(); ++j) {
      PlainSet u = set_union(plains[i], plains[j]);
      add(sets::expr_plain(u));
      add(sets::expr_complement(sets::expr_plain(u)));
    }
  add(sets::expr_su(PlainSet::interval(alt.params.d0, true, alt.m0, false), alt.f));
  PlainSet extra = alt.overlapping ? PlainSet::closed(alt.m0, alt.params.D0)
                                   : PlainSet::points({alt.m0, alt.M0});
  add(sets::expr_plain(extra));
  add(sets::expr_complement(sets::expr_plain(extra)));
  for (const auto& x : charged) add(sets::expr_plain(PlainSet::single(x)));
  return out;
}

}  // namespace

AcReport ac_preservation_report(const SignedMeasure& mu, const ProbabilityMeasure& p,
                                const binom::DisjointAlternative& alt) {
  auto ea = extend_measure(mu.abs(), alt);
  auto ep = extend_measure(p.measure(), alt);
  AcReport rep;
  rep.ac = is_abs_continuous(mu, p);

  std::map<std::string, ActiveSupport> merged;
  for (const auto& as : ea.active) merged.emplace(as.key, as);
  for (const auto& as : ep.active) merged.emplace(as.key, as);
  std::vector<ActiveSupport> actives;
  for (auto& [k, as] : merged) actives.push_back(as);
  std::sort(actives.begin(), actives.end(), [](const ActiveSupport& a, const ActiveSupport& b) {
    return a.points.front() < b.points.front();
  });
  std::vector<Rat> charged;
  for (const auto& id : mu.support()) charged.push_back(*parse_rat(id));
  for (const auto& id : p.support()) charged.push_back(*parse_rat(id));
  std::sort(charged.begin(), charged.end());
  charged.erase(std::unique(charged.begin(), charged.end()), charged.end());

  for (const auto& e : binom_probes(alt, actives, charged)) {
    AcProbe pr{sets::set_expr_str(*e), ep.eval(e), ea.eval(e)};
    if (pr.p_mass == 0 && pr.mu_abs_mass != 0 && !rep.witness)
      rep.witness = rep.probes.size();
    rep.probes.push_back(std::move(pr));
  }
  rep.probes_consistent = !rep.witness.has_value();
  return rep;
}

AcReport ac_preservation_report(const SignedMeasure& mu, const ProbabilityMeasure& p,
                                const Localization& loc) {
  auto ea = extend_measure(mu.abs(), loc);
  auto ep = extend_measure(p.measure(), loc);
  AcReport rep;
  rep.ac = is_abs_continuous(mu, p);

  AtomSet universe;
  for (const auto& s : loc.supports) universe.insert(s.begin(), s.end());
  std::vector<AtomSet> list;
  std::set<size_t> used;
  for (const auto& as : ea.active) list.push_back(as.atoms);
  for (const auto& as : ep.active) list.push_back(as.atoms);
  std::sort(list.begin(), list.end());
  list.erase(std::unique(list.begin(), list.end()), list.end());
  size_t base_count = list.size();
  for (size_t i = 0; i < base_count; ++i)
    for (size_t j = i + 1; j < base_count; ++j) {
      AtomSet u = list[i];
      u.insert(list[j].begin(), list[j].end());
      list.push_back(std::move(u));
    }
  for (size_t i = 0, n = list.size(); i < n; ++i) {
    AtomSet c;
    for (const auto& id : universe)
      if (!list[i].count(id)) c.insert(id);
    list.push_back(std::move(c));
  }
  for (const auto& id : mu.support()) list.push_back({id});
  for (const auto& id : p.support()) list.push_back({id});

  std::set<std::string> seen;
  for (const auto& a : list) {
    std::string text = "{";
    for (const auto& id : a) text += (text.size() == 1 ? "" : ", ") + id;
    text += "}";
    if (!seen.insert(text).second) continue;
    AcProbe pr{text, ep.eval_atoms(a), ea.eval_atoms(a)};
    if (pr.p_mass == 0 && pr.mu_abs_mass != 0 && !rep.witness)
      rep.witness = rep.probes.size();
    rep.probes.push_back(std::move(pr));
  }
  rep.probes_consistent = !rep.witness.has_value();
  return rep;
}

bool check_ac_preservation(const SignedMeasure& mu, const ProbabilityMeasure& p,
                           const binom::DisjointAlternative& alt) {
  auto rep = ac_preservation_report(mu, p, alt);
  if (rep.probes_consistent != rep.ac)
    throw ValidationError("extension probes disagree with base absolute continuity");
  return rep.ac;
}

bool check_ac_preservation(const SignedMeasure& mu, const ProbabilityMeasure& p,
                           const Localization& loc) {
  auto rep = ac_preservation_report(mu, p, loc);
  if (rep.probes_consistent != rep.ac)
    throw ValidationError("extension probes disagree with base absolute continuity");
  return rep.ac;
}

namespace {

struct SampledPiece {
  binom::BinMeasure q;
  std::vector<Rat> support;
  std::vector<Rat> piece;
};

}  // namespace

ExtEssSup extended_ess_sup(const binom::DisjointAlternative& alt, const ParamRule& rule,
                           unsigned denominator) {
  using sets::PlainSet;
  const auto& p = alt.params;
  const auto& f = *alt.f;

  if (!set_intersect(rule.d_only, rule.f_only).empty() ||
      !set_intersect(rule.d_only, rule.both_sides).empty() ||
      !set_intersect(rule.f_only, rule.both_sides).empty())
    throw ValidationError("rule domains overlap; each parameter must pick one option");

  // Leg parameters: the separated boundary member is addressed through
  // d = m0, so the leg domain closes at m0 in that regime.
  PlainSet leg = alt.overlapping ? PlainSet::interval(p.d0, true, alt.m0, false)
                                 : PlainSet::closed(p.d0, alt.m0);
  PlainSet d1 = set_intersect(rule.d_only, leg);
  PlainSet d2 = set_intersect(rule.f_only, leg);
  PlainSet d3 = set_intersect(rule.both_sides, leg);

  ExtEssSup out;
  auto add = [&](sets::ExprPtr e) {
    out.set = out.set ? sets::expr_union(out.set, std::move(e)) : std::move(e);
  };
  if (!d3.empty()) add(sets::expr_su(d3, alt.f, sets::SuSide::both));
  if (!d1.empty()) add(sets::expr_su(d1, alt.f, sets::SuSide::lower));
  if (!d2.empty()) add(sets::expr_su(d2, alt.f, sets::SuSide::upper));
  PlainSet pm_part;
  if (alt.overlapping) {
    pm_part = set_intersect(set_union(rule.d_only, rule.both_sides),
                            PlainSet::closed(alt.m0, p.D0));
    if (!pm_part.empty()) add(sets::expr_plain(pm_part));
  }
  if (!out.set) out.set = sets::expr_plain(PlainSet());

  // Sampled members with their rule pieces.
  std::vector<SampledPiece> sampled;
  for (const auto& q : binom::grid_members(alt, denominator)) {
    SampledPiece sp{q, binom::support_points(q), {}};
    if (q.is_point_mass()) {
      if (rule.d_only.contains(q.d) || rule.both_sides.contains(q.d)) sp.piece.push_back(q.d);
    } else {
      if (rule.d_only.contains(q.d) || rule.both_sides.contains(q.d)) sp.piece.push_back(q.d);
      if (rule.f_only.contains(q.d) || rule.both_sides.contains(q.d)) sp.piece.push_back(f(q.d));
    }
    sampled.push_back(std::move(sp));
  }

  // (a): every sampled piece sits inside the set.
  out.a_ok = true;
  for (const auto& sp : sampled)
    for (const auto& x : sp.piece)
      if (!sets::member(x, *out.set)) out.a_ok = false;

  // (b): probes that swallow every sampled piece must cover the set on the
  // sampled supports. Sound but not exhaustive, hence the flag.
  std::vector<sets::ExprPtr> probes;
  std::set<std::string> seen;
  auto addp = [&](const sets::ExprPtr& e) {
    if (seen.insert(sets::set_expr_str(*e)).second) probes.push_back(e);
  };
  std::vector<PlainSet> plains;
  for (const auto& sp : sampled) plains.push_back(PlainSet::points(sp.support));
  for (const auto& s : plains) {
    addp(sets::expr_plain(s));
    addp(sets::expr_complement(sets::expr_plain(s)));
  }
  for (size_t i = 0; i < plains.size(); ++i)
    for (size_t j = i + 1; j < plains.size(); ++j)
      addp(sets::expr_plain(set_union(plains[i], plains[j])));
  addp(out.set);
  auto per_component = [&](const PlainSet& d, sets::SuSide side) {
    for (const auto& iv : d.intervals())
      addp(sets::expr_su(PlainSet::interval(iv.lo, iv.lo_closed, iv.hi, iv.hi_closed),
                         alt.f, side));
    for (const auto& x : d.points()) addp(sets::expr_su(PlainSet::single(x), alt.f, side));
  };
  per_component(d1, sets::SuSide::lower);
  per_component(d2, sets::SuSide::upper);
  per_component(d3, sets::SuSide::both);
  if (!pm_part.empty()) addp(sets::expr_plain(pm_part));

  out.b_ok = true;
  for (const auto& e : probes) {
    RuleProbe rp{sets::set_expr_str(*e), true, true};
    for (const auto& sp : sampled)
      for (const auto& x : sp.piece)
        if (!sets::member(x, *e)) rp.hypothesis = false;
    for (const auto& sp : sampled)
      for (const auto& x : sp.support)
        if (sets::member(x, *out.set) && !sets::member(x, *e)) rp.conclusion = false;
    if (rp.hypothesis && !rp.conclusion) out.b_ok = false;
    out.probes.push_back(std::move(rp));
  }
  out.exhaustive = false;
  return out;
}

bool restriction_isometry_check(const SignedMeasure& mu, const binom::DisjointAlternative& alt) {
  return tv_norm(mu) == extended_tv(extend_measure(mu, alt));
}

bool restriction_isometry_check(const SignedMeasure& mu, const Localization& loc) {
  return tv_norm(mu) == extended_tv(extend_measure(mu, loc));
}

}  // namespace qsure::hx
