#include "qsure/family.hpp"

#include <algorithm>
#include <set>

namespace qsure {

namespace {

AtomSet set_minus(const AtomSet& a, const AtomSet& b) {
  AtomSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(),
                      std::inserter(out, out.end()));
  return out;
}

AtomSet set_and(const AtomSet& a, const AtomSet& b) {
  AtomSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::inserter(out, out.end()));
  return out;
}

AtomSet set_or(const AtomSet& a, const AtomSet& b) {
  AtomSet out = a;
  out.insert(b.begin(), b.end());
  return out;
}

bool subset(const AtomSet& a, const AtomSet& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

}  // namespace

MeasureFamily::MeasureFamily(std::vector<ProbabilityMeasure> members, AtomSet extras)
    : members_(std::move(members)) {
  if (members_.empty()) throw ValidationError("family needs at least one member");
  for (const auto& a : extras)
    if (!charges(a)) extras_.insert(a);  // charged "extras" are plain support atoms
}

AtomSet MeasureFamily::universe() const {
  AtomSet u = extras_;
  for (const auto& p : members_) {
    auto s = p.support();
    u.insert(s.begin(), s.end());
  }
  return u;
}

bool MeasureFamily::charges(const std::string& atom_id) const {
  for (const auto& p : members_)
    if (p.at(atom_id) > 0) return true;
  return false;
}

Localization make_localization(std::vector<ProbabilityMeasure> measures,
                               std::vector<AtomSet> supports) {
  if (measures.size() != supports.size())
    throw ValidationError("localization needs one support per measure");
  for (size_t i = 0; i < measures.size(); ++i)
    if (measures[i].mass(supports[i]) != 1)
      throw ValidationError("localization member " + std::to_string(i) +
                            " does not live on its support");
  return Localization{std::move(measures), std::move(supports)};
}

bool is_polar(const MeasureFamily& family, const AtomSet& atoms) {
  for (const auto& p : family.members())
    if (p.mass(atoms) > 0) return false;
  return true;
}

std::optional<AtomSet> is_supported_measure(const ProbabilityMeasure& mu,
                                            const MeasureFamily& family) {
  AtomSet s = mu.support();
  for (const auto& a : s)
    if (!family.charges(a)) return std::nullopt;  // mu charges a polar atom
  return s;
}

Localization dirac_localization(const MeasureFamily& family) {
  AtomSet charged;
  for (const auto& p : family.members()) {
    auto s = p.support();
    charged.insert(s.begin(), s.end());
  }
  std::vector<ProbabilityMeasure> measures;
  std::vector<AtomSet> supports;
  for (const auto& a : charged) {
    measures.push_back(ProbabilityMeasure::dirac(a));
    supports.push_back({a});
  }
  return Localization{std::move(measures), std::move(supports)};
}

LocalizationReport verify_localization(const MeasureFamily& family, const Localization& loc,
                                       bool strict_disjoint) {
  if (loc.measures.size() != loc.supports.size())
    throw ValidationError("localization needs one support per measure");
  AtomSet u = family.universe();
  for (size_t i = 0; i < loc.size(); ++i) {
    if (!subset(loc.measures[i].support(), u) || !subset(loc.supports[i], u))
      throw ValidationError("localization member " + std::to_string(i) +
                            " leaves the family's atom universe");
  }

  LocalizationReport rep;
  rep.delta_ok = true;
  for (size_t i = 0; i < loc.size(); ++i) {
    for (size_t j = 0; j < loc.size(); ++j) {
      Rat m = loc.measures[i].mass(loc.supports[j]);
      Rat want = i == j ? 1 : 0;
      if (m != want) {
        rep.delta_ok = false;
        rep.notes.push_back("Q" + std::to_string(i) + "(S" + std::to_string(j) +
                            ") = " + rat_str(m) + ", want " + rat_str(want));
      }
    }
  }

  rep.disjoint_ok = true;
  for (size_t i = 0; i < loc.size(); ++i) {
    for (size_t j = i + 1; j < loc.size(); ++j) {
      AtomSet overlap = set_and(loc.supports[i], loc.supports[j]);
      if (overlap.empty()) continue;
      if (strict_disjoint || !is_polar(family, overlap)) {
        rep.disjoint_ok = false;
        rep.notes.push_back("S" + std::to_string(i) + " and S" + std::to_string(j) +
                            " overlap");
      }
    }
  }

  rep.q_lll_p = true;
  for (size_t i = 0; i < loc.size(); ++i) {
    std::optional<size_t> dom;
    for (size_t k = 0; k < family.members().size(); ++k) {
      if (is_abs_continuous(loc.measures[i].measure(), family.members()[k])) {
        dom = k;
        break;
      }
    }
    rep.q_dominators.push_back(dom);
    if (!dom) {
      rep.q_lll_p = false;
      rep.notes.push_back("Q" + std::to_string(i) + " not dominated by any member");
    }
  }

  rep.p_lll_sconvq = true;
  for (size_t k = 0; k < family.members().size(); ++k) {
    const auto& p = family.members()[k];
    auto active = family_of_mu(loc, p.measure());
    bool ok = false;
    std::vector<Rat> weights(loc.size(), Rat(0));
    if (!active.empty()) {
      std::vector<Rat> w;
      std::vector<ProbabilityMeasure> qs;
      for (size_t i : active) {
        w.emplace_back(1, static_cast<long>(active.size()));
        qs.push_back(loc.measures[i]);
      }
      ProbabilityMeasure m = mix(w, qs);
      if (is_abs_continuous(p.measure(), m)) {
        ok = true;
        for (size_t t = 0; t < active.size(); ++t) weights[active[t]] = w[t];
      }
    }
    if (!ok) {
      rep.p_lll_sconvq = false;
      rep.notes.push_back("member " + std::to_string(k) +
                          " not dominated by a mixture over the localization");
      weights.clear();
    }
    rep.p_weights.push_back(std::move(weights));
  }

  rep.overall = rep.delta_ok && rep.disjoint_ok && rep.q_lll_p && rep.p_lll_sconvq;
  return rep;
}

std::vector<size_t> family_of_mu(const Localization& loc, const SignedMeasure& mu) {
  std::vector<size_t> out;
  SignedMeasure a = mu.abs();
  for (size_t i = 0; i < loc.size(); ++i)
    if (a.mass(loc.supports[i]) > 0) out.push_back(i);
  return out;
}

std::vector<AtomSet> generate_probes(const MeasureFamily& family, const Localization& loc,
                                     const ProbeOptions& opts) {
  AtomSet u = family.universe();
  std::set<AtomSet> probes;
  if (opts.brute_force) {
    if (u.size() > 12)
      throw ValidationError("exhaustive probe enumeration limited to 12 atoms");
    std::vector<std::string> atoms(u.begin(), u.end());
    for (size_t mask = 0; mask < (size_t{1} << atoms.size()); ++mask) {
      AtomSet s;
      for (size_t b = 0; b < atoms.size(); ++b)
        if (mask & (size_t{1} << b)) s.insert(atoms[b]);
      probes.insert(std::move(s));
    }
  } else {
    probes.insert(AtomSet{});
    probes.insert(u);
    // unions of up to `depth` supports, and their complements
    int depth = std::max(1, opts.depth);
    std::vector<AtomSet> layer{AtomSet{}};
    for (int d = 0; d < depth; ++d) {
      std::vector<AtomSet> next;
      for (const auto& base : layer) {
        for (const auto& s : loc.supports) {
          AtomSet un = set_or(base, s);
          if (un == base) continue;
          probes.insert(un);
          probes.insert(set_minus(u, un));
          next.push_back(std::move(un));
        }
      }
      layer = std::move(next);
    }
  }
  for (const auto& e : opts.extra_probes) probes.insert(e);
  return {probes.begin(), probes.end()};
}

EssSupResult essential_supremum(const MeasureFamily& family, const Localization& loc,
                                const std::vector<AtomSet>& pieces,
                                const ProbeOptions& opts) {
  if (pieces.size() != loc.size())
    throw ValidationError("essential supremum needs one piece per localization member");
  for (size_t i = 0; i < pieces.size(); ++i)
    if (!subset(pieces[i], loc.supports[i]))
      throw ValidationError("piece " + std::to_string(i) + " leaves its support");

  EssSupResult res;
  for (const auto& e : pieces) res.sup.insert(e.begin(), e.end());

  res.cert.a_ok = true;
  for (size_t i = 0; i < loc.size(); ++i)
    if (loc.measures[i].mass(set_minus(pieces[i], res.sup)) != 0) res.cert.a_ok = false;

  res.cert.b_ok = true;
  res.cert.exhaustive = opts.brute_force;
  for (const auto& f : generate_probes(family, loc, opts)) {
    ProbeCheck c;
    c.probe = f;
    c.hypothesis = true;
    for (size_t i = 0; i < loc.size(); ++i)
      if (loc.measures[i].mass(set_minus(pieces[i], f)) != 0) c.hypothesis = false;
    c.conclusion = true;
    for (size_t i = 0; i < loc.size(); ++i)
      if (loc.measures[i].mass(set_minus(res.sup, f)) != 0) c.conclusion = false;
    if (!c.ok()) res.cert.b_ok = false;
    res.cert.probes.push_back(std::move(c));
  }
  return res;
}

BoundedFunction glue(const MeasureFamily& family, const Localization& loc,
                     const std::vector<BoundedFunction>& pieces) {
  if (pieces.size() != loc.size())
    throw ValidationError("gluing needs one piece per localization member");
  auto rep = verify_localization(family, loc, true);
  if (!rep.disjoint_ok) throw ValidationError("gluing needs pairwise disjoint supports");
  if (!rep.overall) throw ValidationError("localization does not verify; cannot glue");

  AtomSet u = family.universe();
  AtomSet covered;
  for (const auto& s : loc.supports) covered.insert(s.begin(), s.end());
  for (size_t i = 0; i < pieces.size(); ++i) {
    for (const auto& a : u) {
      if (loc.supports[i].count(a)) continue;
      if (family.charges(a) && pieces[i].at(a) != 0)
        throw ValidationError("piece " + std::to_string(i) +
                              " does not vanish off its support at atom " + a);
    }
  }

  // level-set grid: exactly the rational values appearing in the pieces
  std::set<Rat> grid_set;
  for (const auto& g : pieces) {
    grid_set.insert(g.default_value);
    for (const auto& entry : g.values) grid_set.insert(entry.second);
  }
  std::vector<Rat> grid(grid_set.begin(), grid_set.end());

  // E_q = union over members of S_Q ∩ {g_Q >= q}
  std::vector<AtomSet> levels;
  for (const auto& q : grid) {
    AtomSet eq;
    for (size_t i = 0; i < loc.size(); ++i)
      for (const auto& a : loc.supports[i])
        if (pieces[i].at(a) >= q) eq.insert(a);
    levels.push_back(std::move(eq));
  }

  BoundedFunction h;  // default 0 off the union of supports
  for (const auto& a : covered) {
    if (!family.charges(a)) continue;  // polar atoms pinned to 0
    for (size_t k = grid.size(); k-- > 0;) {
      if (levels[k].count(a)) {
        if (grid[k] != 0) h.values[a] = grid[k];
        break;
      }
    }
  }
  return h;
}

Rat eval_functional(const BoundedFunction& h, const SignedMeasure& mu) {
  Rat total(0);
  for (const auto& [a, w] : mu.weights()) total += h.at(a) * w;
  return total;
}

Rat qs_sup_norm(const BoundedFunction& h, const MeasureFamily& family) {
  Rat best(0);
  for (const auto& p : family.members())
    for (const auto& entry : p.weights()) best = std::max(best, rat_abs(h.at(entry.first)));
  return best;
}

bool check_hahn_property(const MeasureFamily& family, const Localization& dominating,
                         const ProbeOptions& opts) {
  if (dominating.measures.size() != dominating.supports.size()) return false;

  AtomSet all = family.universe();
  for (const auto& q : dominating.measures) {
    auto s = q.support();
    all.insert(s.begin(), s.end());
  }
  for (const auto& s : dominating.supports) all.insert(s.begin(), s.end());

  // (i) identical polar singletons
  for (const auto& a : all) {
    bool fam_polar = !family.charges(a);
    bool loc_polar = true;
    for (const auto& q : dominating.measures)
      if (q.at(a) > 0) loc_polar = false;
    if (fam_polar != loc_polar) return false;
  }

  // (ii) disjoint full-mass supports
  for (size_t i = 0; i < dominating.size(); ++i) {
    if (dominating.measures[i].mass(dominating.supports[i]) != 1) return false;
    for (size_t j = i + 1; j < dominating.size(); ++j)
      if (!set_and(dominating.supports[i], dominating.supports[j]).empty()) return false;
  }

  // (iii) probe sets null on every support piece are null outright
  std::set<AtomSet> probes;
  for (const auto& f : generate_probes(family, dominating, opts)) probes.insert(f);
  for (const auto& a : all) probes.insert(AtomSet{a});
  for (const auto& p : family.members()) {
    for (const auto& f : probes) {
      bool null_on_pieces = true;
      for (const auto& w : dominating.supports)
        if (p.mass(set_and(f, w)) != 0) null_on_pieces = false;
      if (null_on_pieces && p.mass(f) != 0) return false;
    }
  }
  return true;
}

Localization find_singular_countable_localization(const MeasureFamily& family,
                                                  bool coarsen) {
  if (!coarsen) return dirac_localization(family);

  // one block per charge pattern (set of members giving the atom positive mass)
  std::map<std::vector<size_t>, AtomSet> blocks;
  AtomSet charged;
  for (const auto& p : family.members()) {
    auto s = p.support();
    charged.insert(s.begin(), s.end());
  }
  for (const auto& a : charged) {
    std::vector<size_t> pattern;
    for (size_t k = 0; k < family.members().size(); ++k)
      if (family.members()[k].at(a) > 0) pattern.push_back(k);
    blocks[pattern].insert(a);
  }

  std::vector<std::pair<AtomSet, size_t>> ordered;  // block, first charging member
  for (const auto& [pattern, atoms] : blocks) ordered.emplace_back(atoms, pattern.front());
  std::sort(ordered.begin(), ordered.end(),
            [](const auto& x, const auto& y) { return *x.first.begin() < *y.first.begin(); });

  std::vector<ProbabilityMeasure> measures;
  std::vector<AtomSet> supports;
  for (const auto& [atoms, k] : ordered) {
    SignedMeasure part = family.members()[k].measure().restricted(atoms);
    Rat m = part.mass(atoms);
    measures.emplace_back(part.scaled(Rat(1) / m));
    supports.push_back(atoms);
  }
  return Localization{std::move(measures), std::move(supports)};
}

}  // namespace qsure
