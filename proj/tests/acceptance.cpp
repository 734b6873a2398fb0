// Acceptance gate: one self-contained check per shipped guarantee, one
// printed line each. All measure arithmetic is exact; where a criterion has
// a numeric slack it is pinned here in code (the grid sandwich allows 1/10,
// the batch of risk identities must finish within 10 seconds).

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "qsure/binomial.hpp"
#include "qsure/family.hpp"
#include "qsure/hahnext.hpp"
#include "qsure/measure.hpp"
#include "qsure/realset.hpp"
#include "qsure/testing.hpp"
#include "test_support.hpp"

using namespace qsure;
namespace bn = qsure::binom;

namespace {

struct CriterionFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void expect(bool ok, const std::string& what) {
  if (!ok) throw CriterionFailure(what);
}

const bn::ModelParams kSep{Rat(11, 10), Rat(13, 10), Rat(7, 10), Rat(9, 10),
                           Rat(2, 5), Rat(3, 5)};
const bn::ModelParams kOvl{Rat(1), Rat(13, 10), Rat(7, 10), Rat(11, 10),
                           Rat(2, 5), Rat(3, 5)};

// -- shared random builders ------------------------------------------------

testing::TestProblem random_problem(tsup::Rng& rng, int max_atoms,
                                    int max_members) {
  auto pool = tsup::atom_pool(2 + int(rng.below(max_atoms - 1)));
  auto fam = [&] {
    std::vector<ProbabilityMeasure> ms;
    int n = 1 + int(rng.below(max_members));
    for (int i = 0; i < n; ++i) ms.push_back(tsup::random_prob(rng, pool));
    return MeasureFamily(std::move(ms));
  };
  return testing::TestProblem{fam(), fam(), std::nullopt};
}

std::vector<Rat> alt_points(const bn::DisjointAlternative& alt) {
  std::set<Rat> pts;
  for (const auto& r : bn::sample_members(alt, 6))
    for (const auto& x : bn::support_points(r)) pts.insert(x);
  return std::vector<Rat>(pts.begin(), pts.end());
}

SignedMeasure random_on_points(tsup::Rng& rng, const std::vector<Rat>& pts) {
  std::map<std::string, Rat> w;
  for (const auto& x : pts)
    if (rng.coin()) {
      long num = rng.range(-6, 6);
      if (num) w[rat_str(x)] = Rat(num, 1 + long(rng.below(4)));
    }
  if (w.empty()) w[rat_str(pts[rng.below(pts.size())])] = Rat(1, 3);
  return SignedMeasure(w);
}

ProbabilityMeasure random_prob_on(tsup::Rng& rng, const std::vector<Rat>& pts) {
  std::map<std::string, Rat> w;
  Rat total(0);
  for (const auto& x : pts)
    if (rng.coin()) {
      Rat v(1 + long(rng.below(5)));
      w[rat_str(x)] = v;
      total += v;
    }
  if (w.empty()) {
    w[rat_str(pts[rng.below(pts.size())])] = 1;
    total = 1;
  }
  for (auto& [a, v] : w) v /= total;
  return ProbabilityMeasure(w);
}

Rat random_in(tsup::Rng& rng, const Rat& lo, const Rat& hi) {
  long den = 1 + long(rng.below(97));
  long num = long(rng.below(den + 1));
  return lo + (hi - lo) * Rat(num, den);
}

// -- criteria --------------------------------------------------------------

std::string crit_risk_identity() {
  auto t0 = std::chrono::steady_clock::now();
  tsup::Rng rng{20260823};
  for (int i = 0; i < 200; ++i) {
    auto prob = random_problem(rng, 6, 4);
    auto sol = testing::min_risk(prob);
    auto hull = testing::min_tv_between_hulls(prob);
    expect(sol.d_tv == hull.d, "two hull-distance routes disagree");
    expect(sol.min_risk == Rat(1) - sol.d_tv, "risk identity broken");
    expect(testing::risk(sol.phi_star, prob) == sol.min_risk,
           "reported optimum is not attained by the reported test");
  }
  auto secs = std::chrono::duration<double>(
                  std::chrono::steady_clock::now() - t0).count();
  expect(secs < 10.0, "200 instances exceeded the 10 s budget");
  char buf[64];
  std::snprintf(buf, sizeof buf, "200 instances in %.2fs", secs);
  return buf;
}

std::string crit_singleton_hulls() {
  tsup::Rng rng{411};
  auto pool = tsup::atom_pool(6);
  for (int i = 0; i < 100; ++i) {
    auto mu = tsup::random_prob(rng, pool);
    auto nu = tsup::random_prob(rng, pool);
    testing::TestProblem prob{MeasureFamily({mu}), MeasureFamily({nu}),
                              std::nullopt};
    auto hull = testing::min_tv_between_hulls(prob);
    Rat direct = tv_norm(mu.measure() - nu.measure()) / 2;
    expect(hull.d == direct, "hull distance differs from the half-L1 value");
  }
  return "100 pairs";
}

std::string crit_grid_sandwich() {
  tsup::Rng rng{555};
  const Rat slack(1, 10);
  for (int inst = 0; inst < 20; ++inst) {
    auto prob = random_problem(rng, 5, 2);
    auto hull = testing::min_tv_between_hulls(prob);
    auto mixtures = [](const MeasureFamily& fam) {
      std::vector<ProbabilityMeasure> out;
      if (fam.members().size() == 1) {
        out.push_back(fam.members()[0]);
      } else {
        for (int g = 0; g <= 20; ++g) {
          Rat lam(g, 20);
          out.push_back(
              mix({lam, Rat(1) - lam}, {fam.members()[0], fam.members()[1]}));
        }
      }
      return out;
    };
    auto m0 = mixtures(prob.h0);
    auto m1 = mixtures(prob.h1);
    Rat best = tv_norm(m0[0].measure() - m1[0].measure()) / 2;
    for (const auto& a : m0)
      for (const auto& b : m1)
        best = std::min(best, tv_norm(a.measure() - b.measure()) / 2);
    expect(best >= hull.d, "grid minimum fell below the true optimum");
    expect(best - hull.d <= slack, "grid minimum misses the optimum by more than 1/10");
  }
  return "20 instances, step 1/20";
}

std::string crit_singular_additivity() {
  tsup::Rng rng{808};
  auto pool = tsup::atom_pool(8);
  for (int inst = 0; inst < 100; ++inst) {
    int k = 2 + int(rng.below(3));
    // disjoint atom blocks make the measures pairwise singular by design
    std::vector<std::vector<std::string>> blocks(k);
    for (size_t a = 0; a < pool.size(); ++a)
      blocks[(a + rng.below(2)) % k].push_back(pool[a]);
    std::vector<SignedMeasure> ms;
    for (const auto& blk : blocks) {
      std::map<std::string, Rat> w;
      for (const auto& a : blk) {
        long num = rng.range(-9, 9);
        if (num) w[a] = Rat(num, 1 + long(rng.below(5)));
      }
      if (w.empty() && !blk.empty()) w[blk[0]] = Rat(1, 2);
      ms.push_back(SignedMeasure(w));
    }
    SignedMeasure total;
    Rat tv_sum(0);
    for (const auto& m : ms) {
      total = total + m;
      tv_sum += tv_norm(m);
    }
    for (size_t i = 0; i < ms.size(); ++i)
      for (size_t j = i + 1; j < ms.size(); ++j)
        expect(is_singular(ms[i], ms[j]), "blocks failed to be singular");
    expect(tv_norm(total) == tv_sum, "total variation not additive");
  }
  return "100 families";
}

std::string crit_glue_duality() {
  tsup::Rng rng{909};
  for (int inst = 0; inst < 100; ++inst) {
    auto pool = tsup::atom_pool(3 + int(rng.below(3)));
    std::vector<ProbabilityMeasure> members;
    int n = 2 + int(rng.below(3));
    for (int i = 0; i < n; ++i) members.push_back(tsup::random_prob(rng, pool));
    MeasureFamily fam(std::move(members), rng.coin() ? AtomSet{"zz"} : AtomSet{});
    auto loc = dirac_localization(fam);

    std::vector<BoundedFunction> pieces(loc.size());
    std::map<std::string, Rat> oracle;
    for (size_t i = 0; i < loc.size(); ++i) {
      const std::string& a = *loc.supports[i].begin();
      Rat v(rng.range(-8, 8), 1 + long(rng.below(4)));
      pieces[i].values[a] = v;
      oracle[a] = v;
    }
    auto h = glue(fam, loc, pieces);

    for (const auto& a : fam.universe()) {
      if (!fam.charges(a)) {
        expect(h.at(a) == 0, "polar atom not pinned to zero");
      } else {
        expect(h.at(a) == oracle.at(a), "glued value differs from its piece");
      }
    }
    for (int probe = 0; probe < 50; ++probe) {
      auto mu = tsup::random_signed(rng, pool);
      Rat by_support(0);
      for (size_t i = 0; i < loc.size(); ++i)
        for (const auto& a : loc.supports[i]) by_support += h.at(a) * mu.at(a);
      expect(eval_functional(h, mu) == by_support,
             "functional differs from the per-support sum");
    }
    Rat norm = qs_sup_norm(h, fam);
    Rat best(0);
    std::string arg;
    for (const auto& a : fam.universe())
      if (fam.charges(a) && rat_abs(h.at(a)) >= best) {
        best = rat_abs(h.at(a));
        arg = a;
      }
    expect(norm == best, "sup norm differs from the charged maximum");
    if (!arg.empty()) {
      auto witness = ProbabilityMeasure::dirac(arg);
      expect(rat_abs(eval_functional(h, witness.measure())) == norm,
             "no point mass attains the sup norm");
    }
  }
  return "100 families, 50 probes each";
}

std::string crit_extension_isometry() {
  tsup::Rng rng{616};
  for (int regime = 0; regime < 2; ++regime) {
    auto alt = bn::build_alternative(regime ? kOvl : kSep);
    auto pts = alt_points(alt);
    for (int i = 0; i < 50; ++i) {
      auto mu = random_on_points(rng, pts);
      auto em = hx::extend_measure(mu, alt);
      expect(hx::extended_tv(em) == tv_norm(mu), "extension changed the norm");
      expect(hx::restriction_isometry_check(mu, alt), "isometry check failed");
    }
    for (int i = 0; i < 50; ++i) {
      auto p = random_prob_on(rng, pts);
      AtomSet psup = p.support();
      std::vector<Rat> inside;
      for (const auto& x : pts)
        if (psup.count(rat_str(x))) inside.push_back(x);
      bool force_ac = i % 2 == 0;
      SignedMeasure mu;
      if (force_ac) {
        mu = random_on_points(rng, inside);
      } else {
        std::vector<Rat> outside;
        for (const auto& x : pts)
          if (!psup.count(rat_str(x))) outside.push_back(x);
        if (outside.empty()) {
          mu = random_on_points(rng, inside);
        } else {
          mu = random_on_points(rng, inside) +
               SignedMeasure({{rat_str(outside[rng.below(outside.size())]),
                               Rat(1, 2)}});
        }
      }
      auto rep = hx::ac_preservation_report(mu, p, alt);
      bool base = is_abs_continuous(mu, p);
      expect(rep.ac == base, "report verdict differs from the base relation");
      expect(rep.probes_consistent == base,
             "extension probes disagree with the base relation");
      if (!base) {
        expect(rep.witness.has_value(), "missing witness probe");
        const auto& w = rep.probes[*rep.witness];
        expect(w.p_mass == 0 && w.mu_abs_mass != 0, "witness probe is not a witness");
      }
      expect(hx::check_ac_preservation(mu, p, alt) == base,
             "checked preservation differs from the base relation");
    }
  }
  return "100 measures, 100 pairs, both regimes";
}

std::string crit_support_disjointness() {
  for (int regime = 0; regime < 2; ++regime) {
    auto alt = bn::build_alternative(regime ? kOvl : kSep);
    const auto& p = alt.params;
    std::vector<bn::BinMeasure> members;
    for (long k = 0; k < 1000; ++k) {
      Rat d = p.d0 + (alt.m0 - p.d0) * Rat(k, 1000);
      members.push_back(bn::BinMeasure{(*alt.f)(d), d, alt.pi_tilde});
    }
    if (alt.overlapping) {
      for (long k = 0; k < 1000; ++k) {
        Rat a = p.u0 + (p.D0 - p.u0) * Rat(k, 1000);
        members.push_back(bn::BinMeasure{a, a, alt.pi_tilde});
      }
    } else {
      members.push_back(bn::BinMeasure{alt.M0, alt.m0, alt.pi_tilde});
    }
    std::set<Rat> seen;
    size_t inserted = 0;
    for (const auto& r : members)
      for (const auto& x : bn::support_points(r)) {
        seen.insert(x);
        ++inserted;
      }
    expect(seen.size() == inserted, "two members share a support point");
    for (long k = 0; k < 1000; ++k) {
      Rat d = p.d0 + (alt.m0 - p.d0) * Rat(k, 1000);
      expect(alt.f->inverse((*alt.f)(d)) == d, "f inverse round trip failed");
      Rat y = alt.M0 + (p.U0 - alt.M0) * Rat(k, 1000);
      expect((*alt.f)(alt.f->inverse(y)) == y, "f forward round trip failed");
    }
  }
  return "1000-point grids, both regimes";
}

std::string crit_cover_soundness() {
  tsup::Rng rng{717};
  for (int regime = 0; regime < 2; ++regime) {
    auto alt = bn::build_alternative(regime ? kOvl : kSep);
    const auto& p = alt.params;
    Rat olo = std::max(p.u0, p.d0), ohi = std::min(p.U0, p.D0);
    bool overlap = olo <= ohi;
    for (int i = 0; i < 500; ++i) {
      bn::BinMeasure q;
      q.pi = random_in(rng, p.pi0, p.Pi0);
      if (overlap && rng.below(4) == 0) {
        q.u = q.d = random_in(rng, olo, ohi);
      } else {
        q.u = random_in(rng, p.u0, p.U0);
        q.d = random_in(rng, p.d0, p.D0);
      }
      auto c = bn::cover(q, alt);
      expect(c.support_ok, "cover does not absorb the support");
      expect(c.ac_ok, "cover average does not dominate");
      auto avg = (law(c.q1).measure() + law(c.q2).measure()).scaled(Rat(1, 2));
      expect(is_abs_continuous(law(q).measure(), avg),
             "independent domination check failed");
    }
  }
  return "1000 members, both regimes";
}

std::string crit_robust_na() {
  // box entirely inside the unit interval on the down side, crossing only
  // through U0: u0 <= D0 < 1 < U0
  bn::ModelParams p{Rat(4, 5), Rat(11, 10), Rat(3, 5), Rat(9, 10), Rat(2, 5),
                    Rat(3, 5)};
  expect(bn::validate_params(p).overall, "parameter box rejected");
  auto res = bn::check_na_robust(p);
  expect(res.na, "robust no-arbitrage should hold on this box");
  expect(res.up_witness.has_value() && res.down_witness.has_value(),
         "robust verdict lacks directional witnesses");
  expect(law(*res.up_witness).measure().mass(AtomSet{rat_str(Rat(11, 10))}) > 0 ||
             res.up_witness->u > 1 || res.up_witness->d > 1,
         "up witness sees no gain");
  bn::BinMeasure member{Rat(9, 10), Rat(3, 5), Rat(1, 2)};
  expect(!bn::check_na_single(member),
         "sure-loss member unexpectedly passes the single check");
  return "u=9/10 d=3/5 fails inside a passing box";
}

std::string run_cli_capture(const std::string& args, int& code) {
  std::string cmd = std::string(QSURE_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  expect(pipe != nullptr, "cannot launch the command-line binary");
  std::string out;
  char buf[512];
  while (size_t n = fread(buf, 1, sizeof buf, pipe)) out.append(buf, n);
  int status = pclose(pipe);
  code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return out;
}

std::string crit_cli_determinism() {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() /
                 ("qsure_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  fs::path model = dir / "model.qm";
  std::ofstream(model)
      << "binomial B { u0 = 11/10, U0 = 13/10, d0 = 7/10, D0 = 9/10, "
         "pi0 = 2/5, Pi0 = 3/5 }\n"
         "atoms { h, t }\n"
         "prob Bp { h: 3/10, t: 7/10 }\n"
         "prob Bq { h: 7/10, t: 3/10 }\n"
         "family F0 { members = [Bp] }\n"
         "family F1 { members = [Bq] }\n"
         "testproblem T { h0 = F0, h1 = F1 }\n";
  for (const std::string args :
       {"binomial-cover " + model.string() +
            " --binomial B --seed 77 --count 40 --format machine",
        "kraft " + model.string() + " --problem T --format machine"}) {
    int c1 = 0, c2 = 0, c3 = 0;
    std::string a = run_cli_capture(args, c1);
    std::string b = run_cli_capture(args, c2);
    std::string c = run_cli_capture(args, c3);
    expect(c1 == 0 && c2 == 0 && c3 == 0, "command exited nonzero");
    expect(!a.empty(), "command produced no output");
    expect(a == b && b == c, "repeated runs differ");
  }
  return "two commands, three runs each";
}

}  // namespace

int main() {
  using Body = std::function<std::string()>;
  const std::vector<std::pair<std::string, Body>> criteria = {
      {"minimax risk equals one minus the hull distance", crit_risk_identity},
      {"singleton hulls match the half-L1 distance", crit_singleton_hulls},
      {"weight-grid search brackets the hull distance", crit_grid_sandwich},
      {"total variation adds across singular summands", crit_singular_additivity},
      {"level-set gluing matches the pointwise oracle", crit_glue_duality},
      {"extension preserves norm and domination", crit_extension_isometry},
      {"alternative supports are pairwise disjoint", crit_support_disjointness},
      {"covers absorb every box member", crit_cover_soundness},
      {"robust no-arbitrage with a failing member", crit_robust_na},
      {"machine reports are byte-stable", crit_cli_determinism},
  };
  int failures = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    std::string detail;
    bool ok = true;
    try {
      detail = criteria[i].second();
    } catch (const std::exception& e) {
      ok = false;
      detail = e.what();
    }
    std::printf("[%2zu/%zu] %-48s %s  (%s)\n", i + 1, criteria.size(),
                criteria[i].first.c_str(), ok ? "pass" : "FAIL",
                detail.c_str());
    if (!ok) ++failures;
  }
  if (failures) std::printf("%d criterion(s) failed\n", failures);
  return failures;
}
