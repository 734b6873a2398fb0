#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <map>
#include <vector>

#include "qsure/hahnext.hpp"
#include "test_support.hpp"

using namespace qsure;
using namespace qsure::hx;
namespace bn = qsure::binom;
namespace st = qsure::sets;

namespace {

const bn::ModelParams sep{Rat(11, 10), Rat(13, 10), Rat(7, 10), Rat(9, 10), Rat(2, 5), Rat(3, 5)};
const bn::ModelParams ovl{Rat(1), Rat(13, 10), Rat(7, 10), Rat(11, 10), Rat(2, 5), Rat(3, 5)};

SignedMeasure pts_measure(std::vector<std::pair<Rat, Rat>> atoms) {
  std::map<std::string, Rat> w;
  for (auto& [x, wt] : atoms) w[rat_str(x)] += wt;
  return SignedMeasure(std::move(w));
}

// Signed measure charging random support points of the alternative.
SignedMeasure random_alt_measure(tsup::Rng& rng, const bn::DisjointAlternative& alt,
                                 size_t npts) {
  auto members = bn::sample_members(alt, 6);
  std::map<std::string, Rat> w;
  for (size_t i = 0; i < npts; ++i) {
    const auto& q = members[rng.below(members.size())];
    auto pts = bn::support_points(q);
    const Rat& x = pts[rng.below(pts.size())];
    w[rat_str(x)] += Rat(rng.range(-6, 6), 1 + int(rng.below(4)));
  }
  return SignedMeasure(std::move(w));
}

ProbabilityMeasure random_alt_prob(tsup::Rng& rng, const bn::DisjointAlternative& alt) {
  auto members = bn::sample_members(alt, 6);
  std::map<std::string, Rat> w;
  Rat total(0);
  while (total == 0) {
    w.clear();
    for (const auto& q : members) {
      for (const auto& x : bn::support_points(q)) {
        if (rng.coin()) continue;
        Rat v(rng.range(1, 8));
        w[rat_str(x)] += v;
        total += v;
      }
    }
  }
  for (auto& [id, v] : w) v /= total;
  return ProbabilityMeasure(std::move(w));
}

}  // namespace

TEST_CASE("extension over the alternative evaluates by support") {
  auto alt = bn::build_alternative(sep);

  auto mu = pts_measure({{Rat(4, 5), Rat(3, 10)}, {Rat(6, 5), Rat(7, 10)}});
  auto em = extend_measure(mu, alt);
  REQUIRE(em.active.size() == 1);
  CHECK(em.active[0].key == "d=4/5");
  CHECK(em.active[0].points == std::vector<Rat>{Rat(4, 5), Rat(6, 5)});

  // a support union whose parameter domain holds d = 4/5 picks up both atoms
  auto su = st::expr_su(st::PlainSet::closed(Rat(3, 4), Rat(17, 20)), alt.f);
  CHECK(em.eval(su) == 1);
  CHECK(em.eval(st::expr_plain(st::PlainSet())) == 0);
  CHECK(em.eval(st::expr_plain(st::PlainSet::reals())) == 1);

  // plain sets agree with the base measure (the restriction direction)
  CHECK(em.eval(st::expr_plain(st::PlainSet::closed(Rat(3, 4), Rat(17, 20)))) == Rat(3, 10));
  CHECK(em.eval(st::expr_plain(st::PlainSet::closed(Rat(1), Rat(2)))) == Rat(7, 10));
  CHECK(em.eval(st::expr_complement(st::expr_plain(st::PlainSet::single(Rat(4, 5))))) ==
        Rat(7, 10));

  // side selectors split the same parameter window
  CHECK(em.eval(st::expr_su(st::PlainSet::closed(Rat(3, 4), Rat(17, 20)), alt.f,
                            st::SuSide::lower)) == Rat(3, 10));
  CHECK(em.eval(st::expr_su(st::PlainSet::closed(Rat(3, 4), Rat(17, 20)), alt.f,
                            st::SuSide::upper)) == Rat(7, 10));

  // the boundary pair is one support
  auto mu3 = pts_measure({{Rat(9, 10), Rat(1)}, {Rat(11, 10), Rat(-1)}});
  auto em3 = extend_measure(mu3, alt);
  REQUIRE(em3.active.size() == 1);
  CHECK(em3.active[0].key == "r2");
  CHECK(em3.eval(st::expr_plain(st::PlainSet::points({Rat(9, 10), Rat(11, 10)}))) == 0);
  CHECK(em3.eval_atoms({rat_str(Rat(9, 10))}) == 1);

  CHECK_THROWS_WITH_AS(extend_measure(pts_measure({{Rat(1), Rat(1)}}), alt),
                       doctest::Contains("atom '1' is not covered"), ValidationError);
  CHECK_THROWS_WITH_AS(extend_measure(pts_measure({{Rat(2), Rat(1)}}), alt),
                       doctest::Contains("not covered"), ValidationError);
  CHECK_THROWS_WITH_AS(extend_measure(SignedMeasure({{"zz", Rat(1)}}), alt),
                       doctest::Contains("not a point"), ValidationError);
}

TEST_CASE("extension over a finite localization") {
  auto q1 = ProbabilityMeasure::dirac("a");
  auto q2 = ProbabilityMeasure::dirac("b");
  Localization loc = make_localization({q1, q2}, {{"a", "x"}, {"b"}});

  auto mu = SignedMeasure({{"a", Rat(1, 2)}, {"b", Rat(-1, 3)}});
  auto em = extend_measure(mu, loc);
  REQUIRE(em.active.size() == 2);
  CHECK(em.active[0].key == "Q0");
  CHECK(em.active[1].key == "Q1");
  CHECK(em.eval_atoms({"a", "b"}) == Rat(1, 6));
  CHECK(em.eval_atoms({"x"}) == 0);
  CHECK(extended_tv(em) == Rat(5, 6));
  CHECK(restriction_isometry_check(mu, loc));

  CHECK_THROWS_WITH_AS(extend_measure(SignedMeasure({{"c", Rat(1)}}), loc),
                       doctest::Contains("atom 'c' is not covered"), ValidationError);

  Localization bad;
  bad.measures = {q1, q2};
  bad.supports = {{"a", "b"}, {"b"}};
  CHECK_THROWS_WITH_AS(extend_measure(mu, bad), doctest::Contains("strictly disjoint"),
                       ValidationError);

  // numeric atom ids make set evaluation available on the finite path too
  auto q3 = ProbabilityMeasure::dirac(rat_str(Rat(1, 2)));
  Localization nloc = make_localization({q3}, {{rat_str(Rat(1, 2))}});
  auto nem = extend_measure(SignedMeasure({{rat_str(Rat(1, 2)), Rat(2)}}), nloc);
  CHECK(nem.eval(st::expr_plain(st::PlainSet::closed(Rat(0), Rat(1)))) == 2);
  CHECK_THROWS_WITH_AS(em.eval(st::expr_plain(st::PlainSet::reals())),
                       doctest::Contains("non-numeric"), ValidationError);
}

TEST_CASE("total variation sums over supports") {
  auto alt_o = bn::build_alternative(ovl);
  // 0.8 and 1.2 land in different supports here: f(4/5) = 37/30
  auto split = pts_measure({{Rat(4, 5), Rat(1)}, {Rat(6, 5), Rat(-1)}});
  auto em = extend_measure(split, alt_o);
  REQUIRE(em.active.size() == 2);
  CHECK(extended_tv(em) == 2);

  auto alt_s = bn::build_alternative(sep);
  auto nonneg = pts_measure({{Rat(4, 5), Rat(3, 10)}, {Rat(6, 5), Rat(7, 10)}});
  CHECK(extended_tv(extend_measure(nonneg, alt_s)) == 1);

  // mixed sign inside one support: per-support Hahn–Jordan masses add
  auto mixed = pts_measure({{Rat(4, 5), Rat(3, 10)}, {Rat(6, 5), Rat(-7, 10)}});
  auto emx = extend_measure(mixed, alt_s);
  REQUIRE(emx.active.size() == 1);
  CHECK(extended_tv(emx) == 1);

  CHECK(extended_tv(extend_measure(SignedMeasure(), alt_s)) == 0);

  tsup::Rng rng(91);
  for (int it = 0; it < 60; ++it) {
    const auto& alt = it % 2 ? alt_o : alt_s;
    auto mu = random_alt_measure(rng, alt, 1 + rng.below(7));
    CHECK(extended_tv(extend_measure(mu, alt)) == tv_norm(mu));
  }
}

TEST_CASE("absolute continuity carries to the extension") {
  auto alt = bn::build_alternative(sep);

  auto p = ProbabilityMeasure(
      std::map<std::string, Rat>{{rat_str(Rat(4, 5)), Rat(1, 2)}, {rat_str(Rat(6, 5)), Rat(1, 2)}});
  auto mu = pts_measure({{Rat(4, 5), Rat(1, 4)}, {Rat(6, 5), Rat(-1, 4)}});
  CHECK(check_ac_preservation(mu, p, alt));
  auto rep = ac_preservation_report(mu, p, alt);
  CHECK(rep.ac);
  CHECK(rep.probes_consistent);
  CHECK(!rep.witness);
  CHECK(rep.probes.size() > 4);

  // mu charges a point P never sees: a witness probe must surface
  auto pnull = ProbabilityMeasure::dirac(rat_str(Rat(6, 5)));
  auto bad = pts_measure({{Rat(4, 5), Rat(1)}});
  CHECK(!check_ac_preservation(bad, pnull, alt));
  auto rep2 = ac_preservation_report(bad, pnull, alt);
  CHECK(!rep2.ac);
  REQUIRE(rep2.witness.has_value());
  const auto& w = rep2.probes[*rep2.witness];
  CHECK(w.p_mass == 0);
  CHECK(w.mu_abs_mass > 0);

  CHECK(check_ac_preservation(SignedMeasure(), pnull, alt));

  tsup::Rng rng(92);
  for (int it = 0; it < 60; ++it) {
    auto a = bn::build_alternative(it % 2 ? ovl : sep);
    auto m = random_alt_measure(rng, a, 1 + rng.below(6));
    auto pr = random_alt_prob(rng, a);
    // the internal cross-check would throw on any probe/base disagreement
    CHECK(check_ac_preservation(m, pr, a) == is_abs_continuous(m, pr));
  }

  // finite-localization route with labeled atoms
  auto q1 = ProbabilityMeasure::dirac("a");
  auto q2 = ProbabilityMeasure::dirac("b");
  Localization loc = make_localization({q1, q2}, {{"a"}, {"b"}});
  auto pl = ProbabilityMeasure(std::map<std::string, Rat>{{"a", Rat(1, 2)}, {"b", Rat(1, 2)}});
  CHECK(check_ac_preservation(SignedMeasure({{"a", Rat(1, 3)}}), pl, loc));
  CHECK(!check_ac_preservation(SignedMeasure({{"b", Rat(1, 3)}}),
                               ProbabilityMeasure::dirac("a"), loc));
  auto repl = ac_preservation_report(SignedMeasure({{"b", Rat(1, 3)}}),
                                     ProbabilityMeasure::dirac("a"), loc);
  REQUIRE(repl.witness.has_value());
  CHECK(repl.probes[*repl.witness].probe == "{b}");
}

TEST_CASE("essential supremum from a parameter rule") {
  auto alt = bn::build_alternative(sep);

  SUBCASE("both points everywhere is the full support union") {
    ParamRule rule{st::PlainSet(), st::PlainSet(), st::PlainSet::reals()};
    auto res = extended_ess_sup(alt, rule);
    CHECK(st::set_expr_str(*res.set) == "SU(I[7/10,9/10])");
    CHECK(res.a_ok);
    CHECK(res.b_ok);
    CHECK(!res.exhaustive);
    for (int k = 20; k <= 60; ++k) {
      Rat x(k, 40);
      bool want = (x >= Rat(7, 10) && x <= Rat(9, 10)) || (x >= Rat(11, 10) && x <= Rat(13, 10));
      CHECK(st::member(x, *res.set) == want);
    }
  }

  SUBCASE("empty rule gives the empty set") {
    ParamRule rule;
    auto res = extended_ess_sup(alt, rule);
    CHECK(st::set_expr_str(*res.set) == "P{}");
    CHECK(res.a_ok);
    CHECK(res.b_ok);
    for (int k = 20; k <= 60; ++k) CHECK(!st::member(Rat(k, 40), *res.set));
  }

  SUBCASE("lower points over a window") {
    ParamRule rule{st::PlainSet::interval(Rat(7, 10), true, Rat(4, 5), false), st::PlainSet(),
                   st::PlainSet()};
    auto res = extended_ess_sup(alt, rule);
    CHECK(st::member(Rat(3, 4), *res.set));
    CHECK(!st::member((*alt.f)(Rat(3, 4)), *res.set));
    CHECK(st::member(Rat(7, 10), *res.set));
    CHECK(!st::member(Rat(4, 5), *res.set));
    CHECK(!st::member(Rat(17, 20), *res.set));
    CHECK(res.a_ok);
    CHECK(res.b_ok);
  }

  SUBCASE("mixed sides and the boundary member") {
    ParamRule rule{st::PlainSet::interval(Rat(7, 10), true, Rat(3, 4), false),
                   st::PlainSet::interval(Rat(3, 4), true, Rat(4, 5), false),
                   st::PlainSet::interval(Rat(4, 5), true, Rat(9, 10), true)};
    auto res = extended_ess_sup(alt, rule);
    CHECK(st::member(Rat(29, 40), *res.set));          // d side of d_only
    CHECK(!st::member((*alt.f)(Rat(29, 40)), *res.set));
    CHECK(!st::member(Rat(31, 40), *res.set));         // f_only drops d
    CHECK(st::member((*alt.f)(Rat(31, 40)), *res.set));
    CHECK(st::member(Rat(33, 40), *res.set));          // both_sides keeps both
    CHECK(st::member((*alt.f)(Rat(33, 40)), *res.set));
    CHECK(st::member(Rat(9, 10), *res.set));           // boundary pair, d side
    CHECK(st::member(Rat(11, 10), *res.set));          // boundary pair, image side
    CHECK(res.a_ok);
    CHECK(res.b_ok);
  }

  SUBCASE("point masses join through the d side") {
    auto alt_o = bn::build_alternative(ovl);
    ParamRule rule{st::PlainSet::closed(Rat(3, 4), Rat(21, 20)), st::PlainSet(), st::PlainSet()};
    auto res = extended_ess_sup(alt_o, rule, 32);
    CHECK(st::member(Rat(4, 5), *res.set));
    CHECK(!st::member((*alt_o.f)(Rat(4, 5)), *res.set));
    CHECK(st::member(Rat(1), *res.set));
    CHECK(st::member(Rat(21, 20), *res.set));
    CHECK(!st::member(Rat(11, 10), *res.set));
    CHECK(res.a_ok);
    CHECK(res.b_ok);
    CHECK(!res.probes.empty());
  }

  SUBCASE("overlapping rule domains are rejected") {
    ParamRule rule{st::PlainSet::closed(Rat(7, 10), Rat(4, 5)), st::PlainSet(),
                   st::PlainSet::closed(Rat(3, 4), Rat(9, 10))};
    CHECK_THROWS_WITH_AS(extended_ess_sup(alt, rule), doctest::Contains("overlap"),
                         ValidationError);
  }
}

TEST_CASE("restriction is an isometry") {
  auto alt_s = bn::build_alternative(sep);
  auto alt_o = bn::build_alternative(ovl);

  CHECK(restriction_isometry_check(SignedMeasure(), alt_s));

  // six support points across three members, fixed weights
  auto mu = pts_measure({{Rat(7, 10), Rat(1, 2)},
                         {Rat(13, 10), Rat(-1, 3)},
                         {Rat(3, 4), Rat(1, 4)},
                         {(*alt_s.f)(Rat(3, 4)), Rat(-1, 5)},
                         {Rat(9, 10), Rat(1, 6)},
                         {Rat(11, 10), Rat(-1, 7)}});
  auto em = extend_measure(mu, alt_s);
  CHECK(em.active.size() == 3);
  CHECK(extended_tv(em) == Rat(223, 140));
  CHECK(restriction_isometry_check(mu, alt_s));

  tsup::Rng rng(93);
  for (int it = 0; it < 100; ++it) {
    const auto& alt = it % 2 ? alt_o : alt_s;
    CHECK(restriction_isometry_check(random_alt_measure(rng, alt, 1 + rng.below(8)), alt));
  }

  // finite localizations, labeled atoms
  for (int it = 0; it < 40; ++it) {
    auto pool = tsup::atom_pool(4);
    Localization loc = make_localization(
        {ProbabilityMeasure::dirac(pool[0]), ProbabilityMeasure::dirac(pool[2])},
        {{pool[0], pool[1]}, {pool[2], pool[3]}});
    CHECK(restriction_isometry_check(tsup::random_signed(rng, pool), loc));
  }
}

TEST_CASE("extension is additive and linear") {
  tsup::Rng rng(94);
  for (int it = 0; it < 60; ++it) {
    auto alt = bn::build_alternative(it % 2 ? ovl : sep);
    auto mu = random_alt_measure(rng, alt, 1 + rng.below(6));
    auto nu = random_alt_measure(rng, alt, 1 + rng.below(6));
    auto em = extend_measure(mu, alt);
    auto en = extend_measure(nu, alt);
    auto combo = mu.scaled(3) - nu.scaled(2);
    auto ec = extend_measure(combo, alt);

    st::PlainSet leg = st::PlainSet::interval(alt.params.d0, true, alt.m0, false);
    std::vector<st::ExprPtr> probes{
        st::expr_plain(st::PlainSet::closed(Rat(0), Rat(1))),
        st::expr_plain(st::PlainSet::closed(Rat(1), Rat(2))),
        st::expr_su(leg, alt.f),
        st::expr_su(leg, alt.f, st::SuSide::lower),
        st::expr_su(leg, alt.f, st::SuSide::upper),
        st::expr_complement(st::expr_plain(st::PlainSet::closed(Rat(1), Rat(2)))),
    };
    for (const auto& e : probes)
      CHECK(ec.eval(e) == em.eval(e) * 3 - en.eval(e) * 2);

    // disjoint lower/upper halves of the same parameter window add up
    auto lower = st::expr_su(leg, alt.f, st::SuSide::lower);
    auto upper = st::expr_su(leg, alt.f, st::SuSide::upper);
    CHECK(em.eval(st::expr_union(lower, upper)) == em.eval(lower) + em.eval(upper));

    // per-support plain splits add up to the whole
    Rat whole = em.eval(st::expr_plain(st::PlainSet::reals()));
    Rat split(0);
    for (const auto& as : em.active)
      split += em.eval(st::expr_plain(st::PlainSet::points(as.points)));
    CHECK(split == whole);

    // |extension| and extension of |mu| agree on every probe
    ExtendedMeasure abs_route{em.base.abs(), em.active};
    auto abs_ext = extend_measure(mu.abs(), alt);
    for (const auto& e : probes) CHECK(abs_route.eval(e) == abs_ext.eval(e));
    CHECK(abs_ext.eval(st::expr_plain(st::PlainSet::reals())) == extended_tv(em));
  }
}

TEST_CASE("finite universes make the extension field everything") {
  // trivial minimality instance: with finitely many atoms the generated
  // field is the whole power set, so the extension is the measure itself
  auto q1 = ProbabilityMeasure::dirac("a");
  auto q2 = ProbabilityMeasure::dirac("c");
  Localization loc = make_localization({q1, q2}, {{"a", "b"}, {"c", "d"}});
  tsup::Rng rng(95);
  auto pool = std::vector<std::string>{"a", "b", "c", "d"};
  for (int it = 0; it < 20; ++it) {
    auto mu = tsup::random_signed(rng, pool);
    auto em = extend_measure(mu, loc);
    for (int mask = 0; mask < 16; ++mask) {
      AtomSet a;
      for (int b = 0; b < 4; ++b)
        if (mask & (1 << b)) a.insert(pool[b]);
      CHECK(em.eval_atoms(a) == mu.mass(a));
    }
  }
}
