#include <benchmark/benchmark.h>

#include <map>
#include <string>
#include <vector>

#include "qsure/binomial.hpp"
#include "qsure/family.hpp"
#include "qsure/hahnext.hpp"
#include "qsure/measure.hpp"
#include "qsure/model.hpp"
#include "qsure/testing.hpp"

using namespace qsure;
namespace bn = qsure::binom;

namespace {

// splitmix64; deterministic inputs keep runs comparable
struct Rng {
  std::uint64_t s;
  std::uint64_t next() {
    s += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = s;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  std::uint64_t below(std::uint64_t n) { return next() % n; }
};

std::vector<std::string> pool(int n) {
  std::vector<std::string> out;
  for (int i = 0; i < n; ++i) out.push_back("a" + std::to_string(i));
  return out;
}

ProbabilityMeasure rand_prob(Rng& rng, const std::vector<std::string>& atoms) {
  std::map<std::string, Rat> w;
  Rat total(0);
  for (const auto& a : atoms)
    if (rng.below(2)) {
      Rat v(1 + long(rng.below(9)));
      w[a] = v;
      total += v;
    }
  if (w.empty()) {
    w[atoms[0]] = 1;
    total = 1;
  }
  for (auto& [a, v] : w) v /= total;
  return ProbabilityMeasure(w);
}

testing::TestProblem make_problem(int atoms, int members) {
  Rng rng{std::uint64_t(atoms * 1000 + members)};
  auto atomv = pool(atoms);
  auto fam = [&] {
    std::vector<ProbabilityMeasure> ms;
    for (int i = 0; i < members; ++i) ms.push_back(rand_prob(rng, atomv));
    return MeasureFamily(std::move(ms));
  };
  return testing::TestProblem{fam(), fam(), std::nullopt};
}

const bn::ModelParams kSep{Rat(11, 10), Rat(13, 10), Rat(7, 10), Rat(9, 10),
                           Rat(2, 5), Rat(3, 5)};

}  // namespace

static void BM_HullDistance(benchmark::State& state) {
  auto prob = make_problem(int(state.range(0)), int(state.range(1)));
  for (auto _ : state) {
    auto hull = testing::min_tv_between_hulls(prob);
    benchmark::DoNotOptimize(hull.d);
  }
}
BENCHMARK(BM_HullDistance)
    ->Args({4, 2})
    ->Args({6, 4})
    ->Args({10, 6})
    ->Args({16, 8});

static void BM_MinRisk(benchmark::State& state) {
  auto prob = make_problem(int(state.range(0)), 4);
  for (auto _ : state) {
    auto sol = testing::min_risk(prob);
    benchmark::DoNotOptimize(sol.min_risk);
  }
}
BENCHMARK(BM_MinRisk)->Arg(4)->Arg(8)->Arg(12);

static void BM_Glue(benchmark::State& state) {
  int n = int(state.range(0));
  Rng rng{std::uint64_t(n)};
  auto atomv = pool(n);
  std::vector<ProbabilityMeasure> ms;
  for (int i = 0; i < 4; ++i) ms.push_back(rand_prob(rng, atomv));
  MeasureFamily fam(std::move(ms));
  auto loc = dirac_localization(fam);
  std::vector<BoundedFunction> pieces(loc.size());
  for (size_t i = 0; i < loc.size(); ++i)
    pieces[i].values[*loc.supports[i].begin()] =
        Rat(1 + long(rng.below(9)), 1 + long(rng.below(5)));
  for (auto _ : state) {
    auto h = glue(fam, loc, pieces);
    benchmark::DoNotOptimize(h.values.size());
  }
}
BENCHMARK(BM_Glue)->Arg(6)->Arg(12)->Arg(24);

static void BM_Cover(benchmark::State& state) {
  auto alt = bn::build_alternative(kSep);
  auto members = bn::grid_members(alt, state.range(0));
  size_t i = 0;
  for (auto _ : state) {
    auto c = bn::cover(members[i++ % members.size()], alt);
    benchmark::DoNotOptimize(c.ac_ok);
  }
}
BENCHMARK(BM_Cover)->Arg(32)->Arg(128)->Arg(512);

static void BM_ExtendedTv(benchmark::State& state) {
  auto alt = bn::build_alternative(kSep);
  Rng rng{99};
  std::map<std::string, Rat> w;
  for (const auto& r : bn::sample_members(alt, int(state.range(0))))
    for (const auto& x : bn::support_points(r))
      w[rat_str(x)] = Rat(long(rng.below(19)) - 9, 1 + long(rng.below(4)));
  SignedMeasure mu{w};
  for (auto _ : state) {
    auto em = hx::extend_measure(mu, alt);
    benchmark::DoNotOptimize(hx::extended_tv(em));
  }
}
BENCHMARK(BM_ExtendedTv)->Arg(8)->Arg(32)->Arg(128);

static void BM_ParseEmit(benchmark::State& state) {
  std::string text = "atoms { ";
  int n = int(state.range(0));
  for (int i = 0; i < n; ++i) text += (i ? ", a" : "a") + std::to_string(i);
  text += " }\n";
  for (int i = 0; i < n; ++i) {
    text += "prob P" + std::to_string(i) + " { a" + std::to_string(i) +
            ": 1 }\n";
  }
  for (auto _ : state) {
    auto res = model::parse_model(text);
    benchmark::DoNotOptimize(model::emit_model(*res.doc).size());
  }
}
BENCHMARK(BM_ParseEmit)->Arg(8)->Arg(64)->Arg(256);

BENCHMARK_MAIN();
