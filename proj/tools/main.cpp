// qsure: exact command-line front end for the core library. Loads a model
// document, runs one computation, prints a report. Exit codes: 0 success,
// 1 failed check (a verdict came back negative), 2 input error.

#include <cstdint>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qsure/binomial.hpp"
#include "qsure/family.hpp"
#include "qsure/hahnext.hpp"
#include "qsure/measure.hpp"
#include "qsure/model.hpp"
#include "qsure/realset.hpp"
#include "qsure/testing.hpp"

using namespace qsure;

namespace {

std::string bstr(bool b) { return b ? "true" : "false"; }
std::string verdict(bool b) { return b ? "verified" : "failed"; }

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  out += '"';
  return out;
}

std::string table_str(const std::map<std::string, Rat>& w) {
  if (w.empty()) return "{}";
  std::string out = "{ ";
  bool first = true;
  for (const auto& [a, v] : w) {
    if (!first) out += ", ";
    first = false;
    out += a + ": " + rat_str(v);
  }
  return out + " }";
}

std::string rat_list(const std::vector<Rat>& v) {
  std::string out = "[";
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += rat_str(v[i]);
  }
  return out + "]";
}

std::string member_str(const binom::BinMeasure& r) {
  return "u=" + rat_str(r.u) + " d=" + rat_str(r.d) + " pi=" + rat_str(r.pi);
}

// Flat key/value report. Machine form mirrors the model grammar; human form
// is a two-column table. Neither carries timestamps unless meta is attached.
struct Report {
  std::string command;
  std::vector<std::pair<std::string, std::string>> fields;
  std::vector<std::pair<std::string, std::string>> meta_fields;

  explicit Report(std::string cmd) : command(std::move(cmd)) {
    fields.emplace_back("format", "1");
  }
  void add(const std::string& k, const std::string& v) {
    fields.emplace_back(k, v);
  }
  // keeps string literals away from the bool overload
  void add(const std::string& k, const char* v) { fields.emplace_back(k, v); }
  void add(const std::string& k, const Rat& v) { add(k, rat_str(v)); }
  void add(const std::string& k, bool v) { add(k, bstr(v)); }
  void add(const std::string& k, size_t v) { add(k, std::to_string(v)); }

  std::string machine() const {
    std::string out = "report " + command + " {\n";
    for (size_t i = 0; i < fields.size(); ++i) {
      out += "  " + fields[i].first + " = " + fields[i].second;
      out += i + 1 < fields.size() ? ",\n" : "\n";
    }
    out += "}\n";
    if (!meta_fields.empty()) {
      out += "meta {\n";
      for (size_t i = 0; i < meta_fields.size(); ++i) {
        out += "  " + meta_fields[i].first + " = " + meta_fields[i].second;
        out += i + 1 < meta_fields.size() ? ",\n" : "\n";
      }
      out += "}\n";
    }
    return out;
  }

  std::string human() const {
    size_t width = 0;
    for (const auto& [k, v] : fields) width = std::max(width, k.size());
    for (const auto& [k, v] : meta_fields) width = std::max(width, k.size());
    std::string out = command + "\n";
    for (const auto& [k, v] : fields)
      out += "  " + k + std::string(width - k.size() + 2, ' ') + v + "\n";
    for (const auto& [k, v] : meta_fields)
      out += "  " + k + std::string(width - k.size() + 2, ' ') + v + "\n";
    return out;
  }
};

// Deterministic generator for the cover sweep (splitmix64).
struct Sweep {
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

struct Options {
  std::string model_path;
  std::string format = "human";
  bool meta = false;
  bool strict = false;
  std::uint64_t seed = 1;
  long grid_den = 0;
  int probe_depth = 0;
  long count = 20;
  std::string family, localization, measure, binomial, set, problem, wrt;
  std::string pieces;  // comma-separated measure names
  std::string u, d, pi, epsilon;
};

Rat parse_cli_rat(const std::string& text, const std::string& flag) {
  auto r = parse_rat(text);
  if (!r) throw ValidationError("flag " + flag + ": malformed rational '" + text + "'");
  return *r;
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else if (!std::isspace(static_cast<unsigned char>(c))) {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

// Section lookups that turn absent names into input errors.
const model::FamilyDef& need_family(const model::ModelDocument& doc, const std::string& n) {
  if (const auto* f = model::find_family(doc, n)) return *f;
  throw ValidationError("no family named '" + n + "'");
}
const model::LocalizationDef& need_localization(const model::ModelDocument& doc,
                                                const std::string& n) {
  if (const auto* l = model::find_localization(doc, n)) return *l;
  throw ValidationError("no localization named '" + n + "'");
}
const model::NamedMeasure& need_measure(const model::ModelDocument& doc, const std::string& n) {
  if (const auto* m = model::find_measure(doc, n)) return *m;
  throw ValidationError("no measure named '" + n + "'");
}
const model::BinomialDef& need_binomial(const model::ModelDocument& doc, const std::string& n) {
  if (const auto* b = model::find_binomial(doc, n)) return *b;
  throw ValidationError("no binomial named '" + n + "'");
}
const model::SetDef& need_set(const model::ModelDocument& doc, const std::string& n) {
  if (const auto* s = model::find_set(doc, n)) return *s;
  throw ValidationError("no set named '" + n + "'");
}
const model::TestProblemDef& need_problem(const model::ModelDocument& doc, const std::string& n) {
  if (const auto* t = model::find_test_problem(doc, n)) return *t;
  throw ValidationError("no test problem named '" + n + "'");
}

MeasureFamily family_from_def(const model::ModelDocument& doc, const model::FamilyDef& def) {
  std::vector<ProbabilityMeasure> ms;
  for (const auto& n : def.member_names) ms.push_back(model::find_prob(doc, n)->prob);
  return MeasureFamily(std::move(ms), def.extras);
}

Localization localization_from_def(const model::ModelDocument& doc,
                                   const model::LocalizationDef& def) {
  std::vector<ProbabilityMeasure> ms;
  std::vector<AtomSet> sups;
  for (const auto& [n, sup] : def.members) {
    ms.push_back(model::find_prob(doc, n)->prob);
    sups.push_back(sup);
  }
  return make_localization(std::move(ms), std::move(sups));
}

sets::SetParseResult reparse_set(const model::SetDef& def,
                                 std::shared_ptr<const sets::PiecewiseLinearBijection> f) {
  auto res = sets::parse_set_expr(def.text, std::move(f));
  if (!res.ok())
    throw ValidationError("set '" + def.name + "': " + res.error);
  return res;
}

binom::BinMeasure member_from_flags(const Options& o, std::optional<Rat> default_pi) {
  binom::BinMeasure r;
  r.u = parse_cli_rat(o.u, "--u");
  r.d = parse_cli_rat(o.d, "--d");
  if (!o.pi.empty())
    r.pi = parse_cli_rat(o.pi, "--pi");
  else if (default_pi)
    r.pi = *default_pi;
  else
    throw ValidationError("this command needs --pi along with --u and --d");
  return r;
}

std::string component_str(binom::Component c) {
  switch (c) {
    case binom::Component::r0: return "r0";
    case binom::Component::r1: return "r1";
    case binom::Component::r2: return "r2";
    default: return "outside";
  }
}

// ---- command bodies; each returns the exit code ----

int cmd_verify_localization(const model::ModelDocument& doc, const Options& o, Report& rep) {
  auto fam = family_from_def(doc, need_family(doc, o.family));
  auto loc = localization_from_def(doc, need_localization(doc, o.localization));
  auto r = verify_localization(fam, loc, o.strict);
  rep.add("family", o.family);
  rep.add("localization", o.localization);
  rep.add("strict", o.strict);
  rep.add("delta", verdict(r.delta_ok));
  rep.add("disjoint", verdict(r.disjoint_ok));
  rep.add("q_dominated", verdict(r.q_lll_p));
  rep.add("p_dominated", verdict(r.p_lll_sconvq));
  rep.add("overall", verdict(r.overall));
  if (!r.notes.empty()) {
    std::string joined;
    for (const auto& n : r.notes) {
      if (!joined.empty()) joined += "; ";
      joined += n;
    }
    rep.add("notes", quote(joined));
  }
  bool ok = r.overall;
  if (o.probe_depth > 0) {
    ProbeOptions po;
    po.depth = o.probe_depth;
    auto ess = essential_supremum(fam, loc, loc.supports, po);
    std::string sup = "{";
    bool first = true;
    for (const auto& a : ess.sup) {
      sup += first ? " " : ", ";
      first = false;
      sup += a;
    }
    sup += ess.sup.empty() ? "}" : " }";
    rep.add("ess_sup", sup);
    rep.add("ess_a", verdict(ess.cert.a_ok));
    rep.add("ess_b", verdict(ess.cert.b_ok));
    rep.add("ess_probes", ess.cert.probes.size());
    rep.add("ess_exhaustive", ess.cert.exhaustive);
    ok = ok && ess.cert.a_ok && ess.cert.b_ok;
  }
  return ok ? 0 : 1;
}

int cmd_glue(const model::ModelDocument& doc, const Options& o, Report& rep) {
  auto fam = family_from_def(doc, need_family(doc, o.family));
  auto loc = localization_from_def(doc, need_localization(doc, o.localization));
  auto names = split_commas(o.pieces);
  if (names.size() != loc.size())
    throw ValidationError("--pieces needs exactly " + std::to_string(loc.size()) +
                          " measure names, got " + std::to_string(names.size()));
  std::vector<BoundedFunction> pieces;
  for (const auto& n : names)
    pieces.push_back(BoundedFunction{need_measure(doc, n).measure.weights(), Rat(0)});
  auto h = glue(fam, loc, pieces);
  rep.add("family", o.family);
  rep.add("localization", o.localization);
  std::map<std::string, Rat> values;
  for (const auto& a : fam.universe()) values[a] = h.at(a);
  rep.add("values", table_str(values));
  rep.add("default", h.default_value);
  rep.add("sup_norm", qs_sup_norm(h, fam));
  const auto& fdef = need_family(doc, o.family);
  for (size_t i = 0; i < fam.members().size(); ++i)
    rep.add("integral_" + fdef.member_names[i],
            eval_functional(h, fam.members()[i].measure()));
  return 0;
}

int cmd_hahn_extend(const model::ModelDocument& doc, const Options& o, Report& rep) {
  const auto& mu = need_measure(doc, o.measure).measure;
  rep.add("measure", o.measure);
  hx::ExtendedMeasure em;
  std::shared_ptr<const sets::PiecewiseLinearBijection> f;
  if (!o.binomial.empty()) {
    auto alt = binom::build_alternative(need_binomial(doc, o.binomial).params);
    f = alt.f;
    em = hx::extend_measure(mu, alt);
    rep.add("over", "binomial " + o.binomial);
  } else if (!o.localization.empty()) {
    auto loc = localization_from_def(doc, need_localization(doc, o.localization));
    em = hx::extend_measure(mu, loc);
    rep.add("over", "localization " + o.localization);
  } else {
    throw ValidationError("hahn-extend needs --binomial or --localization");
  }
  std::string keys = "[";
  for (size_t i = 0; i < em.active.size(); ++i) {
    if (i) keys += ", ";
    keys += quote(em.active[i].key);
  }
  keys += "]";
  rep.add("support_count", em.active.size());
  rep.add("supports", keys);
  rep.add("base_tv", tv_norm(mu));
  rep.add("extended_tv", hx::extended_tv(em));
  bool iso = !o.binomial.empty()
                 ? hx::restriction_isometry_check(
                       mu, binom::build_alternative(need_binomial(doc, o.binomial).params))
                 : hx::restriction_isometry_check(
                       mu, localization_from_def(doc, need_localization(doc, o.localization)));
  rep.add("isometry", verdict(iso));
  if (!o.set.empty()) {
    const auto& sdef = need_set(doc, o.set);
    auto parsed = reparse_set(sdef, f);
    rep.add("set", o.set);
    rep.add("mass", em.eval(*parsed.expr));
  }
  return iso ? 0 : 1;
}

int cmd_binomial_validate(const model::ModelDocument& doc, const Options& o, Report& rep) {
  const auto& b = need_binomial(doc, o.binomial);
  auto r = binom::validate_params(b.params);
  size_t passed = 0;
  for (const auto& c : r.checks)
    if (c.pass) ++passed;
  rep.add("binomial", o.binomial);
  rep.add("checks_total", r.checks.size());
  rep.add("checks_passed", passed);
  rep.add("base", verdict(r.base_ok));
  rep.add("strengthened", verdict(r.strengthened_ok));
  rep.add("overall", verdict(r.overall));
  size_t i = 0;
  for (const auto& c : r.checks) {
    if (!c.pass) rep.add("failed_" + std::to_string(i++), quote(c.name + ": " + c.detail));
  }
  if (passed == r.checks.size()) rep.add("summary", quote("all checks pass"));
  return r.overall ? 0 : 1;
}

int cmd_binomial_alt(const model::ModelDocument& doc, const Options& o, Report& rep) {
  const auto& b = need_binomial(doc, o.binomial);
  auto alt = binom::build_alternative(b.params);
  rep.add("binomial", o.binomial);
  rep.add("regime", alt.overlapping ? std::string("overlapping") : std::string("separated"));
  rep.add("m0", alt.m0);
  rep.add("M0", alt.M0);
  rep.add("pi_tilde", alt.pi_tilde);
  rep.add("f_domain", "I[" + rat_str(b.params.d0) + "," + rat_str(alt.m0) + "]");
  rep.add("f_range", "I[" + rat_str(alt.M0) + "," + rat_str(b.params.U0) + "]");
  rep.add("r0_domain", "I[" + rat_str(b.params.d0) + "," + rat_str(alt.m0) + ")");
  if (alt.overlapping)
    rep.add("r1_interval", "I[" + rat_str(b.params.u0) + "," + rat_str(b.params.D0) + "]");
  else
    rep.add("r2_pair", "P{" + rat_str(alt.m0) + "," + rat_str(alt.M0) + "}");
  if (o.grid_den > 0) {
    auto ms = binom::grid_members(alt, o.grid_den);
    rep.add("grid_denominator", std::to_string(o.grid_den));
    rep.add("members", ms.size());
    for (size_t i = 0; i < ms.size(); ++i)
      rep.add("member_" + std::to_string(i), quote(member_str(ms[i])));
  }
  return 0;
}

int cmd_binomial_cover(const model::ModelDocument& doc, const Options& o, Report& rep) {
  const auto& b = need_binomial(doc, o.binomial);
  auto alt = binom::build_alternative(b.params);
  rep.add("binomial", o.binomial);
  if (!o.u.empty() || !o.d.empty()) {
    if (o.u.empty() || o.d.empty())
      throw ValidationError("a single-member cover needs both --u and --d");
    auto q = member_from_flags(o, alt.pi_tilde);
    auto c = binom::cover(q, alt);
    rep.add("q", quote(member_str(q)));
    rep.add("component", component_str(binom::classify_member(q, alt)));
    rep.add("q1", quote(member_str(c.q1)));
    rep.add("q2", quote(member_str(c.q2)));
    rep.add("identity", c.identity);
    rep.add("support", verdict(c.support_ok));
    rep.add("dominated", verdict(c.ac_ok));
    return c.support_ok && c.ac_ok ? 0 : 1;
  }
  // seeded sweep over the parameter box
  long den = o.grid_den > 0 ? o.grid_den : 64;
  Sweep rng{o.seed};
  const auto& p = b.params;
  Rat lo = std::max(p.u0, p.d0), hi = std::min(p.U0, p.D0);
  bool overlap_nonempty = lo <= hi;
  size_t unsound = 0;
  std::vector<std::string> bad;
  for (long i = 0; i < o.count; ++i) {
    binom::BinMeasure q;
    q.pi = p.pi0 + (p.Pi0 - p.pi0) * Rat(long(rng.below(den + 1)), den);
    if (overlap_nonempty && rng.below(4) == 0) {
      q.u = q.d = lo + (hi - lo) * Rat(long(rng.below(den + 1)), den);
    } else {
      q.u = p.u0 + (p.U0 - p.u0) * Rat(long(rng.below(den + 1)), den);
      q.d = p.d0 + (p.D0 - p.d0) * Rat(long(rng.below(den + 1)), den);
    }
    auto c = binom::cover(q, alt);
    if (!(c.support_ok && c.ac_ok)) {
      ++unsound;
      if (bad.size() < 5) bad.push_back(member_str(q));
    }
  }
  rep.add("seed", std::to_string(o.seed));
  rep.add("count", std::to_string(o.count));
  rep.add("grid_denominator", std::to_string(den));
  rep.add("unsound", unsound);
  rep.add("all_sound", verdict(unsound == 0));
  for (size_t i = 0; i < bad.size(); ++i)
    rep.add("unsound_" + std::to_string(i), quote(bad[i]));
  return unsound == 0 ? 0 : 1;
}

int cmd_na_check(const model::ModelDocument& doc, const Options& o, Report& rep) {
  const auto& b = need_binomial(doc, o.binomial);
  rep.add("binomial", o.binomial);
  if (!o.u.empty() || !o.d.empty()) {
    if (o.u.empty() || o.d.empty() || o.pi.empty())
      throw ValidationError("a single-member check needs --u, --d and --pi");
    auto q = member_from_flags(o, std::nullopt);
    bool na = binom::check_na_single(q);
    rep.add("member", quote(member_str(q)));
    rep.add("na", verdict(na));
    return na ? 0 : 1;
  }
  auto r = binom::check_na_robust(b.params);
  rep.add("na", verdict(r.na));
  if (r.witness) rep.add("witness", quote(member_str(*r.witness)));
  if (r.up_witness) rep.add("up_witness", quote(member_str(*r.up_witness)));
  if (r.down_witness) rep.add("down_witness", quote(member_str(*r.down_witness)));
  if (!r.explanation.empty()) rep.add("explanation", quote(r.explanation));
  return r.na ? 0 : 1;
}

int cmd_tv(const model::ModelDocument& doc, const Options& o, Report& rep) {
  const auto& mu = need_measure(doc, o.measure).measure;
  rep.add("measure", o.measure);
  auto hj = hahn_jordan(mu);
  rep.add("tv", tv_norm(mu));
  rep.add("pos_mass", hj.pos.mass(hj.pos.support()));
  rep.add("neg_mass", hj.neg.mass(hj.neg.support()));
  if (!o.binomial.empty()) {
    auto alt = binom::build_alternative(need_binomial(doc, o.binomial).params);
    auto em = hx::extend_measure(mu, alt);
    rep.add("supports", em.active.size());
    rep.add("extended_tv", hx::extended_tv(em));
    rep.add("isometry", verdict(hx::restriction_isometry_check(mu, alt)));
  } else if (!o.localization.empty()) {
    auto loc = localization_from_def(doc, need_localization(doc, o.localization));
    auto em = hx::extend_measure(mu, loc);
    rep.add("supports", em.active.size());
    rep.add("extended_tv", hx::extended_tv(em));
    rep.add("isometry", verdict(hx::restriction_isometry_check(mu, loc)));
  }
  return 0;
}

testing::TestProblem problem_from_def(const model::ModelDocument& doc,
                                      const model::TestProblemDef& def) {
  return testing::TestProblem{family_from_def(doc, need_family(doc, def.h0)),
                              family_from_def(doc, need_family(doc, def.h1)),
                              def.epsilon};
}

int cmd_kraft(const model::ModelDocument& doc, const Options& o, Report& rep) {
  const auto& def = need_problem(doc, o.problem);
  auto prob = problem_from_def(doc, def);
  auto sol = testing::min_risk(prob);
  rep.add("problem", o.problem);
  rep.add("d_tv", sol.d_tv);
  rep.add("min_risk", sol.min_risk);
  rep.add("identity", "verified");
  rep.add("h0_weights", rat_list(sol.h0_weights));
  rep.add("h1_weights", rat_list(sol.h1_weights));
  rep.add("mu_star", table_str(sol.mu_star.weights()));
  rep.add("nu_star", table_str(sol.nu_star.weights()));
  std::map<std::string, Rat> phi;
  for (const auto& a : prob.universe()) phi[a] = sol.phi_star.at(a);
  rep.add("phi", table_str(phi));
  return 0;
}

int cmd_unbiased(const model::ModelDocument& doc, const Options& o, Report& rep) {
  const auto& def = need_problem(doc, o.problem);
  auto prob = problem_from_def(doc, def);
  std::optional<Rat> eps;
  if (!o.epsilon.empty())
    eps = parse_cli_rat(o.epsilon, "--epsilon");
  else if (def.epsilon)
    eps = def.epsilon;
  else
    throw ValidationError("test problem '" + o.problem +
                          "' has no epsilon; pass --epsilon");
  auto r = testing::strictly_unbiased_exists(prob, *eps);
  rep.add("problem", o.problem);
  rep.add("epsilon", *eps);
  rep.add("d_tv", r.d_tv);
  rep.add("exists", r.exists);
  if (r.exists) {
    rep.add("h0_sup", r.h0_sup);
    rep.add("h1_inf", r.h1_inf);
    std::map<std::string, Rat> phi;
    for (const auto& a : prob.universe()) phi[a] = r.witness->at(a);
    rep.add("witness", table_str(phi));
  }
  return r.exists ? 0 : 1;
}

int cmd_decompose(const model::ModelDocument& doc, const Options& o, Report& rep) {
  const auto& mu = need_measure(doc, o.measure).measure;
  const SignedMeasure* nu = nullptr;
  SignedMeasure held;
  if (const auto* m = model::find_measure(doc, o.wrt)) {
    nu = &m->measure;
  } else if (const auto* p = model::find_prob(doc, o.wrt)) {
    held = p->prob.measure();
    nu = &held;
  } else {
    throw ValidationError("no measure or probability named '" + o.wrt + "'");
  }
  auto parts = lebesgue_decompose(mu, *nu);
  rep.add("measure", o.measure);
  rep.add("wrt", o.wrt);
  rep.add("ac", table_str(parts.ac.weights()));
  rep.add("singular", table_str(parts.sing.weights()));
  rep.add("ac_dominated", verdict(is_abs_continuous(parts.ac, *nu)));
  rep.add("singular_perp", verdict(is_singular(parts.sing, *nu)));
  rep.add("sum", verdict(parts.ac + parts.sing == mu));
  return 0;
}

void attach_meta(Report& rep, const Options& o) {
  if (!o.meta) return;
  std::time_t now = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  rep.meta_fields.emplace_back("generated", buf);
  rep.meta_fields.emplace_back("tool_version", "0.1.0");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact analysis of finite robust models: localizations, gluing, "
               "measure extension, binomial alternatives, and minimax tests"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* sc) {
    sc->add_option("model", o.model_path, "model document file")->required();
    sc->add_option("--format", o.format, "report format")
        ->check(CLI::IsMember({"human", "machine"}))
        ->capture_default_str();
    sc->add_flag("--meta", o.meta, "append generation metadata to the report");
    return sc;
  };

  auto* sc_verify = common(app.add_subcommand(
      "verify-localization", "check a localization against a family"));
  sc_verify->add_option("--family", o.family)->required();
  sc_verify->add_option("--localization", o.localization)->required();
  sc_verify->add_flag("--strict", o.strict, "require set-disjoint supports");
  sc_verify->add_option("--probe-depth", o.probe_depth,
                        "also certify the supports as an essential supremum");

  auto* sc_glue = common(app.add_subcommand(
      "glue", "assemble one function from per-member pieces"));
  sc_glue->add_option("--family", o.family)->required();
  sc_glue->add_option("--localization", o.localization)->required();
  sc_glue->add_option("--pieces", o.pieces, "comma-separated measure names, one per member")
      ->required();

  auto* sc_ext = common(app.add_subcommand(
      "hahn-extend", "extend a measure across disjoint supports"));
  sc_ext->add_option("--measure", o.measure)->required();
  sc_ext->add_option("--binomial", o.binomial);
  sc_ext->add_option("--localization", o.localization);
  sc_ext->add_option("--set", o.set, "also evaluate the extension on this set");

  auto* sc_bval = common(app.add_subcommand(
      "binomial-validate", "check the parameter assumptions"));
  sc_bval->add_option("--binomial", o.binomial)->required();

  auto* sc_balt = common(app.add_subcommand(
      "binomial-alt", "describe the disjointly supported alternative"));
  sc_balt->add_option("--binomial", o.binomial)->required();
  sc_balt->add_option("--grid-denominator", o.grid_den, "also list grid members");

  auto* sc_bcov = common(app.add_subcommand(
      "binomial-cover", "cover box members by alternative members"));
  sc_bcov->add_option("--binomial", o.binomial)->required();
  sc_bcov->add_option("--u", o.u);
  sc_bcov->add_option("--d", o.d);
  sc_bcov->add_option("--pi", o.pi);
  sc_bcov->add_option("--seed", o.seed)->capture_default_str();
  sc_bcov->add_option("--count", o.count)->capture_default_str();
  sc_bcov->add_option("--grid-denominator", o.grid_den, "sweep step denominator");

  auto* sc_na = common(app.add_subcommand(
      "na-check", "no-arbitrage across the box or for one member"));
  sc_na->add_option("--binomial", o.binomial)->required();
  sc_na->add_option("--u", o.u);
  sc_na->add_option("--d", o.d);
  sc_na->add_option("--pi", o.pi);

  auto* sc_tv = common(app.add_subcommand(
      "tv", "total variation, optionally through an extension"));
  sc_tv->add_option("--measure", o.measure)->required();
  sc_tv->add_option("--binomial", o.binomial);
  sc_tv->add_option("--localization", o.localization);

  auto* sc_kraft = common(app.add_subcommand(
      "kraft", "minimax risk and the hull-distance identity"));
  sc_kraft->add_option("--problem", o.problem)->required();

  auto* sc_unb = common(app.add_subcommand(
      "unbiased", "existence of a strictly unbiased test"));
  sc_unb->add_option("--problem", o.problem)->required();
  sc_unb->add_option("--epsilon", o.epsilon, "override the document epsilon");

  auto* sc_dec = common(app.add_subcommand(
      "decompose", "split a measure into dominated and singular parts"));
  sc_dec->add_option("--measure", o.measure)->required();
  sc_dec->add_option("--wrt", o.wrt, "reference measure or probability")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  std::ifstream in(o.model_path);
  if (!in) {
    std::cerr << "cannot read '" << o.model_path << "'\n";
    return 2;
  }
  std::stringstream buf;
  buf << in.rdbuf();
  auto parsed = model::parse_model(buf.str());
  if (!parsed.ok()) {
    for (const auto& d : parsed.diagnostics)
      std::cerr << o.model_path << ":" << d.line << ":" << d.col << ": " << d.message << "\n";
    return 2;
  }
  const auto& doc = *parsed.doc;

  const std::string cmd = app.get_subcommands().front()->get_name();
  Report rep(cmd);
  int code = 0;
  try {
    if (cmd == "verify-localization") code = cmd_verify_localization(doc, o, rep);
    else if (cmd == "glue") code = cmd_glue(doc, o, rep);
    else if (cmd == "hahn-extend") code = cmd_hahn_extend(doc, o, rep);
    else if (cmd == "binomial-validate") code = cmd_binomial_validate(doc, o, rep);
    else if (cmd == "binomial-alt") code = cmd_binomial_alt(doc, o, rep);
    else if (cmd == "binomial-cover") code = cmd_binomial_cover(doc, o, rep);
    else if (cmd == "na-check") code = cmd_na_check(doc, o, rep);
    else if (cmd == "tv") code = cmd_tv(doc, o, rep);
    else if (cmd == "kraft") code = cmd_kraft(doc, o, rep);
    else if (cmd == "unbiased") code = cmd_unbiased(doc, o, rep);
    else if (cmd == "decompose") code = cmd_decompose(doc, o, rep);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::logic_error& e) {
    std::cerr << "check failed: " << e.what() << "\n";
    return 1;
  }
  attach_meta(rep, o);
  std::cout << (o.format == "machine" ? rep.machine() : rep.human());
  return code;
}
