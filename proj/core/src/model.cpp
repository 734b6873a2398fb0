#include "qsure/model.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <utility>

namespace qsure::model {

namespace {

// Syntax errors abort the parse at the first offending byte; semantic
// findings (undefined names, bad weights) are collected and reported together.
struct SyntaxError {
  std::size_t pos;
  std::string msg;
};

bool ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

struct Cur {
  std::string_view s;
  std::size_t p = 0;

  void ws() {
    while (p < s.size()) {
      char c = s[p];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++p;
      } else if (c == '#') {
        while (p < s.size() && s[p] != '\n') ++p;
      } else {
        break;
      }
    }
  }
  bool at_end() {
    ws();
    return p >= s.size();
  }
  char peek() {
    ws();
    return p < s.size() ? s[p] : '\0';
  }
  bool eat(char c) {
    ws();
    if (p < s.size() && s[p] == c) {
      ++p;
      return true;
    }
    return false;
  }
  void expect(char c, const char* where) {
    if (!eat(c))
      throw SyntaxError{p, std::string("expected '") + c + "' " + where};
  }
  std::optional<std::string> ident() {
    ws();
    if (p >= s.size() || !ident_start(s[p])) return std::nullopt;
    std::size_t q = p;
    while (q < s.size() && ident_char(s[q])) ++q;
    std::string out{s.substr(p, q - p)};
    p = q;
    return out;
  }
  std::string need_ident(const char* what) {
    auto i = ident();
    if (!i) throw SyntaxError{p, std::string("expected ") + what};
    return *i;
  }
  std::optional<Rat> rational() {
    ws();
    std::size_t q = p;
    if (q < s.size() && s[q] == '-') ++q;
    if (q >= s.size() || !std::isdigit(static_cast<unsigned char>(s[q])))
      return std::nullopt;
    while (q < s.size() && std::isdigit(static_cast<unsigned char>(s[q]))) ++q;
    if (q < s.size() && s[q] == '/') {
      ++q;
      while (q < s.size() && std::isdigit(static_cast<unsigned char>(s[q]))) ++q;
    }
    auto r = parse_rat(s.substr(p, q - p));
    if (!r) throw SyntaxError{p, "malformed rational"};
    p = q;
    return r;
  }
  Rat need_rational(const char* what) {
    auto r = rational();
    if (!r) throw SyntaxError{p, std::string("expected ") + what};
    return *r;
  }
  // An atom reference is a declared label or a rational literal; literals
  // are canonicalized so "3/6" and "1/2" name the same point.
  std::string atomref() {
    ws();
    if (p < s.size() &&
        (std::isdigit(static_cast<unsigned char>(s[p])) || s[p] == '-'))
      return rat_str(need_rational("rational"));
    auto i = ident();
    if (!i) throw SyntaxError{p, "expected an atom (label or rational)"};
    return *i;
  }
  bool numeric_next() {
    ws();
    return p < s.size() &&
           (std::isdigit(static_cast<unsigned char>(s[p])) || s[p] == '-');
  }
};

Diagnostic make_diag(std::string_view text, std::size_t pos, std::string msg) {
  Diagnostic d;
  d.pos = pos;
  d.message = std::move(msg);
  d.line = 1;
  d.col = 1;
  for (std::size_t i = 0; i < pos && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++d.line;
      d.col = 1;
    } else {
      ++d.col;
    }
  }
  return d;
}

struct Parser {
  Cur c;
  ModelDocument doc;
  std::vector<Diagnostic> diags;
  std::map<std::string, std::string> names;  // name -> kind, one shared namespace

  void diag(std::size_t pos, std::string msg) {
    diags.push_back(make_diag(c.s, pos, std::move(msg)));
  }

  // Returns false (and records) when the name is taken.
  bool claim(const std::string& name, std::size_t pos, const char* kind) {
    auto [it, fresh] = names.emplace(name, kind);
    if (!fresh) {
      diag(pos, "name '" + name + "' is already defined as a " + it->second);
      return false;
    }
    return true;
  }

  void check_atom_label(const std::string& a, std::size_t pos) {
    if (!a.empty() && ident_start(a[0]) && !doc.atoms.count(a))
      diag(pos, "reference to undefined atom '" + a + "'");
  }

  void atoms_section() {
    c.expect('{', "to open the atom list");
    bool first = true;
    while (!c.eat('}')) {
      if (!first) c.expect(',', "between atoms");
      first = false;
      std::size_t pos = c.p;
      c.ws();
      pos = c.p;
      std::string a = c.need_ident("an atom label");
      if (!doc.atoms.insert(a).second)
        diag(pos, "atom '" + a + "' declared twice");
    }
  }

  // Shared body for measure/prob weight tables.
  std::map<std::string, Rat> weight_table(const std::string& owner,
                                          bool positive_required) {
    c.expect('{', "to open the weight table");
    std::map<std::string, Rat> w;
    bool first = true;
    while (!c.eat('}')) {
      if (!first) c.expect(',', "between weights");
      first = false;
      c.ws();
      std::size_t apos = c.p;
      std::string a = c.atomref();
      check_atom_label(a, apos);
      c.expect(':', "after the atom");
      c.ws();
      std::size_t vpos = c.p;
      Rat v = c.need_rational("a rational weight");
      if (positive_required && v <= 0)
        diag(vpos, "weight " + rat_str(v) + " at atom '" + a + "' in '" +
                       owner + "' must be positive");
      if (!w.emplace(a, v).second)
        diag(apos, "atom '" + a + "' appears twice in '" + owner + "'");
    }
    return w;
  }

  void measure_section() {
    c.ws();
    std::size_t npos = c.p;
    std::string name = c.need_ident("a measure name");
    claim(name, npos, "measure");
    auto w = weight_table(name, false);
    doc.measures.push_back({name, SignedMeasure(w)});
  }

  void prob_section() {
    c.ws();
    std::size_t npos = c.p;
    std::string name = c.need_ident("a probability name");
    claim(name, npos, "probability");
    auto w = weight_table(name, true);
    Rat total = 0;
    for (auto& [a, v] : w) total += v;
    if (total != 1) {
      diag(npos, "probability '" + name + "' is not normalized: weights sum to " +
                     rat_str(total));
      return;  // document is discarded once any diagnostic exists
    }
    bool positive = true;
    for (auto& [a, v] : w)
      if (v <= 0) positive = false;
    if (positive) doc.probs.push_back({name, ProbabilityMeasure(w)});
  }

  void binomial_section() {
    c.ws();
    std::size_t npos = c.p;
    std::string name = c.need_ident("a binomial name");
    claim(name, npos, "binomial");
    c.expect('{', "to open the parameter list");
    std::map<std::string, Rat> kv;
    bool first = true;
    while (!c.eat('}')) {
      if (!first) c.expect(',', "between parameters");
      first = false;
      c.ws();
      std::size_t kpos = c.p;
      std::string key = c.need_ident("a parameter name");
      c.expect('=', "after the parameter name");
      Rat v = c.need_rational("a rational value");
      static const std::set<std::string> known{"u0", "U0", "d0",
                                              "D0", "pi0", "Pi0"};
      if (!known.count(key)) {
        diag(kpos, "unknown binomial parameter '" + key + "'");
        continue;
      }
      if (!kv.emplace(key, v).second)
        diag(kpos, "binomial parameter '" + key + "' given twice");
    }
    binom::ModelParams p{};
    for (const char* key : {"u0", "U0", "d0", "D0", "pi0", "Pi0"}) {
      auto it = kv.find(key);
      if (it == kv.end()) {
        diag(npos, "binomial '" + name + "' is missing parameter '" +
                       std::string(key) + "'");
        continue;
      }
      if (it->first == "u0") p.u0 = it->second;
      else if (it->first == "U0") p.U0 = it->second;
      else if (it->first == "d0") p.d0 = it->second;
      else if (it->first == "D0") p.D0 = it->second;
      else if (it->first == "pi0") p.pi0 = it->second;
      else p.Pi0 = it->second;
    }
    doc.binomials.push_back({name, p});
  }

  void family_section() {
    c.ws();
    std::size_t npos = c.p;
    std::string name = c.need_ident("a family name");
    claim(name, npos, "family");
    c.expect('{', "to open the family body");
    c.ws();
    std::size_t kpos = c.p;
    std::string kw = c.need_ident("'members'");
    if (kw != "members") throw SyntaxError{kpos, "expected 'members'"};
    c.expect('=', "after 'members'");
    c.expect('[', "to open the member list");
    FamilyDef def;
    def.name = name;
    bool first = true;
    while (!c.eat(']')) {
      if (!first) c.expect(',', "between members");
      first = false;
      c.ws();
      std::size_t mpos = c.p;
      std::string m = c.need_ident("a probability name");
      if (!find_prob(doc, m))
        diag(mpos, "family '" + name + "' references undefined probability '" +
                       m + "'");
      def.member_names.push_back(m);
    }
    if (c.eat(',')) {
      c.ws();
      kpos = c.p;
      kw = c.need_ident("'extras'");
      if (kw != "extras") throw SyntaxError{kpos, "expected 'extras'"};
      c.expect('=', "after 'extras'");
      c.expect('{', "to open the extras list");
      bool efirst = true;
      while (!c.eat('}')) {
        if (!efirst) c.expect(',', "between extras");
        efirst = false;
        c.ws();
        std::size_t apos = c.p;
        std::string a = c.atomref();
        check_atom_label(a, apos);
        def.extras.insert(a);
      }
    }
    c.expect('}', "to close the family body");
    doc.families.push_back(std::move(def));
  }

  void localization_section() {
    c.ws();
    std::size_t npos = c.p;
    std::string name = c.need_ident("a localization name");
    claim(name, npos, "localization");
    c.expect('{', "to open the pair list");
    LocalizationDef def;
    def.name = name;
    bool first = true;
    while (!c.eat('}')) {
      if (!first) c.expect(',', "between pairs");
      first = false;
      c.expect('(', "to open a (measure, support) pair");
      c.ws();
      std::size_t mpos = c.p;
      std::string m = c.need_ident("a probability name");
      if (!find_prob(doc, m))
        diag(mpos, "localization '" + name +
                       "' references undefined probability '" + m + "'");
      c.expect(',', "between the measure and its support");
      c.expect('{', "to open the support set");
      AtomSet sup;
      bool sfirst = true;
      while (!c.eat('}')) {
        if (!sfirst) c.expect(',', "between support atoms");
        sfirst = false;
        c.ws();
        std::size_t apos = c.p;
        std::string a = c.atomref();
        check_atom_label(a, apos);
        sup.insert(a);
      }
      c.expect(')', "to close the pair");
      def.members.emplace_back(m, std::move(sup));
    }
    doc.localizations.push_back(std::move(def));
  }

  void set_section() {
    c.ws();
    std::size_t npos = c.p;
    std::string name = c.need_ident("a set name");
    claim(name, npos, "set");
    SetDef def;
    def.name = name;
    c.ws();
    std::size_t wpos = c.p;
    if (auto kw = c.ident()) {
      if (*kw != "with") throw SyntaxError{wpos, "expected 'with' or '{'"};
      c.ws();
      std::size_t bpos = c.p;
      def.with_binomial = c.need_ident("a binomial name");
      if (!find_binomial(doc, *def.with_binomial))
        diag(bpos, "set '" + name + "' references undefined binomial '" +
                       *def.with_binomial + "'");
    }
    c.expect('{', "to open the set body");
    // The body is raw set-expression text, scanned to the matching brace.
    std::size_t start = c.p;
    int depth = 1;
    while (c.p < c.s.size() && depth > 0) {
      char ch = c.s[c.p];
      if (ch == '{') ++depth;
      else if (ch == '}') --depth;
      if (depth > 0) ++c.p;
    }
    if (depth > 0) throw SyntaxError{start, "unterminated set body"};
    std::string body{c.s.substr(start, c.p - start)};
    ++c.p;  // consume '}'

    std::shared_ptr<const sets::PiecewiseLinearBijection> f;
    if (def.with_binomial) {
      if (auto* b = find_binomial(doc, *def.with_binomial)) {
        try {
          f = binom::build_alternative(b->params).f;
        } catch (const ValidationError& e) {
          diag(wpos, "set '" + name + "': binomial '" + *def.with_binomial +
                         "' does not admit an alternative (" + e.what() + ")");
          return;
        }
      } else {
        return;  // undefined binomial already reported
      }
    }
    auto res = sets::parse_set_expr(body, f);
    if (!res.ok()) {
      diag(start + res.pos, "set '" + name + "': " + res.error);
      return;
    }
    def.text = sets::set_expr_str(*res.expr);
    doc.sets.push_back(std::move(def));
  }

  void testproblem_section() {
    c.ws();
    std::size_t npos = c.p;
    std::string name = c.need_ident("a test problem name");
    claim(name, npos, "test problem");
    c.expect('{', "to open the problem body");
    TestProblemDef def;
    def.name = name;
    auto key = [&](const char* want) {
      c.ws();
      std::size_t kpos = c.p;
      std::string kw = c.need_ident(want);
      if (kw != want)
        throw SyntaxError{kpos, std::string("expected '") + want + "'"};
      c.expect('=', "after the key");
    };
    key("h0");
    c.ws();
    std::size_t fpos = c.p;
    def.h0 = c.need_ident("a family name");
    if (!find_family(doc, def.h0))
      diag(fpos, "test problem '" + name + "' references undefined family '" +
                     def.h0 + "'");
    c.expect(',', "between h0 and h1");
    key("h1");
    c.ws();
    fpos = c.p;
    def.h1 = c.need_ident("a family name");
    if (!find_family(doc, def.h1))
      diag(fpos, "test problem '" + name + "' references undefined family '" +
                     def.h1 + "'");
    if (c.eat(',')) {
      key("epsilon");
      c.ws();
      std::size_t epos = c.p;
      Rat e = c.need_rational("a rational epsilon");
      if (e < 0)
        diag(epos, "test problem '" + name + "': epsilon must be nonnegative");
      def.epsilon = e;
    }
    c.expect('}', "to close the problem body");
    doc.test_problems.push_back(std::move(def));
  }

  void run() {
    while (!c.at_end()) {
      c.ws();
      std::size_t pos = c.p;
      std::string kw = c.need_ident("a section keyword");
      if (kw == "atoms") atoms_section();
      else if (kw == "measure") measure_section();
      else if (kw == "prob") prob_section();
      else if (kw == "binomial") binomial_section();
      else if (kw == "family") family_section();
      else if (kw == "localization") localization_section();
      else if (kw == "set") set_section();
      else if (kw == "testproblem") testproblem_section();
      else throw SyntaxError{pos, "unknown section '" + kw + "'"};
    }
  }
};

}  // namespace

ModelParseResult parse_model(std::string_view text) {
  Parser P{Cur{text, 0}, {}, {}, {}};
  try {
    P.run();
  } catch (const SyntaxError& e) {
    P.diags.push_back(make_diag(text, e.pos, e.msg));
  }
  std::stable_sort(P.diags.begin(), P.diags.end(),
                   [](const Diagnostic& a, const Diagnostic& b) {
                     return a.pos < b.pos;
                   });
  ModelParseResult out;
  out.diagnostics = std::move(P.diags);
  if (out.diagnostics.empty()) out.doc = std::move(P.doc);
  return out;
}

std::string emit_model(const ModelDocument& doc) {
  std::string out;
  auto blank = [&] {
    if (!out.empty()) out += "\n";
  };
  if (!doc.atoms.empty()) {
    out += "atoms { ";
    bool first = true;
    for (const auto& a : doc.atoms) {
      if (!first) out += ", ";
      first = false;
      out += a;
    }
    out += " }\n";
  }
  auto weights = [&](const std::map<std::string, Rat>& w) {
    out += "{ ";
    bool first = true;
    for (const auto& [a, v] : w) {
      if (!first) out += ", ";
      first = false;
      out += a + ": " + rat_str(v);
    }
    if (w.empty()) out.pop_back();  // "{ " -> "{"
    out += w.empty() ? "}" : " }";
  };
  for (const auto& m : doc.measures) {
    blank();
    out += "measure " + m.name + " ";
    weights(m.measure.weights());
    out += "\n";
  }
  for (const auto& p : doc.probs) {
    blank();
    out += "prob " + p.name + " ";
    weights(p.prob.weights());
    out += "\n";
  }
  for (const auto& b : doc.binomials) {
    blank();
    const auto& q = b.params;
    out += "binomial " + b.name + " { u0 = " + rat_str(q.u0) +
           ", U0 = " + rat_str(q.U0) + ", d0 = " + rat_str(q.d0) +
           ", D0 = " + rat_str(q.D0) + ", pi0 = " + rat_str(q.pi0) +
           ", Pi0 = " + rat_str(q.Pi0) + " }\n";
  }
  for (const auto& fam : doc.families) {
    blank();
    out += "family " + fam.name + " { members = [";
    bool first = true;
    for (const auto& m : fam.member_names) {
      if (!first) out += ", ";
      first = false;
      out += m;
    }
    out += "]";
    if (!fam.extras.empty()) {
      out += ", extras = {";
      first = true;
      for (const auto& a : fam.extras) {
        if (!first) out += ",";
        first = false;
        out += " " + a;
      }
      out += " }";
    }
    out += " }\n";
  }
  for (const auto& loc : doc.localizations) {
    blank();
    out += "localization " + loc.name + " {";
    bool first = true;
    for (const auto& [m, sup] : loc.members) {
      out += first ? " " : ", ";
      first = false;
      out += "(" + m + ", {";
      bool sfirst = true;
      for (const auto& a : sup) {
        if (!sfirst) out += ",";
        sfirst = false;
        out += " " + a;
      }
      out += " })";
    }
    out += " }\n";
  }
  for (const auto& s : doc.sets) {
    blank();
    out += "set " + s.name;
    if (s.with_binomial) out += " with " + *s.with_binomial;
    out += " { " + s.text + " }\n";
  }
  for (const auto& t : doc.test_problems) {
    blank();
    out += "testproblem " + t.name + " { h0 = " + t.h0 + ", h1 = " + t.h1;
    if (t.epsilon) out += ", epsilon = " + rat_str(*t.epsilon);
    out += " }\n";
  }
  return out;
}

const NamedMeasure* find_measure(const ModelDocument& doc,
                                 const std::string& name) {
  for (const auto& m : doc.measures)
    if (m.name == name) return &m;
  return nullptr;
}
const NamedProb* find_prob(const ModelDocument& doc, const std::string& name) {
  for (const auto& p : doc.probs)
    if (p.name == name) return &p;
  return nullptr;
}
const BinomialDef* find_binomial(const ModelDocument& doc,
                                 const std::string& name) {
  for (const auto& b : doc.binomials)
    if (b.name == name) return &b;
  return nullptr;
}
const FamilyDef* find_family(const ModelDocument& doc,
                             const std::string& name) {
  for (const auto& f : doc.families)
    if (f.name == name) return &f;
  return nullptr;
}
const LocalizationDef* find_localization(const ModelDocument& doc,
                                         const std::string& name) {
  for (const auto& l : doc.localizations)
    if (l.name == name) return &l;
  return nullptr;
}
const SetDef* find_set(const ModelDocument& doc, const std::string& name) {
  for (const auto& s : doc.sets)
    if (s.name == name) return &s;
  return nullptr;
}
const TestProblemDef* find_test_problem(const ModelDocument& doc,
                                        const std::string& name) {
  for (const auto& t : doc.test_problems)
    if (t.name == name) return &t;
  return nullptr;
}

}  // namespace qsure::model
