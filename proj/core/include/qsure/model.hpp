#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qsure/binomial.hpp"
#include "qsure/measure.hpp"

namespace qsure::model {

// Grammar reference: docs/model_format.md. A document is a sequence of named
// sections; atom labels live in one shared namespace, rational literals are
// always legal atom ids (points of the line) without declaration.

struct NamedMeasure {
  std::string name;
  SignedMeasure measure;

  friend bool operator==(const NamedMeasure&, const NamedMeasure&) = default;
};

struct NamedProb {
  std::string name;
  ProbabilityMeasure prob;

  friend bool operator==(const NamedProb&, const NamedProb&) = default;
};

struct FamilyDef {
  std::string name;
  std::vector<std::string> member_names;  // prob sections
  AtomSet extras;

  friend bool operator==(const FamilyDef&, const FamilyDef&) = default;
};

struct LocalizationDef {
  std::string name;
  // (prob section, support atoms) per localization member
  std::vector<std::pair<std::string, AtomSet>> members;

  friend bool operator==(const LocalizationDef&, const LocalizationDef&) = default;
};

struct BinomialDef {
  std::string name;
  binom::ModelParams params;  // validity is checked by commands, not the parser

  friend bool operator==(const BinomialDef&, const BinomialDef&) = default;
};

struct TestProblemDef {
  std::string name;
  std::string h0, h1;  // family sections
  std::optional<Rat> epsilon;

  friend bool operator==(const TestProblemDef&, const TestProblemDef&) = default;
};

struct SetDef {
  std::string name;
  std::optional<std::string> with_binomial;  // binds f for SU forms
  std::string text;                          // canonical expression text

  friend bool operator==(const SetDef&, const SetDef&) = default;
};

struct ModelDocument {
  AtomSet atoms;  // declared labels; rational ids need no declaration
  std::vector<NamedMeasure> measures;
  std::vector<NamedProb> probs;
  std::vector<BinomialDef> binomials;
  std::vector<FamilyDef> families;
  std::vector<LocalizationDef> localizations;
  std::vector<SetDef> sets;
  std::vector<TestProblemDef> test_problems;

  friend bool operator==(const ModelDocument&, const ModelDocument&) = default;
};

struct Diagnostic {
  size_t pos = 0;  // byte offset into the input
  size_t line = 1, col = 1;
  std::string message;
};

// A failed parse carries at least one diagnostic. Syntax errors stop the
// parse at the first offender; semantic checks (normalization, duplicate
// names, dangling references) are collected in one pass.
struct ModelParseResult {
  std::optional<ModelDocument> doc;
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return doc.has_value(); }
};

ModelParseResult parse_model(std::string_view text);

// Canonical text. parse_model(emit_model(doc)) round-trips to an equal
// document.
std::string emit_model(const ModelDocument& doc);

// Section lookup helpers; nullptr when absent.
const NamedMeasure* find_measure(const ModelDocument& doc, const std::string& name);
const NamedProb* find_prob(const ModelDocument& doc, const std::string& name);
const BinomialDef* find_binomial(const ModelDocument& doc, const std::string& name);
const FamilyDef* find_family(const ModelDocument& doc, const std::string& name);
const LocalizationDef* find_localization(const ModelDocument& doc, const std::string& name);
const SetDef* find_set(const ModelDocument& doc, const std::string& name);
const TestProblemDef* find_test_problem(const ModelDocument& doc, const std::string& name);

}  // namespace qsure::model
