// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The casp2smt Authors

#pragma once

#include "casp2smt/program.hpp"

#include <memory>
#include <span>
#include <string>
#include <vector>

namespace casp {

/// Immutable propositional formula with shared subtrees. Truth is an empty
/// conjunction; falsity is Bottom (or an empty disjunction).
class Formula {
 public:
  enum class Kind { Atom, Bottom, Not, And, Or, Implies, Iff };

  static Formula atom(AtomId a);
  static Formula bottom();
  static Formula top();
  static Formula negation(Formula f);
  /// Nested conjunctions are flattened; a single operand is returned as is.
  static Formula conjunction(std::vector<Formula> operands);
  static Formula disjunction(std::vector<Formula> operands);
  static Formula implies(Formula lhs, Formula rhs);
  static Formula iff(Formula lhs, Formula rhs);

  Kind kind() const { return node_->kind; }
  AtomId atom_id() const { return node_->atom; }
  std::span<const Formula> operands() const { return node_->operands; }
  bool is_top() const { return kind() == Kind::And && operands().empty(); }
  /// Identity of the shared node; structurally equal formulas may differ.
  const void* identity() const { return node_.get(); }

  bool eval(const AtomSet& x) const;
  AtomSet atoms() const;

  /// ASCII rendering: ~ & | -> <->, "true"/"false" for the constants.
  std::string to_string(const Vocabulary& vocab) const;

 private:
  struct Node {
    Kind kind;
    AtomId atom{};
    std::vector<Formula> operands;
  };

  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  static Formula make(Kind kind, std::vector<Formula> operands);

  std::shared_ptr<const Node> node_;
};

/// Body of r as a conjunction of literals; not-not b contributes b.
Formula body_formula(const Rule& r);
/// The rule as body -> head (a fact is just its head atom).
Formula rule_formula(const Rule& r);

/// Bodies of all rules with head a, in rule order.
std::vector<Formula> bodies_of(const Program& p, AtomId a);

/// Rule implications plus a -> OR Bodies(a) for every atom of the vocabulary.
Formula completion(const Program& p);

/// As completion, but support implications only for atoms outside iota.
/// Throws Errc::HeadsIntersectInput.
Formula input_completion(const Program& p, const AtomSet& iota);

/// Every subset of vocab satisfying f, ordered like enumerate_answer_sets.
/// Throws Errc::OracleCapExceeded.
std::vector<AtomSet> models_of(const Formula& f, const Vocabulary& names, const AtomSet& vocab,
                               std::size_t cap = kDefaultOracleCap);

/// Generated definition atoms carry this prefix.
inline constexpr std::string_view kDefinitionPrefix = "__def_";

struct Literal {
  AtomId atom;
  bool positive = true;

  bool holds(const AtomSet& x) const { return x.contains(atom) == positive; }
  friend bool operator==(const Literal&, const Literal&) = default;
};

using Clause = std::vector<Literal>;

/// Clausal form of a formula. vocabulary extends the source vocabulary with
/// the definition atoms listed in fresh_atoms.
struct ClauseSet {
  Vocabulary vocabulary;
  std::vector<Clause> clauses;
  AtomSet fresh_atoms;

  bool satisfied_by(const AtomSet& x) const;
};

/// Definitional (Tseitin) clausification with full equivalences, so every
/// model of f extends to exactly one model of the clauses.
ClauseSet to_clauses(const Formula& f, Vocabulary vocab);

/// m minus the fresh atoms. Throws Errc::NotAModel when m violates a clause.
AtomSet project_model(const AtomSet& m, const ClauseSet& c);

}  // namespace casp
