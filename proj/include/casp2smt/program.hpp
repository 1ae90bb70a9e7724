// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The casp2smt Authors

#pragma once

#include "casp2smt/lincon.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace casp {

enum class AtomId : std::uint32_t {};

constexpr std::size_t index(AtomId a) { return static_cast<std::size_t>(a); }
constexpr AtomId atom_at(std::size_t i) { return static_cast<AtomId>(i); }

enum class AtomKind { Regular, Irregular };

/// Names starting with this prefix are reserved for generated symbols.
inline constexpr std::string_view kReservedPrefix = "__";

/// Default upper bound on the number of atoms the exhaustive oracles accept.
inline constexpr std::size_t kDefaultOracleCap = 22;

/// Set of atoms as a bitset over atom indices. Trailing zero words are never
/// stored, so equality is structural.
class AtomSet {
 public:
  AtomSet() = default;
  AtomSet(std::initializer_list<AtomId> atoms);

  bool contains(AtomId a) const;
  void insert(AtomId a);
  void erase(AtomId a);
  std::size_t size() const;
  bool empty() const { return words_.empty(); }

  bool is_subset_of(const AtomSet& other) const;
  AtomSet operator&(const AtomSet& other) const;
  AtomSet operator|(const AtomSet& other) const;
  /// Set difference.
  AtomSet operator-(const AtomSet& other) const;

  std::vector<AtomId> members() const;

  friend bool operator==(const AtomSet&, const AtomSet&) = default;

 private:
  void trim();

  std::vector<std::uint64_t> words_;
};

struct AtomInfo {
  std::string name;
  AtomKind kind = AtomKind::Regular;
};

/// Atom names and kinds; ids are dense indices in insertion order.
class Vocabulary {
 public:
  /// Returns the existing id when name is known; a kind mismatch is an error.
  AtomId add(std::string_view name, AtomKind kind);
  std::optional<AtomId> find(std::string_view name) const;

  const std::string& name(AtomId a) const { return atoms_[index(a)].name; }
  AtomKind kind(AtomId a) const { return atoms_[index(a)].kind; }
  bool is_irregular(AtomId a) const { return kind(a) == AtomKind::Irregular; }
  std::size_t size() const { return atoms_.size(); }

  AtomSet all() const;
  AtomSet irregular() const;

  /// Members of s sorted by name; the enumeration order of all oracles.
  std::vector<AtomId> by_name(const AtomSet& s) const;
  /// Space-separated names in id order.
  std::string format(const AtomSet& s) const;

 private:
  std::vector<AtomInfo> atoms_;
  std::unordered_map<std::string, AtomId> index_;
};

/// head :- pos, not neg, not not dneg. An empty head is the bottom symbol.
/// Bodies are sorted and deduplicated; an atom in both pos and dneg is kept in
/// pos only (b & ~~b == b).
struct Rule {
  std::optional<AtomId> head;
  std::vector<AtomId> pos;
  std::vector<AtomId> neg;
  std::vector<AtomId> dneg;

  bool is_fact() const { return head && pos.empty() && neg.empty() && dneg.empty(); }
  bool has_negation() const { return !neg.empty() || !dneg.empty(); }

  friend bool operator==(const Rule&, const Rule&) = default;
};

Rule make_rule(std::optional<AtomId> head, std::vector<AtomId> pos, std::vector<AtomId> neg = {},
               std::vector<AtomId> dneg = {});

/// A ground CAS program: rules over regular and irregular atoms plus the
/// injective mapping gamma from irregular atoms to linear constraints.
/// Immutable once built.
class Program {
 public:
  const Vocabulary& vocabulary() const { return vocab_; }
  std::span<const Rule> rules() const { return rules_; }
  const std::map<AtomId, LinearConstraint>& gamma() const { return gamma_; }

  /// At(P): atoms occurring in some rule.
  const AtomSet& atoms() const { return atoms_; }
  /// sigma_i: every irregular atom of the vocabulary.
  AtomSet irregular_atoms() const { return vocab_.irregular(); }
  /// Variables of all constraints in gamma, sorted.
  std::vector<std::string> constraint_variables() const;

  /// P united with the facts {a.} for a in facts. The only way to obtain a
  /// program whose heads contain irregular atoms.
  Program with_facts(const AtomSet& facts) const;
  /// Same vocabulary and gamma, different rules.
  Program with_rules(std::vector<Rule> rules) const;

 private:
  friend class ProgramBuilder;

  Vocabulary vocab_;
  std::vector<Rule> rules_;
  std::map<AtomId, LinearConstraint> gamma_;
  AtomSet atoms_;
};

/// Validating constructor for programs: rejects irregular heads, reserved
/// names and non-injective gamma.
class ProgramBuilder {
 public:
  AtomId regular(std::string_view name);
  /// Irregular atom for the normalized form of c; equal normalized
  /// constraints share one atom. Its name is the rendered constraint in bars.
  AtomId irregular(const LinearConstraint& c);
  /// Irregular atom with an explicit name. Names and constraint variables
  /// starting with "__" are rejected.
  AtomId irregular(std::string_view name, const LinearConstraint& c);

  ProgramBuilder& add(Rule rule);
  ProgramBuilder& rule(std::optional<AtomId> head, std::vector<AtomId> pos,
                       std::vector<AtomId> neg = {}, std::vector<AtomId> dneg = {});
  /// {head} :- body, stored as head :- not not head, body.
  ProgramBuilder& choice(AtomId head, std::vector<AtomId> pos = {}, std::vector<AtomId> neg = {},
                         std::vector<AtomId> dneg = {});
  ProgramBuilder& fact(AtomId head);

  const Vocabulary& vocabulary() const { return program_.vocab_; }

  Program build() &&;

 private:
  Program program_;
  std::map<std::string, AtomId, std::less<>> by_constraint_;
};

std::string bar_name(const LinearConstraint& c);

// Semantics ---------------------------------------------------------------

bool satisfies_body(const AtomSet& x, const Rule& r);
/// x satisfies body -> head with negation read classically.
bool satisfies_rule(const AtomSet& x, const Rule& r);
bool satisfies_program(const AtomSet& x, const Program& p);

/// Removes rules whose negative part x falsifies and strips negation from the
/// rest.
Program reduct(const Program& p, const AtomSet& x);

/// Least model of the positive rules of p (denials ignored), seeded with the
/// atoms of seed.
AtomSet least_model(const Program& p, const AtomSet& seed = {});

bool is_answer_set(const Program& p, const AtomSet& x);
/// x is an answer set of p united with the facts x & iota.
bool is_input_answer_set(const Program& p, const AtomSet& x, const AtomSet& iota);

/// All answer sets over At(p), ordered as bit vectors over the atoms sorted by
/// name (first name most significant). Throws Errc::OracleCapExceeded.
std::vector<AtomSet> enumerate_answer_sets(const Program& p,
                                           std::size_t cap = kDefaultOracleCap);

/// Throws Errc::HeadsIntersectInput when a head lies in iota.
std::vector<AtomSet> input_answer_sets(const Program& p, const AtomSet& iota,
                                       std::size_t cap = kDefaultOracleCap);

struct DependencyGraph {
  AtomSet vertices;
  /// (head, positive body atom), sorted and unique.
  std::vector<std::pair<AtomId, AtomId>> edges;
};

DependencyGraph dependency_graph(const Program& p);
bool is_tight(const Program& p);
AtomSet heads(const Program& p);

/// Throws Errc::HeadsIntersectInput.
void require_heads_disjoint(const Program& p, const AtomSet& iota);

/// Calls visit for every subset of atoms in the oracle order described at
/// enumerate_answer_sets. Throws Errc::OracleCapExceeded.
void for_each_subset(const Vocabulary& vocab, const AtomSet& atoms, std::size_t cap,
                     const std::function<void(const AtomSet&)>& visit);

}  // namespace casp
