// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The casp2smt Authors

#include "casp2smt/program.hpp"

#include "casp2smt/error.hpp"

#include <algorithm>
#include <bit>

namespace casp {

// AtomSet ------------------------------------------------------------------

AtomSet::AtomSet(std::initializer_list<AtomId> atoms) {
  for (AtomId a : atoms) insert(a);
}

bool AtomSet::contains(AtomId a) const {
  const std::size_t word = index(a) / 64;
  return word < words_.size() && ((words_[word] >> (index(a) % 64)) & 1U) != 0;
}

void AtomSet::insert(AtomId a) {
  const std::size_t word = index(a) / 64;
  if (word >= words_.size()) words_.resize(word + 1, 0);
  words_[word] |= std::uint64_t{1} << (index(a) % 64);
}

void AtomSet::erase(AtomId a) {
  const std::size_t word = index(a) / 64;
  if (word >= words_.size()) return;
  words_[word] &= ~(std::uint64_t{1} << (index(a) % 64));
  trim();
}

std::size_t AtomSet::size() const {
  std::size_t n = 0;
  for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

bool AtomSet::is_subset_of(const AtomSet& other) const {
  if (words_.size() > other.words_.size()) return false;
  for (std::size_t i = 0; i < words_.size(); ++i)
    if ((words_[i] & ~other.words_[i]) != 0) return false;
  return true;
}

AtomSet AtomSet::operator&(const AtomSet& other) const {
  AtomSet out;
  out.words_.resize(std::min(words_.size(), other.words_.size()));
  for (std::size_t i = 0; i < out.words_.size(); ++i) out.words_[i] = words_[i] & other.words_[i];
  out.trim();
  return out;
}

AtomSet AtomSet::operator|(const AtomSet& other) const {
  AtomSet out = words_.size() >= other.words_.size() ? *this : other;
  const AtomSet& small = words_.size() >= other.words_.size() ? other : *this;
  for (std::size_t i = 0; i < small.words_.size(); ++i) out.words_[i] |= small.words_[i];
  return out;
}

AtomSet AtomSet::operator-(const AtomSet& other) const {
  AtomSet out = *this;
  for (std::size_t i = 0; i < std::min(out.words_.size(), other.words_.size()); ++i)
    out.words_[i] &= ~other.words_[i];
  out.trim();
  return out;
}

std::vector<AtomId> AtomSet::members() const {
  std::vector<AtomId> out;
  for (std::size_t w = 0; w < words_.size(); ++w) {
    std::uint64_t bits = words_[w];
    while (bits != 0) {
      const int bit = std::countr_zero(bits);
      out.push_back(atom_at(w * 64 + static_cast<std::size_t>(bit)));
      bits &= bits - 1;
    }
  }
  return out;
}

void AtomSet::trim() {
  while (!words_.empty() && words_.back() == 0) words_.pop_back();
}

// Vocabulary ---------------------------------------------------------------

AtomId Vocabulary::add(std::string_view name, AtomKind kind) {
  if (auto it = index_.find(std::string(name)); it != index_.end()) {
    if (atoms_[index(it->second)].kind != kind)
      throw Error(Errc::SyntaxError, "atom '" + std::string(name) + "' used with two kinds");
    return it->second;
  }
  const AtomId id = atom_at(atoms_.size());
  atoms_.push_back({std::string(name), kind});
  index_.emplace(std::string(name), id);
  return id;
}

std::optional<AtomId> Vocabulary::find(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

AtomSet Vocabulary::all() const {
  AtomSet out;
  for (std::size_t i = 0; i < atoms_.size(); ++i) out.insert(atom_at(i));
  return out;
}

AtomSet Vocabulary::irregular() const {
  AtomSet out;
  for (std::size_t i = 0; i < atoms_.size(); ++i)
    if (atoms_[i].kind == AtomKind::Irregular) out.insert(atom_at(i));
  return out;
}

std::vector<AtomId> Vocabulary::by_name(const AtomSet& s) const {
  std::vector<AtomId> out = s.members();
  std::sort(out.begin(), out.end(), [&](AtomId a, AtomId b) { return name(a) < name(b); });
  return out;
}

std::string Vocabulary::format(const AtomSet& s) const {
  std::string out;
  for (AtomId a : s.members()) {
    if (!out.empty()) out += ' ';
    out += name(a);
  }
  return out;
}

// Rules and programs -------------------------------------------------------

namespace {

void sort_unique(std::vector<AtomId>& atoms) {
  std::sort(atoms.begin(), atoms.end());
  atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
}

bool contains_sorted(const std::vector<AtomId>& atoms, AtomId a) {
  return std::binary_search(atoms.begin(), atoms.end(), a);
}

void collect_atoms(const Rule& r, AtomSet& out) {
  if (r.head) out.insert(*r.head);
  for (AtomId a : r.pos) out.insert(a);
  for (AtomId a : r.neg) out.insert(a);
  for (AtomId a : r.dneg) out.insert(a);
}

void check_reserved(std::string_view name) {
  if (name.empty()) throw Error(Errc::SyntaxError, "empty atom name");
  if (name.starts_with(kReservedPrefix))
    throw Error(Errc::ReservedPrefix, "name '" + std::string(name) + "' uses the reserved prefix '" +
                                          std::string(kReservedPrefix) + "'");
}

}  // namespace

Rule make_rule(std::optional<AtomId> head, std::vector<AtomId> pos, std::vector<AtomId> neg,
               std::vector<AtomId> dneg) {
  Rule r{head, std::move(pos), std::move(neg), std::move(dneg)};
  sort_unique(r.pos);
  sort_unique(r.neg);
  sort_unique(r.dneg);
  std::erase_if(r.dneg, [&](AtomId a) { return contains_sorted(r.pos, a); });
  return r;
}

std::vector<std::string> Program::constraint_variables() const {
  std::vector<LinearConstraint> cs;
  for (const auto& [atom, c] : gamma_) cs.push_back(c);
  return variables_of(cs);
}

Program Program::with_facts(const AtomSet& facts) const {
  Program out = *this;
  for (AtomId a : facts.members()) {
    out.rules_.push_back(make_rule(a, {}));
    out.atoms_.insert(a);
  }
  return out;
}

Program Program::with_rules(std::vector<Rule> rules) const {
  Program out;
  out.vocab_ = vocab_;
  out.gamma_ = gamma_;
  out.rules_ = std::move(rules);
  for (const Rule& r : out.rules_) collect_atoms(r, out.atoms_);
  return out;
}

AtomId ProgramBuilder::regular(std::string_view name) {
  check_reserved(name);
  return program_.vocab_.add(name, AtomKind::Regular);
}

std::string bar_name(const LinearConstraint& c) { return "|" + to_string(normalize(c)) + "|"; }

AtomId ProgramBuilder::irregular(const LinearConstraint& c) {
  const LinearConstraint n = normalize(c);
  const std::string key = to_string(n);
  if (auto it = by_constraint_.find(key); it != by_constraint_.end()) return it->second;
  return irregular("|" + key + "|", n);
}

AtomId ProgramBuilder::irregular(std::string_view name, const LinearConstraint& c) {
  check_reserved(name);
  for (const auto& var : c.expr.variables())
    if (var.starts_with(kReservedPrefix))
      throw Error(Errc::ReservedPrefix, "variable '" + var + "' uses the reserved prefix '" +
                                            std::string(kReservedPrefix) + "'");
  const LinearConstraint n = normalize(c);
  const std::string key = to_string(n);
  const auto existing = program_.vocab_.find(name);
  const AtomId id = program_.vocab_.add(name, AtomKind::Irregular);
  if (auto it = by_constraint_.find(key); it != by_constraint_.end() && it->second != id)
    throw Error(Errc::GammaNotInjective, "atoms '" + program_.vocab_.name(it->second) + "' and '" +
                                             std::string(name) + "' map to the same constraint " +
                                             key);
  if (existing && program_.gamma_.at(id) != n)
    throw Error(Errc::GammaNotInjective,
                "atom '" + std::string(name) + "' bound to two different constraints");
  program_.gamma_[id] = n;
  by_constraint_[key] = id;
  return id;
}

ProgramBuilder& ProgramBuilder::add(Rule rule) {
  if (rule.head && program_.vocab_.is_irregular(*rule.head))
    throw Error(Errc::IrregularHead,
                "irregular atom '" + program_.vocab_.name(*rule.head) + "' used as a rule head");
  collect_atoms(rule, program_.atoms_);
  program_.rules_.push_back(std::move(rule));
  return *this;
}

ProgramBuilder& ProgramBuilder::rule(std::optional<AtomId> head, std::vector<AtomId> pos,
                                     std::vector<AtomId> neg, std::vector<AtomId> dneg) {
  return add(make_rule(head, std::move(pos), std::move(neg), std::move(dneg)));
}

ProgramBuilder& ProgramBuilder::choice(AtomId head, std::vector<AtomId> pos,
                                       std::vector<AtomId> neg, std::vector<AtomId> dneg) {
  dneg.push_back(head);
  return add(make_rule(head, std::move(pos), std::move(neg), std::move(dneg)));
}

ProgramBuilder& ProgramBuilder::fact(AtomId head) { return add(make_rule(head, {})); }

Program ProgramBuilder::build() && { return std::move(program_); }

// Semantics ----------------------------------------------------------------

namespace {

bool negative_part_holds(const AtomSet& x, const Rule& r) {
  return std::none_of(r.neg.begin(), r.neg.end(), [&](AtomId a) { return x.contains(a); }) &&
         std::all_of(r.dneg.begin(), r.dneg.end(), [&](AtomId a) { return x.contains(a); });
}

bool positive_part_holds(const AtomSet& x, const Rule& r) {
  return std::all_of(r.pos.begin(), r.pos.end(), [&](AtomId a) { return x.contains(a); });
}

// Least fixpoint of the reduct of p relative to x, seeded with seed.
AtomSet reduct_fixpoint(const Program& p, const AtomSet& x, const AtomSet& seed) {
  AtomSet model = seed;
  std::vector<const Rule*> active;
  for (const Rule& r : p.rules())
    if (r.head && negative_part_holds(x, r)) active.push_back(&r);
  bool changed = true;
  while (changed) {
    changed = false;
    for (const Rule* r : active) {
      if (!model.contains(*r->head) && positive_part_holds(model, *r)) {
        model.insert(*r->head);
        changed = true;
      }
    }
  }
  return model;
}

bool answer_set_with_seed(const Program& p, const AtomSet& x, const AtomSet& seed) {
  if (reduct_fixpoint(p, x, seed) != x) return false;
  // A surviving denial whose positive body holds in x is violated.
  return std::none_of(p.rules().begin(), p.rules().end(), [&](const Rule& r) {
    return !r.head && negative_part_holds(x, r) && positive_part_holds(x, r);
  });
}

}  // namespace

bool satisfies_body(const AtomSet& x, const Rule& r) {
  return positive_part_holds(x, r) && negative_part_holds(x, r);
}

bool satisfies_rule(const AtomSet& x, const Rule& r) {
  if (!satisfies_body(x, r)) return true;
  return r.head && x.contains(*r.head);
}

bool satisfies_program(const AtomSet& x, const Program& p) {
  return std::all_of(p.rules().begin(), p.rules().end(),
                     [&](const Rule& r) { return satisfies_rule(x, r); });
}

Program reduct(const Program& p, const AtomSet& x) {
  std::vector<Rule> rules;
  for (const Rule& r : p.rules())
    if (negative_part_holds(x, r)) rules.push_back(make_rule(r.head, r.pos));
  return p.with_rules(std::move(rules));
}

AtomSet least_model(const Program& p, const AtomSet& seed) {
  AtomSet model = seed;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const Rule& r : p.rules()) {
      if (r.head && !model.contains(*r.head) && positive_part_holds(model, r)) {
        model.insert(*r.head);
        changed = true;
      }
    }
  }
  return model;
}

bool is_answer_set(const Program& p, const AtomSet& x) { return answer_set_with_seed(p, x, {}); }

bool is_input_answer_set(const Program& p, const AtomSet& x, const AtomSet& iota) {
  return answer_set_with_seed(p, x, x & iota);
}

void for_each_subset(const Vocabulary& vocab, const AtomSet& atoms, std::size_t cap,
                     const std::function<void(const AtomSet&)>& visit) {
  const std::vector<AtomId> order = vocab.by_name(atoms);
  if (order.size() > cap || order.size() >= 63)
    throw Error(Errc::OracleCapExceeded, std::to_string(order.size()) +
                                             " atoms exceed the oracle cap of " +
                                             std::to_string(cap));
  const std::size_t n = order.size();
  const std::uint64_t count = std::uint64_t{1} << n;
  for (std::uint64_t mask = 0; mask < count; ++mask) {
    AtomSet x;
    for (std::size_t i = 0; i < n; ++i)
      if ((mask >> (n - 1 - i)) & 1U) x.insert(order[i]);
    visit(x);
  }
}

std::vector<AtomSet> enumerate_answer_sets(const Program& p, std::size_t cap) {
  std::vector<AtomSet> out;
  for_each_subset(p.vocabulary(), p.atoms(), cap, [&](const AtomSet& x) {
    if (is_answer_set(p, x)) out.push_back(x);
  });
  return out;
}

void require_heads_disjoint(const Program& p, const AtomSet& iota) {
  const AtomSet clash = heads(p) & iota;
  if (!clash.empty())
    throw Error(Errc::HeadsIntersectInput,
                "input atoms occur as heads: " + p.vocabulary().format(clash));
}

std::vector<AtomSet> input_answer_sets(const Program& p, const AtomSet& iota, std::size_t cap) {
  require_heads_disjoint(p, iota);
  std::vector<AtomSet> out;
  for_each_subset(p.vocabulary(), p.atoms(), cap, [&](const AtomSet& x) {
    if (is_input_answer_set(p, x, iota)) out.push_back(x);
  });
  return out;
}

DependencyGraph dependency_graph(const Program& p) {
  DependencyGraph g;
  g.vertices = p.atoms();
  for (const Rule& r : p.rules()) {
    if (!r.head) continue;
    for (AtomId b : r.pos) g.edges.emplace_back(*r.head, b);
  }
  std::sort(g.edges.begin(), g.edges.end());
  g.edges.erase(std::unique(g.edges.begin(), g.edges.end()), g.edges.end());
  return g;
}

bool is_tight(const Program& p) {
  const DependencyGraph g = dependency_graph(p);
  const std::size_t n = p.vocabulary().size();
  std::vector<std::vector<std::size_t>> succ(n);
  for (const auto& [from, to] : g.edges) succ[index(from)].push_back(index(to));

  enum class Mark : std::uint8_t { White, Grey, Black };
  std::vector<Mark> mark(n, Mark::White);
  // Iterative DFS; a grey successor closes a cycle.
  for (std::size_t root = 0; root < n; ++root) {
    if (mark[root] != Mark::White) continue;
    std::vector<std::pair<std::size_t, std::size_t>> stack{{root, 0}};
    mark[root] = Mark::Grey;
    while (!stack.empty()) {
      auto& [node, next] = stack.back();
      if (next < succ[node].size()) {
        const std::size_t child = succ[node][next++];
        if (mark[child] == Mark::Grey) return false;
        if (mark[child] == Mark::White) {
          mark[child] = Mark::Grey;
          stack.emplace_back(child, 0);
        }
      } else {
        mark[node] = Mark::Black;
        stack.pop_back();
      }
    }
  }
  return true;
}

AtomSet heads(const Program& p) {
  AtomSet out;
  for (const Rule& r : p.rules())
    if (r.head) out.insert(*r.head);
  return out;
}

}  // namespace casp
