// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The casp2smt Authors

#include "casp2smt/completion.hpp"

#include "casp2smt/error.hpp"

#include <algorithm>
#include <unordered_map>

namespace casp {

// Formula ------------------------------------------------------------------

Formula Formula::make(Kind kind, std::vector<Formula> operands) {
  return Formula(std::make_shared<const Node>(Node{kind, AtomId{}, std::move(operands)}));
}

Formula Formula::atom(AtomId a) {
  return Formula(std::make_shared<const Node>(Node{Kind::Atom, a, {}}));
}

Formula Formula::bottom() {
  static const Formula instance = make(Kind::Bottom, {});
  return instance;
}

Formula Formula::top() {
  static const Formula instance = make(Kind::And, {});
  return instance;
}

Formula Formula::negation(Formula f) { return make(Kind::Not, {std::move(f)}); }

Formula Formula::conjunction(std::vector<Formula> operands) {
  std::vector<Formula> flat;
  for (auto& f : operands) {
    if (f.kind() == Kind::And) {
      flat.insert(flat.end(), f.operands().begin(), f.operands().end());
    } else {
      flat.push_back(std::move(f));
    }
  }
  if (flat.size() == 1) return flat.front();
  return make(Kind::And, std::move(flat));
}

Formula Formula::disjunction(std::vector<Formula> operands) {
  std::vector<Formula> flat;
  for (auto& f : operands) {
    if (f.kind() == Kind::Or) {
      flat.insert(flat.end(), f.operands().begin(), f.operands().end());
    } else {
      flat.push_back(std::move(f));
    }
  }
  if (flat.size() == 1) return flat.front();
  return make(Kind::Or, std::move(flat));
}

Formula Formula::implies(Formula lhs, Formula rhs) {
  return make(Kind::Implies, {std::move(lhs), std::move(rhs)});
}

Formula Formula::iff(Formula lhs, Formula rhs) {
  return make(Kind::Iff, {std::move(lhs), std::move(rhs)});
}

bool Formula::eval(const AtomSet& x) const {
  const auto& ops = operands();
  switch (kind()) {
    case Kind::Atom: return x.contains(atom_id());
    case Kind::Bottom: return false;
    case Kind::Not: return !ops[0].eval(x);
    case Kind::And:
      return std::all_of(ops.begin(), ops.end(), [&](const Formula& f) { return f.eval(x); });
    case Kind::Or:
      return std::any_of(ops.begin(), ops.end(), [&](const Formula& f) { return f.eval(x); });
    case Kind::Implies: return !ops[0].eval(x) || ops[1].eval(x);
    case Kind::Iff: return ops[0].eval(x) == ops[1].eval(x);
  }
  return false;
}

AtomSet Formula::atoms() const {
  if (kind() == Kind::Atom) return AtomSet{atom_id()};
  AtomSet out;
  for (const auto& f : operands()) out = out | f.atoms();
  return out;
}

std::string Formula::to_string(const Vocabulary& vocab) const {
  auto sub = [&](const Formula& f) {
    const bool simple = f.kind() == Kind::Atom || f.kind() == Kind::Bottom ||
                        f.kind() == Kind::Not || f.operands().empty();
    return simple ? f.to_string(vocab) : "(" + f.to_string(vocab) + ")";
  };
  auto join = [&](std::string_view sep, std::string_view empty) {
    if (operands().empty()) return std::string(empty);
    std::string out;
    for (const auto& f : operands()) {
      if (!out.empty()) out += sep;
      out += sub(f);
    }
    return out;
  };
  switch (kind()) {
    case Kind::Atom: return vocab.name(atom_id());
    case Kind::Bottom: return "false";
    case Kind::Not: return "~" + sub(operands()[0]);
    case Kind::And: return join(" & ", "true");
    case Kind::Or: return join(" | ", "false");
    case Kind::Implies: return sub(operands()[0]) + " -> " + sub(operands()[1]);
    case Kind::Iff: return sub(operands()[0]) + " <-> " + sub(operands()[1]);
  }
  return {};
}

// Completion ---------------------------------------------------------------

Formula body_formula(const Rule& r) {
  std::vector<Formula> lits;
  for (AtomId a : r.pos) lits.push_back(Formula::atom(a));
  for (AtomId a : r.neg) lits.push_back(Formula::negation(Formula::atom(a)));
  for (AtomId a : r.dneg) lits.push_back(Formula::atom(a));
  return Formula::conjunction(std::move(lits));
}

Formula rule_formula(const Rule& r) {
  Formula head = r.head ? Formula::atom(*r.head) : Formula::bottom();
  if (r.is_fact()) return head;
  return Formula::implies(body_formula(r), std::move(head));
}

std::vector<Formula> bodies_of(const Program& p, AtomId a) {
  std::vector<Formula> out;
  for (const Rule& r : p.rules())
    if (r.head == a) out.push_back(body_formula(r));
  return out;
}

namespace {

Formula completion_for(const Program& p, const AtomSet& supported) {
  std::vector<Formula> parts;
  for (const Rule& r : p.rules()) parts.push_back(rule_formula(r));
  for (AtomId a : supported.members()) {
    parts.push_back(Formula::implies(Formula::atom(a), Formula::disjunction(bodies_of(p, a))));
  }
  return Formula::conjunction(std::move(parts));
}

}  // namespace

Formula completion(const Program& p) { return completion_for(p, p.vocabulary().all()); }

Formula input_completion(const Program& p, const AtomSet& iota) {
  require_heads_disjoint(p, iota);
  return completion_for(p, p.vocabulary().all() - iota);
}

std::vector<AtomSet> models_of(const Formula& f, const Vocabulary& names, const AtomSet& vocab,
                               std::size_t cap) {
  std::vector<AtomSet> out;
  for_each_subset(names, vocab, cap, [&](const AtomSet& x) {
    if (f.eval(x)) out.push_back(x);
  });
  return out;
}

// Clausification -----------------------------------------------------------

bool ClauseSet::satisfied_by(const AtomSet& x) const {
  return std::all_of(clauses.begin(), clauses.end(), [&](const Clause& c) {
    return std::any_of(c.begin(), c.end(), [&](const Literal& l) { return l.holds(x); });
  });
}

namespace {

Literal operator~(Literal l) { return {l.atom, !l.positive}; }

class Clausifier {
 public:
  explicit Clausifier(Vocabulary vocab) { out_.vocabulary = std::move(vocab); }

  ClauseSet run(const Formula& f) {
    top_level(f);
    return std::move(out_);
  }

 private:
  using Kind = Formula::Kind;

  void top_level(const Formula& f) {
    if (f.kind() == Kind::And) {
      for (const auto& g : f.operands()) top_level(g);
      return;
    }
    if (f.kind() == Kind::Iff) {
      top_level(Formula::implies(f.operands()[0], f.operands()[1]));
      top_level(Formula::implies(f.operands()[1], f.operands()[0]));
      return;
    }
    Clause clause;
    bool tautology = false;
    collect(f, true, clause, tautology);
    if (!tautology) emit(std::move(clause));
  }

  // Appends the disjuncts of f (or of ~f) to clause, descending through
  // connectives that stay disjunctive under the given polarity.
  void collect(const Formula& f, bool positive, Clause& clause, bool& tautology) {
    const auto& ops = f.operands();
    switch (f.kind()) {
      case Kind::Atom:
        clause.push_back({f.atom_id(), positive});
        return;
      case Kind::Not:
        collect(ops[0], !positive, clause, tautology);
        return;
      case Kind::Bottom:
        if (!positive) tautology = true;
        return;
      case Kind::And:
        if (ops.empty()) {
          if (positive) tautology = true;
          return;
        }
        if (!positive) {
          for (const auto& g : ops) collect(g, false, clause, tautology);
          return;
        }
        break;
      case Kind::Or:
        if (positive) {
          for (const auto& g : ops) collect(g, true, clause, tautology);
          return;
        }
        break;
      case Kind::Implies:
        if (positive) {
          collect(ops[0], false, clause, tautology);
          collect(ops[1], true, clause, tautology);
          return;
        }
        break;
      case Kind::Iff:
        break;
    }
    const Literal l = define(f);
    clause.push_back(positive ? l : ~l);
  }

  // Literal equivalent to f, adding definition clauses for compound formulas.
  Literal define(const Formula& f) {
    const auto& ops = f.operands();
    switch (f.kind()) {
      case Kind::Atom: return {f.atom_id(), true};
      case Kind::Not: return ~define(ops[0]);
      case Kind::Bottom: {
        const Literal d = fresh_cached(f);
        if (!defined_.contains(f.identity())) emit({~d});
        defined_[f.identity()] = d;
        alive_.push_back(f);
        return d;
      }
      case Kind::Iff: {
        const Formula expanded = Formula::conjunction(
            {Formula::implies(ops[0], ops[1]), Formula::implies(ops[1], ops[0])});
        return define(expanded);
      }
      default: break;
    }
    if (auto it = defined_.find(f.identity()); it != defined_.end()) return it->second;

    std::vector<Literal> lits;
    bool conjunctive = f.kind() == Kind::And;
    if (f.kind() == Kind::Implies) {
      lits = {~define(ops[0]), define(ops[1])};
    } else {
      for (const auto& g : ops) lits.push_back(define(g));
    }
    const Literal d = fresh();
    defined_[f.identity()] = d;
    alive_.push_back(f);
    if (conjunctive) {
      // d <-> l1 & ... & ln
      Clause back{d};
      for (const Literal& l : lits) {
        emit({~d, l});
        back.push_back(~l);
      }
      emit(std::move(back));
    } else {
      // d <-> l1 | ... | ln
      Clause forth{~d};
      for (const Literal& l : lits) {
        emit({d, ~l});
        forth.push_back(l);
      }
      emit(std::move(forth));
    }
    return d;
  }

  Literal fresh_cached(const Formula& f) {
    if (auto it = defined_.find(f.identity()); it != defined_.end()) return it->second;
    return fresh();
  }

  Literal fresh() {
    std::string name;
    do {
      name = std::string(kDefinitionPrefix) + std::to_string(++counter_);
    } while (out_.vocabulary.find(name));
    const AtomId a = out_.vocabulary.add(name, AtomKind::Regular);
    out_.fresh_atoms.insert(a);
    return {a, true};
  }

  void emit(Clause clause) {
    Clause clean;
    for (const Literal& l : clause) {
      if (std::find(clean.begin(), clean.end(), ~l) != clean.end()) return;
      if (std::find(clean.begin(), clean.end(), l) == clean.end()) clean.push_back(l);
    }
    out_.clauses.push_back(std::move(clean));
  }

  ClauseSet out_;
  std::unordered_map<const void*, Literal> defined_;
  // Keeps cached nodes alive so their addresses are never reused.
  std::vector<Formula> alive_;
  std::size_t counter_ = 0;
};

}  // namespace

ClauseSet to_clauses(const Formula& f, Vocabulary vocab) {
  return Clausifier(std::move(vocab)).run(f);
}

AtomSet project_model(const AtomSet& m, const ClauseSet& c) {
  if (!c.satisfied_by(m))
    throw Error(Errc::NotAModel, "assignment {" + c.vocabulary.format(m) + "} violates a clause");
  return m - c.fresh_atoms;
}

}  // namespace casp
