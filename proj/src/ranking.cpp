// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The casp2smt Authors

#include "casp2smt/ranking.hpp"

#include "casp2smt/error.hpp"

#include <algorithm>
#include <cctype>

namespace casp {

namespace {

unsigned level_of(const LevelRanking& lr, AtomId a, const Vocabulary& vocab) {
  auto it = lr.find(a);
  if (it == lr.end())
    throw Error(Errc::PartialRanking, "no level for atom '" + vocab.name(a) + "'");
  return it->second;
}

bool ranked_support(const Program& p, const AtomSet& x, const AtomSet& iota,
                    const LevelRanking& lr, AtomId a) {
  const unsigned level = level_of(lr, a, p.vocabulary());
  return std::any_of(p.rules().begin(), p.rules().end(), [&](const Rule& r) {
    if (r.head != a || !satisfies_body(x, r)) return false;
    return std::all_of(r.pos.begin(), r.pos.end(), [&](AtomId b) {
      if (iota.contains(b)) return true;
      return level_of(lr, b, p.vocabulary()) + 1 <= level;
    });
  });
}

bool check_ranking(const Program& p, const AtomSet& x, const AtomSet& iota,
                   const LevelRanking& lr) {
  const std::vector<AtomId> ranked = (x - iota).members();
  for (AtomId a : ranked) level_of(lr, a, p.vocabulary());
  return std::all_of(ranked.begin(), ranked.end(),
                     [&](AtomId a) { return ranked_support(p, x, iota, lr, a); });
}

}  // namespace

bool check_level_ranking(const Program& p, const AtomSet& x, const LevelRanking& lr) {
  return check_ranking(p, x, {}, lr);
}

bool check_input_level_ranking(const Program& p, const AtomSet& x, const AtomSet& iota,
                               const LevelRanking& lr) {
  require_heads_disjoint(p, iota);
  return check_ranking(p, x, iota, lr);
}

std::optional<LevelRanking> construct_level_ranking(const Program& p, const AtomSet& x,
                                                    const AtomSet& iota) {
  const AtomSet target = x - iota;
  AtomSet derived = x & iota;
  LevelRanking lr;
  for (unsigned level = 0;; ++level) {
    AtomSet next;
    for (const Rule& r : p.rules()) {
      if (!r.head || !target.contains(*r.head) || derived.contains(*r.head)) continue;
      if (!satisfies_body(x, r)) continue;
      const bool ready = std::all_of(r.pos.begin(), r.pos.end(),
                                     [&](AtomId b) { return derived.contains(b); });
      if (ready) next.insert(*r.head);
    }
    if (next.empty()) break;
    for (AtomId a : next.members()) lr.emplace(a, level);
    derived = derived | next;
  }
  if (!target.is_subset_of(derived)) return std::nullopt;
  return lr;
}

bool exists_level_ranking(const Program& p, const AtomSet& x, std::size_t cap) {
  return exists_input_level_ranking(p, x, {}, cap);
}

bool exists_input_level_ranking(const Program& p, const AtomSet& x, const AtomSet& iota,
                                std::size_t cap) {
  if (x.size() > cap)
    throw Error(Errc::OracleCapExceeded,
                std::to_string(x.size()) + " atoms exceed the oracle cap of " + std::to_string(cap));
  require_heads_disjoint(p, iota);
  return construct_level_ranking(p, x, iota).has_value();
}

const std::string& RankVarNamer::name(AtomId a) {
  if (auto it = names_.find(a); it != names_.end()) return it->second;
  if (vocab_->is_irregular(a))
    throw Error(Errc::RankVarForIrregular,
                "irregular atom '" + vocab_->name(a) + "' is never ranked");
  std::string base(kRankPrefix);
  for (char ch : vocab_->name(a))
    base += (std::isalnum(static_cast<unsigned char>(ch)) || ch == '_') ? ch : '_';
  std::string candidate = base;
  for (std::size_t suffix = 1; used_.contains(candidate); ++suffix)
    candidate = base + "_" + std::to_string(suffix);
  used_.insert(candidate);
  return names_.emplace(a, std::move(candidate)).first->second;
}

std::vector<std::string> RankingFormula::rank_variables() const {
  std::vector<std::string> out;
  for (const auto& [atom, var] : rank_vars) out.push_back(var);
  std::sort(out.begin(), out.end());
  return out;
}

RankingFormula build_ranking_formula(const Program& p, const AtomSet& iota, RankingMode mode) {
  require_heads_disjoint(p, iota);
  RankingFormula out{Formula::top(), p.vocabulary(), {}, {}};
  RankVarNamer namer(p.vocabulary());
  std::map<std::pair<AtomId, AtomId>, AtomId> pair_atoms;

  auto ranking_atom = [&](AtomId a, AtomId b) {
    const auto key = std::make_pair(a, b);
    if (auto it = pair_atoms.find(key); it != pair_atoms.end()) return it->second;
    const std::string& lr_a = namer.name(a);
    const std::string& lr_b = namer.name(b);
    out.rank_vars.emplace(a, lr_a);
    out.rank_vars.emplace(b, lr_b);
    LinExpr expr;
    expr.add(lr_a, 1).add(lr_b, -1);
    const LinearConstraint c = normalize({std::move(expr), Relation::GE, Rational(1), false});
    const AtomId id = out.vocabulary.add(bar_name(c), AtomKind::Irregular);
    out.ranking_atoms.emplace(id, c);
    pair_atoms.emplace(key, id);
    return id;
  };

  std::vector<Formula> parts;
  for (std::size_t i = 0; i < p.vocabulary().size(); ++i) {
    const AtomId a = atom_at(i);
    if (iota.contains(a)) continue;
    std::vector<const Rule*> rules;
    bool any_ranked = false;
    for (const Rule& r : p.rules()) {
      if (r.head != a) continue;
      rules.push_back(&r);
      any_ranked = any_ranked || std::any_of(r.pos.begin(), r.pos.end(),
                                             [&](AtomId b) { return !iota.contains(b); });
    }
    if (mode == RankingMode::Skip && !any_ranked) continue;

    std::vector<Formula> disjuncts;
    for (const Rule* r : rules) {
      std::vector<AtomId> ranked;
      for (AtomId b : r->pos)
        if (!iota.contains(b)) ranked.push_back(b);
      if (std::find(ranked.begin(), ranked.end(), a) != ranked.end()) continue;
      std::vector<Formula> conj{body_formula(*r)};
      for (AtomId b : ranked) conj.push_back(Formula::atom(ranking_atom(a, b)));
      disjuncts.push_back(Formula::conjunction(std::move(conj)));
    }
    parts.push_back(Formula::implies(Formula::atom(a), Formula::disjunction(std::move(disjuncts))));
  }
  out.formula = Formula::conjunction(std::move(parts));
  return out;
}

}  // namespace casp
