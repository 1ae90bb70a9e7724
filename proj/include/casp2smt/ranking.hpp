// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The casp2smt Authors

#pragma once

#include "casp2smt/completion.hpp"
#include "casp2smt/lincon.hpp"
#include "casp2smt/program.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace casp {

/// Level of each ranked atom.
using LevelRanking = std::map<AtomId, unsigned>;

/// For every a in x, some body B of a holds in x with lr(a)-1 >= lr(b) for
/// all b in B+. Throws Errc::PartialRanking when lr misses an atom of x.
bool check_level_ranking(const Program& p, const AtomSet& x, const LevelRanking& lr);

/// As above, ranking only x \ iota and ignoring positive body atoms in iota.
/// Throws Errc::PartialRanking and Errc::HeadsIntersectInput.
bool check_input_level_ranking(const Program& p, const AtomSet& x, const AtomSet& iota,
                               const LevelRanking& lr);

/// Builds the ranking by stratifying x: level i holds the atoms first derived
/// in round i of the immediate-consequence operator restricted to bodies x
/// satisfies, with iota atoms available from the start. Empty when some atom
/// of x \ iota is never derived.
std::optional<LevelRanking> construct_level_ranking(const Program& p, const AtomSet& x,
                                                    const AtomSet& iota = {});

/// Throws Errc::OracleCapExceeded when |x| exceeds cap.
bool exists_level_ranking(const Program& p, const AtomSet& x,
                          std::size_t cap = kDefaultOracleCap);
bool exists_input_level_ranking(const Program& p, const AtomSet& x, const AtomSet& iota,
                                std::size_t cap = kDefaultOracleCap);

/// Prefix of rank variable names.
inline constexpr std::string_view kRankPrefix = "__lr_";

/// Deterministic, injective rank-variable names: "__lr_" plus the atom name
/// with characters outside [A-Za-z0-9_] replaced by '_'. A collision appends
/// "_1", "_2", ... in first-use order.
class RankVarNamer {
 public:
  explicit RankVarNamer(const Vocabulary& vocab) : vocab_(&vocab) {}

  /// Throws Errc::RankVarForIrregular for irregular atoms.
  const std::string& name(AtomId a);

 private:
  const Vocabulary* vocab_;
  std::map<AtomId, std::string> names_;
  std::set<std::string> used_;
};

enum class RankingMode {
  /// Omit implications for atoms whose every body has no non-input positive
  /// atom; the input completion already contains them.
  Skip,
  /// One implication per atom outside iota.
  Full,
};

struct RankingFormula {
  Formula formula;
  /// Source vocabulary extended by the ranking atoms.
  Vocabulary vocabulary;
  /// Ranking atom -> lr_a - lr_b >= 1.
  std::map<AtomId, LinearConstraint> ranking_atoms;
  /// Atom -> its rank variable, for every atom mentioned by a ranking atom.
  std::map<AtomId, std::string> rank_vars;

  std::vector<std::string> rank_variables() const;
};

/// The conjunction, over atoms a outside iota, of
///   a -> OR_{B: B+\iota != {}} (B & AND_{b in B+\iota} |lr_a - lr_b >= 1|)
///        | OR_{B: B+\iota == {}} B.
/// One ranking atom per ordered pair (a, b). A body with a itself in B+\iota
/// can never be ranked and contributes no disjunct.
/// Throws Errc::HeadsIntersectInput.
RankingFormula build_ranking_formula(const Program& p, const AtomSet& iota,
                                     RankingMode mode = RankingMode::Skip);

}  // namespace casp
