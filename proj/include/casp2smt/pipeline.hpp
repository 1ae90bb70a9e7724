// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The casp2smt Authors

#pragma once

#include "casp2smt/lincon.hpp"
#include "casp2smt/program.hpp"
#include "casp2smt/ranking.hpp"
#include "casp2smt/smt.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace casp {

enum class Fragment { IL, DL, L };
std::string_view to_string(Fragment f);

/// L for the real lexicon. Under the integer lexicon DL when every constraint
/// is a unit-coefficient difference x - y ~ k (ranking constraints always
/// are), IL otherwise. A program without constraints counts as DL.
Fragment classify_fragment(const Program& p, LexiconKind kind);

enum class SolveMode { Auto, TightOnly, ForceRanking };
enum class Encoding { ICompOnly, ICompPlusRanking };
enum class SolveStatus { Sat, Unsat, Unknown };

std::string_view to_string(Encoding e);
std::string_view to_string(SolveStatus s);

inline constexpr Box kDefaultOracleBox{-32, 32};

struct SolveConfig {
  LexiconKind logic = LexiconKind::IntegerLinear;
  SolveMode mode = SolveMode::Auto;
  RankingMode ranking = RankingMode::Skip;
  /// Adds 0 <= lr <= |At(P)| for every rank variable.
  bool bound_ranks = false;
  /// Number of results wanted; 0 means all.
  std::size_t enumerate = 0;
  /// Report a witnessing valuation with each answer set. Under the integer
  /// lexicon with enumerate != 1 every valuation in var_box is listed.
  bool extended = false;
  /// Bounds every program variable. The oracle falls back to kDefaultOracleBox.
  std::optional<Box> var_box;
  bool oracle_only = false;
  std::size_t oracle_cap = kDefaultOracleCap;
  SolverOptions solver;
  /// Receives the first script sent to the solver.
  std::optional<std::filesystem::path> emit_path;
};

/// Throws Errc::InconsistentConfig.
void check_config(const SolveConfig& cfg);

struct ExtendedAnswerSet {
  AtomSet atoms;
  std::optional<Valuation> valuation;

  friend bool operator==(const ExtendedAnswerSet&, const ExtendedAnswerSet&) = default;
};

struct SolveReport {
  bool tight = true;
  Encoding encoding = Encoding::ICompOnly;
  /// Sorted by atom ids, then valuation.
  std::vector<ExtendedAnswerSet> results;
  SolveStatus status = SolveStatus::Unknown;
  Vocabulary vocabulary;
};

/// The script the SMT path starts from: IComp(P, irregulars), conjoined with
/// the ranking formula when the configuration calls for it, plus box bounds.
SmtScript build_script(const Program& p, const SolveConfig& cfg);

/// Answer sets of P (over At(P)), with valuations when cfg.extended.
/// Throws Errc::NotTight, Errc::InconsistentConfig, and solver or oracle
/// errors.
SolveReport solve(const Program& p, const SolveConfig& cfg);

/// Definition check: x is an input answer set of P for its irregular atoms and
/// the induced constraint problem has a solution in box.
bool verify(const Program& p, const AtomSet& x, Box box,
            LexiconKind kind = LexiconKind::IntegerLinear);

/// {gamma(a) : a in x} and the negation of gamma(a) for the irregular atoms of
/// At(P) outside x.
std::vector<LinearConstraint> induced_constraints(const Program& p, const AtomSet& x);

enum class ReportFormat { Text, JsonLines };

std::string render_report(const SolveReport& r, ReportFormat format);

}  // namespace casp
