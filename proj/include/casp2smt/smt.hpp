// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The casp2smt Authors

#pragma once

#include "casp2smt/completion.hpp"
#include "casp2smt/lincon.hpp"
#include "casp2smt/program.hpp"

#include <chrono>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace casp {

enum class Logic { QF_LIA, QF_LRA };
enum class Sort { Bool, Int, Real };

std::string_view to_string(Logic logic);
std::string_view to_string(Sort sort);
Logic logic_for(LexiconKind kind);

struct SmtDecl {
  std::string symbol;
  Sort sort = Sort::Bool;

  friend bool operator==(const SmtDecl&, const SmtDecl&) = default;
};

/// An SMT-LIB 2 script without the trailing (check-sat)/(get-model), plus the
/// symbol maps needed to read models back.
struct SmtScript {
  Logic logic = Logic::QF_LIA;
  /// Sorted by symbol.
  std::vector<SmtDecl> decls;
  std::vector<std::string> asserts;

  /// Atom of the clause vocabulary -> Bool symbol.
  std::map<AtomId, std::string> atom_symbols;
  /// Constraint variable -> Int/Real symbol.
  std::map<std::string, std::string, std::less<>> var_symbols;

  const SmtDecl* find_decl(std::string_view symbol) const;

  /// (set-logic ...), declarations, assertions; one command per line.
  std::string text() const;
  /// text() followed by (check-sat) and (get-model).
  std::string query() const;
};

/// Theory-atom rendering of a constraint, e.g. "(>= x 12)".
std::string render_constraint(const LinearConstraint& c, Sort sort,
                              const std::map<std::string, std::string, std::less<>>& symbols);
/// Integer numerals as "12" / "(- 3)"; others as "(/ 9 2)".
std::string render_numeral(const Rational& value, Sort sort);

/// Declares a Bool symbol per atom occurring in the clauses and an Int or Real
/// symbol per variable of their irregular atoms; bridges every irregular atom
/// a as (= b_a gamma(a)); asserts each clause as a disjunction.
/// Atoms in also_declare are declared (and bridged) even when every clause
/// mentioning them was dropped as a tautology.
/// Throws Errc::MissingGamma for an irregular atom without a constraint.
SmtScript emit_script(const ClauseSet& clauses, const std::map<AtomId, LinearConstraint>& gamma,
                      LexiconKind kind, const AtomSet& also_declare = {});

/// Adds lo <= v <= hi for each listed variable that the script declares.
SmtScript assert_box(SmtScript s, const std::vector<std::string>& vars, Box box);

struct SmtModel {
  std::map<std::string, bool, std::less<>> bools;
  std::map<std::string, Rational, std::less<>> nums;

  friend bool operator==(const SmtModel&, const SmtModel&) = default;
};

/// Reads (define-fun s () Sort value) entries, with or without an enclosing
/// (model ...). Throws Errc::SolverProtocolError.
SmtModel parse_model(std::string_view text);

enum class SolverStatus { Sat, Unsat, Unknown };

struct SolverResult {
  SolverStatus status = SolverStatus::Unknown;
  SmtModel model;
  std::string output;
};

struct SolverOptions {
  /// Whitespace-separated command; the script is written to its stdin.
  std::string command = "z3 -in";
  std::chrono::milliseconds timeout{60'000};
};

/// Documented invocation shapes.
inline constexpr std::string_view kZ3StylePreset = "z3 -in";
inline constexpr std::string_view kCvcStylePreset = "cvc5 --lang smt2 -";

/// Environment variable overriding the solver command.
inline constexpr const char* kSolverEnv = "CASP2SMT_SOLVER";

/// Runs one solver process on s.query(). Timeouts, solver-reported unknown
/// and output without a check-sat answer map to Unknown. Declared symbols the
/// model omits get false/0. Throws Errc::SolverSpawnFailure, and
/// Errc::SolverProtocolError when the solver reports an error before its
/// answer or sends a malformed model.
SolverResult run_solver(const SmtScript& s, const SolverOptions& options);

/// s plus (assert (not (and ...))) over the scope symbols as valued in m.
/// Int/Real symbols block their value with (= s v). Throws Errc::UnknownSymbol.
SmtScript block_model(SmtScript s, const SmtModel& m, const std::set<std::string>& scope);

struct Decoded {
  AtomSet atoms;
  Valuation valuation;
};

/// Atoms of vocab whose symbol is true, and the values of the constraint
/// variables in vars.
Decoded decode(const SmtModel& m, const SmtScript& s, const AtomSet& vocab,
               const std::vector<std::string>& vars);

}  // namespace casp
