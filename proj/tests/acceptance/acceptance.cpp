// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The casp2smt Authors

// One line per acceptance criterion: [PASS], [FAIL] or [SKIP], the criterion
// number, what was checked, and the elapsed time. Exit status is non-zero when
// a criterion fails, unless it fails exactly as listed in kKnownDiscrepancies.

#include "casp2smt/completion.hpp"
#include "casp2smt/error.hpp"
#include "casp2smt/lincon.hpp"
#include "casp2smt/parser.hpp"
#include "casp2smt/pipeline.hpp"
#include "casp2smt/program.hpp"
#include "casp2smt/ranking.hpp"
#include "casp2smt/smt.hpp"

#include "../support/fixtures.hpp"
#include "../support/generators.hpp"
#include "../support/oracles.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace casp;
using namespace casp::testing;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
  bool skipped = false;
};

// Criteria that fail because the reference claim itself does not hold. The
// README explains each one.
const std::set<int> kKnownDiscrepancies = {2};

int g_unexpected = 0;

void report(int id, std::string_view what, const std::function<Outcome()>& check) {
  const auto start = Clock::now();
  Outcome o;
  try {
    o = check();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(Clock::now() - start).count();
  const char* tag = o.skipped ? "SKIP" : o.pass ? "PASS" : "FAIL";
  std::string note;
  if (!o.skipped && kKnownDiscrepancies.contains(id)) {
    if (o.pass) {
      note = "; listed as a known discrepancy but passed";
      ++g_unexpected;
    } else {
      note = "; known discrepancy, see README";
    }
  } else if (!o.skipped && !o.pass) {
    ++g_unexpected;
  }
  char time[32];
  std::snprintf(time, sizeof time, "%.3fs", secs);
  std::cout << "[" << tag << "] " << id << ": " << what << " (" << o.detail << note << ", " << time
            << ")\n"
            << std::flush;
}

std::string show(const std::set<NameSet>& family) {
  std::string out = "{";
  for (const NameSet& s : family) {
    if (out.size() > 1) out += ", ";
    out += "{";
    bool first = true;
    for (const auto& n : s) {
      out += (first ? "" : ",") + n;
      first = false;
    }
    out += "}";
  }
  return out + "}";
}

std::set<NameSet> family_of(const SolveReport& r) {
  std::set<NameSet> out;
  for (const auto& e : r.results) out.insert(names(r.vocabulary, e.atoms));
  return out;
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

bool solver_available(const std::string& command) {
  if (command.empty()) return false;
  const std::string exe = command.substr(0, command.find(' '));
  if (exe.find('/') != std::string::npos) return std::filesystem::exists(exe);
  return std::system(("command -v " + exe + " >/dev/null 2>&1").c_str()) == 0;
}

// All assignments over `scope` of the formula, through the external solver.
std::set<NameSet> smt_models(const Formula& f, const Vocabulary& vocab,
                             const std::map<AtomId, LinearConstraint>& gamma,
                             const AtomSet& scope, const SolverOptions& opts) {
  const ClauseSet clauses = to_clauses(f, vocab);
  SmtScript s = emit_script(clauses, gamma, LexiconKind::IntegerLinear, scope);
  std::set<std::string> symbols;
  for (AtomId a : scope.members()) symbols.insert(s.atom_symbols.at(a));
  std::set<NameSet> out;
  for (int guard = 0; guard < 1000; ++guard) {
    const SolverResult r = run_solver(s, opts);
    if (r.status == SolverStatus::Unsat) return out;
    if (r.status != SolverStatus::Sat) throw std::runtime_error("solver answered unknown");
    out.insert(names(vocab, decode(r.model, s, scope, {}).atoms));
    s = block_model(std::move(s), r.model, symbols);
  }
  throw std::runtime_error("model enumeration did not terminate");
}

// Families for Example-size checks --------------------------------------------

const std::set<NameSet> kAcpFamily = {{"switch", "lightOn"}};
const std::set<NameSet> kPi1Family = {{"switch", "lightOn", "|x>=12|"}};

std::optional<Outcome> check_twelve(const SolveReport& r) {
  std::set<std::int64_t> xs;
  for (const auto& e : r.results) {
    if (names(r.vocabulary, e.atoms) != *kPi1Family.begin() || !e.valuation) return std::nullopt;
    const Rational v = e.valuation->at("x");
    if (v.denominator() != 1) return std::nullopt;
    xs.insert(v.numerator());
  }
  std::set<std::int64_t> want;
  for (std::int64_t v = 12; v <= 23; ++v) want.insert(v);
  const bool ok = r.results.size() == 12 && xs == want;
  std::ostringstream d;
  d << r.results.size() << " extended answer sets";
  if (!xs.empty()) d << ", x in [" << *xs.begin() << "," << *xs.rbegin() << "]";
  return Outcome{ok, d.str()};
}

// Random CAS programs shared by criteria 8 and 9.
std::vector<Program> cas_programs() {
  std::mt19937 rng(20261016);
  std::vector<Program> out;
  for (int i = 0; i < 300; ++i) {
    GenOptions opt;
    opt.max_regular = 5;
    opt.max_irregular = 3;
    opt.max_rules = 10;
    opt.num_vars = 1 + i % 2;
    opt.tight = i % 3 == 0;
    out.push_back(random_program(rng, opt));
  }
  return out;
}

std::vector<AtomSet> formula_models(const Program& p, RankingMode mode, Box box) {
  const AtomSet iota = p.irregular_atoms();
  const RankingFormula r = build_ranking_formula(p, iota, mode);
  std::map<AtomId, LinearConstraint> gamma = p.gamma();
  gamma.insert(r.ranking_atoms.begin(), r.ranking_atoms.end());
  const Formula f = Formula::conjunction({input_completion(p, iota), r.formula});
  return constraint_formula_models(p, f, gamma, r.rank_variables(), box);
}

}  // namespace

int main() {
  const Box box8{-8, 8};

  report(1, "answer sets of the light-switch program", [] {
    const auto start = Clock::now();
    const Program p = parse_program(kAcp);
    const auto found = names(p.vocabulary(), enumerate_answer_sets(p));
    const double secs = seconds_since(start);
    std::vector<AtomSet> by_minimality;
    for (const AtomSet& x : all_subsets(p.atoms()))
      if (minimal_model_answer_set(p, x)) by_minimality.push_back(x);
    const bool ok = found == kAcpFamily && names(p.vocabulary(), by_minimality) == kAcpFamily &&
                    secs < 0.1;
    return Outcome{ok, show(found) + ", enumeration " + std::to_string(secs) + "s"};
  });

  report(2, "completion models: Comp(acp) and IComp(Pi1, irregular atoms)", [] {
    const Program acp = parse_program(kAcp);
    const auto comp = names(acp.vocabulary(),
                            models_of(completion(acp), acp.vocabulary(), acp.vocabulary().all()));
    const Program pi1 = parse_program(kPi1);
    const AtomSet iota = pi1.irregular_atoms();
    const Formula icomp = input_completion(pi1, iota);
    const auto propositional =
        names(pi1.vocabulary(), models_of(icomp, pi1.vocabulary(), pi1.atoms()));
    const auto with_gamma =
        names(pi1.vocabulary(), constraint_formula_models(pi1, icomp, pi1.gamma(), {}, {0, 23}));
    const bool ok = comp == kAcpFamily && propositional == kPi1Family;
    return Outcome{ok, "Comp " + show(comp) + "; IComp " + show(propositional) +
                           "; IComp read with gamma " + show(with_gamma)};
  });

  report(3, "twelve extended answer sets of Pi1 in [0,23]", [] {
    const auto start = Clock::now();
    SolveConfig cfg;
    cfg.oracle_only = true;
    cfg.extended = true;
    cfg.var_box = Box{0, 23};
    cfg.enumerate = 0;
    const SolveReport r = solve(parse_program(kPi1), cfg);
    const double secs = seconds_since(start);
    auto o = check_twelve(r).value_or(Outcome{false, "wrong atoms or missing valuation"});
    o.pass = o.pass && secs < 1.0;
    return o;
  });

  report(4, "{x>4, x<5}: unsat over integers in [-100,100], sat over reals", [] {
    const std::vector<LinearConstraint> cs = {parse_constraint("x > 4"),
                                              parse_constraint("x < 5")};
    auto start = Clock::now();
    const bool int_sat =
        gcsp_solve_bounded(cs, LexiconKind::IntegerLinear, Box{-100, 100}).has_value();
    const double t_int = seconds_since(start);
    start = Clock::now();
    const bool real_sat = real_feasible_1d(cs);
    const double t_real = seconds_since(start);
    const bool brute = !brute_force_gcsp(cs, {"x"}, Box{-100, 100}).empty();
    const bool ok = !int_sat && !brute && real_sat && t_int < 0.01 && t_real < 0.01;
    return Outcome{ok, std::string("integer ") + (int_sat ? "sat" : "unsat") + ", real " +
                           (real_sat ? "sat" : "unsat")};
  });

  report(5, "500 programs: completion model is an answer set iff a level ranking exists", [] {
    const auto start = Clock::now();
    std::mt19937 rng(5);
    GenOptions opt;
    opt.max_regular = 8;
    opt.max_rules = 12;
    std::size_t models = 0, answer_sets = 0, bad = 0;
    for (int i = 0; i < 500; ++i) {
      const Program p = random_program(rng, opt);
      for (const AtomSet& x : models_of(completion(p), p.vocabulary(), p.vocabulary().all())) {
        ++models;
        const bool as = is_answer_set(p, x);
        answer_sets += as;
        if (as != exists_level_ranking(p, x) || as != minimal_model_answer_set(p, x)) ++bad;
        if (auto brute = brute_force_level_ranking(p, x, {}); brute && *brute != as) ++bad;
      }
    }
    const double secs = seconds_since(start);
    return Outcome{bad == 0 && secs < 30,
                   std::to_string(models) + " models, " + std::to_string(answer_sets) +
                       " answer sets, " + std::to_string(bad) + " counterexamples"};
  });

  report(6, "500 tight programs: IComp models equal input answer sets", [] {
    const auto start = Clock::now();
    std::mt19937 rng(6);
    GenOptions opt;
    opt.max_regular = 8;
    opt.tight = true;
    std::size_t bad = 0, sets = 0;
    for (int i = 0; i < 500; ++i) {
      const Program p = random_program(rng, opt);
      const AtomSet iota = random_input(rng, p);
      const auto models = models_of(input_completion(p, iota), p.vocabulary(), p.atoms());
      const auto answers = input_answer_sets(p, iota);
      std::vector<AtomSet> by_minimality;
      for (const AtomSet& x : all_subsets(p.atoms()))
        if (input_answer_set_by_minimality(p, x, iota)) by_minimality.push_back(x);
      const auto family = names(p.vocabulary(), models);
      sets += family.size();
      if (!is_tight(p) || family != names(p.vocabulary(), answers) ||
          family != names(p.vocabulary(), by_minimality))
        ++bad;
    }
    const double secs = seconds_since(start);
    return Outcome{bad == 0 && secs < 30,
                   std::to_string(sets) + " sets, " + std::to_string(bad) + " counterexamples"};
  });

  report(7, "500 triples: X |= IComp(P,iota) iff X |= Comp(P + facts X&iota)", [] {
    std::mt19937 rng(7);
    GenOptions opt;
    opt.max_regular = 8;
    std::size_t bad = 0, holds = 0;
    for (int i = 0; i < 500; ++i) {
      const Program p = random_program(rng, opt);
      const AtomSet iota = random_input(rng, p);
      AtomSet x;
      for (std::size_t k = 0; k < p.vocabulary().size(); ++k)
        if (rng() % 2) x.insert(atom_at(k));
      const bool lhs = input_completion(p, iota).eval(x);
      const bool rhs = completion(p.with_facts(x & iota)).eval(x);
      holds += lhs;
      if (lhs != rhs || lhs != satisfies_completion_directly(p, x, iota)) ++bad;
    }
    return Outcome{bad == 0, std::to_string(holds) + " satisfied, " + std::to_string(bad) +
                                 " counterexamples"};
  });

  const std::vector<Program> cas = cas_programs();

  report(8, "300 CAS programs: models of IComp & R equal answer sets by definition", [&] {
    const auto start = Clock::now();
    std::size_t bad = 0, sets = 0, nontight = 0;
    for (const Program& p : cas) {
      nontight += !is_tight(p);
      const auto formula = names(p.vocabulary(), formula_models(p, RankingMode::Skip, box8));
      const auto definition = names(p.vocabulary(), cas_answer_sets_by_definition(p, box8));
      std::vector<AtomSet> verified;
      for (const AtomSet& x : all_subsets(p.atoms()))
        if (verify(p, x, box8)) verified.push_back(x);
      SolveConfig cfg;
      cfg.oracle_only = true;
      cfg.var_box = box8;
      sets += definition.size();
      if (formula != definition || formula != names(p.vocabulary(), verified) ||
          formula != family_of(solve(p, cfg)))
        ++bad;
    }
    const double secs = seconds_since(start);
    return Outcome{bad == 0 && secs < 60,
                   std::to_string(sets) + " answer sets, " + std::to_string(nontight) +
                       " nontight programs, " + std::to_string(bad) + " counterexamples"};
  });

  report(9, "300 CAS programs: skip and full ranking give the same families", [&] {
    std::size_t bad = 0;
    for (const Program& p : cas) {
      SolveConfig skip, full;
      skip.oracle_only = full.oracle_only = true;
      skip.var_box = full.var_box = box8;
      skip.mode = full.mode = SolveMode::ForceRanking;
      full.ranking = RankingMode::Full;
      if (names(p.vocabulary(), formula_models(p, RankingMode::Skip, box8)) !=
              names(p.vocabulary(), formula_models(p, RankingMode::Full, box8)) ||
          family_of(solve(p, skip)) != family_of(solve(p, full)))
        ++bad;
    }
    return Outcome{bad == 0, std::to_string(bad) + " differing programs"};
  });

  report(10, "SMT path reproduces criteria 1-3", [] {
    SolverOptions opts;
    opts.command = test_solver();
    if (!solver_available(opts.command)) return Outcome{false, "no solver configured", true};
    SolveConfig cfg;
    cfg.solver = opts;

    std::vector<std::string> failures;
    const Program acp = parse_program(kAcp);
    if (family_of(solve(acp, cfg)) != kAcpFamily) failures.push_back("answer sets of acp");
    if (smt_models(completion(acp), acp.vocabulary(), {}, acp.vocabulary().all(), opts) !=
        kAcpFamily)
      failures.push_back("Comp(acp)");
    const Program pi1 = parse_program(kPi1);
    if (smt_models(input_completion(pi1, pi1.irregular_atoms()), pi1.vocabulary(), pi1.gamma(),
                   pi1.atoms(), opts) != kPi1Family)
      failures.push_back("IComp(Pi1)");
    SolveConfig ext = cfg;
    ext.extended = true;
    ext.var_box = Box{0, 23};
    const auto twelve = check_twelve(solve(pi1, ext));
    if (!twelve || !twelve->pass) failures.push_back("twelve valuations");
    std::string detail = "solver '" + opts.command + "'";
    for (const auto& f : failures) detail += ", mismatch: " + f;
    return Outcome{failures.empty(), detail};
  });

  report(11, "SMT-LIB script for Pi1 is stable and matches the golden file", [] {
    const Program p = parse_program(kPi1);
    const std::filesystem::path dir = std::filesystem::temp_directory_path();
    std::vector<std::string> runs;
    for (int i = 0; i < 2; ++i) {
      SolveConfig cfg;
      cfg.oracle_only = true;
      cfg.emit_path = dir / ("casp2smt_acceptance_" + std::to_string(i) + ".smt2");
      solve(p, cfg);
      std::ifstream in(*cfg.emit_path, std::ios::binary);
      runs.emplace_back(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
      std::filesystem::remove(*cfg.emit_path);
    }
    std::ifstream g(std::string(CASP2SMT_GOLDEN_DIR) + "/pi1.smt2", std::ios::binary);
    const std::string golden{std::istreambuf_iterator<char>(g), std::istreambuf_iterator<char>()};
    const bool stable = runs[0] == runs[1] && runs[0] == build_script(p, {}).query();
    const bool ok = stable && !golden.empty() && runs[0] == golden;
    return Outcome{ok, std::to_string(runs[0].size()) + " bytes, " +
                           (stable ? "stable" : "unstable") + ", " +
                           (runs[0] == golden ? "matches golden" : "differs from golden")};
  });

  return g_unexpected == 0 ? 0 : 1;
}
