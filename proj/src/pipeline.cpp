// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The casp2smt Authors

#include "casp2smt/pipeline.hpp"

#include "casp2smt/completion.hpp"
#include "casp2smt/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>

namespace casp {

std::string_view to_string(Fragment f) {
  switch (f) {
    case Fragment::IL: return "IL";
    case Fragment::DL: return "DL";
    case Fragment::L: return "L";
  }
  return "?";
}

std::string_view to_string(Encoding e) {
  return e == Encoding::ICompOnly ? "icomp" : "icomp+ranking";
}

std::string_view to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Sat: return "SATISFIABLE";
    case SolveStatus::Unsat: return "UNSATISFIABLE";
    case SolveStatus::Unknown: return "UNKNOWN";
  }
  return "?";
}

Fragment classify_fragment(const Program& p, LexiconKind kind) {
  if (kind == LexiconKind::RealLinear) return Fragment::L;
  const bool difference = std::all_of(p.gamma().begin(), p.gamma().end(), [](const auto& entry) {
    return is_difference_constraint(entry.second);
  });
  return difference ? Fragment::DL : Fragment::IL;
}

void check_config(const SolveConfig& cfg) {
  if (cfg.var_box && cfg.var_box->lo > cfg.var_box->hi)
    throw Error(Errc::InconsistentConfig, "empty variable box");
  const bool listing = cfg.extended && cfg.enumerate != 1 &&
                       cfg.logic == LexiconKind::IntegerLinear;
  if (listing && !cfg.var_box)
    throw Error(Errc::InconsistentConfig,
                "listing extended answer sets needs a variable box (or enumerate = 1)");
}

std::vector<LinearConstraint> induced_constraints(const Program& p, const AtomSet& x) {
  std::vector<LinearConstraint> cs;
  for (const auto& [atom, c] : p.gamma()) {
    if (!p.atoms().contains(atom)) continue;
    cs.push_back(x.contains(atom) ? c : negate(c));
  }
  return cs;
}

namespace {

struct Plan {
  bool tight = true;
  bool ranking = false;
  AtomSet iota;
};

Plan plan_for(const Program& p, const SolveConfig& cfg) {
  check_config(cfg);
  Plan plan;
  plan.tight = is_tight(p);
  if (cfg.mode == SolveMode::TightOnly && !plan.tight)
    throw Error(Errc::NotTight, "program has a positive cycle");
  plan.ranking = cfg.mode == SolveMode::ForceRanking || (cfg.mode == SolveMode::Auto && !plan.tight);
  plan.iota = p.irregular_atoms();
  return plan;
}

// Extended listing: every valuation in the box is a separate result.
bool lists_valuations(const SolveConfig& cfg) {
  return cfg.extended && cfg.enumerate != 1 && cfg.logic == LexiconKind::IntegerLinear;
}

bool result_less(const ExtendedAnswerSet& a, const ExtendedAnswerSet& b) {
  const auto ma = a.atoms.members();
  const auto mb = b.atoms.members();
  if (ma != mb) return ma < mb;
  if (!a.valuation || !b.valuation) return !a.valuation && b.valuation;
  return *a.valuation < *b.valuation;
}

void finish(SolveReport& report, std::size_t limit) {
  std::sort(report.results.begin(), report.results.end(), result_less);
  if (limit != 0 && report.results.size() > limit) report.results.resize(limit);
}

struct Encoded {
  SmtScript script;
  ClauseSet clauses;
  std::map<AtomId, LinearConstraint> gamma;
};

Encoded encode(const Program& p, const SolveConfig& cfg, const Plan& plan) {
  Formula f = input_completion(p, plan.iota);
  Vocabulary vocab = p.vocabulary();
  std::map<AtomId, LinearConstraint> gamma = p.gamma();
  std::vector<std::string> rank_vars;
  if (plan.ranking) {
    RankingFormula r = build_ranking_formula(p, plan.iota, cfg.ranking);
    f = Formula::conjunction({f, r.formula});
    vocab = std::move(r.vocabulary);
    gamma.insert(r.ranking_atoms.begin(), r.ranking_atoms.end());
    rank_vars = r.rank_variables();
  }
  ClauseSet clauses = to_clauses(f, std::move(vocab));
  SmtScript s = emit_script(clauses, gamma, cfg.logic, p.atoms());
  if (cfg.var_box) s = assert_box(std::move(s), p.constraint_variables(), *cfg.var_box);
  if (cfg.bound_ranks)
    s = assert_box(std::move(s), rank_vars,
                   Box{0, static_cast<std::int64_t>(p.atoms().size())});
  return {std::move(s), std::move(clauses), std::move(gamma)};
}

// Guards against solvers whose model does not satisfy what was sent.
void check_model(const Encoded& e, const SmtModel& m) {
  AtomSet assignment;
  for (const auto& [atom, sym] : e.script.atom_symbols)
    if (m.bools.at(sym)) assignment.insert(atom);
  if (!e.clauses.satisfied_by(assignment))
    throw Error(Errc::SolverProtocolError, "solver model violates a clause");
  Valuation nu;
  for (const auto& [var, sym] : e.script.var_symbols) nu.emplace(var, m.nums.at(sym));
  for (const auto& [atom, sym] : e.script.atom_symbols) {
    auto c = e.gamma.find(atom);
    if (c == e.gamma.end()) continue;
    if (evaluate(c->second, nu) != m.bools.at(sym))
      throw Error(Errc::SolverProtocolError,
                  "solver model disagrees with constraint " + to_string(c->second));
  }
}

SolveReport solve_smt(const Program& p, const SolveConfig& cfg, const Plan& plan,
                      SolveReport report) {
  Encoded e = encode(p, cfg, plan);
  const std::vector<std::string> vars = p.constraint_variables();

  std::set<std::string> scope;
  for (AtomId a : p.atoms().members())
    if (auto it = e.script.atom_symbols.find(a); it != e.script.atom_symbols.end())
      scope.insert(it->second);
  if (lists_valuations(cfg))
    for (const auto& var : vars)
      if (auto it = e.script.var_symbols.find(var); it != e.script.var_symbols.end())
        scope.insert(it->second);

  SmtScript s = e.script;
  SolveStatus last = SolveStatus::Unsat;
  while (cfg.enumerate == 0 || report.results.size() < cfg.enumerate) {
    const SolverResult r = run_solver(s, cfg.solver);
    if (r.status == SolverStatus::Unsat) break;
    if (r.status == SolverStatus::Unknown) {
      last = SolveStatus::Unknown;
      break;
    }
    check_model(e, r.model);
    Decoded d = decode(r.model, e.script, p.atoms(), vars);
    report.results.push_back({std::move(d.atoms), cfg.extended ? std::optional(d.valuation)
                                                               : std::nullopt});
    s = block_model(std::move(s), r.model, scope);
  }
  report.status = !report.results.empty() ? SolveStatus::Sat : last;
  finish(report, cfg.enumerate);
  return report;
}

SolveReport solve_oracle(const Program& p, const SolveConfig& cfg, const Plan& plan,
                         SolveReport report) {
  const Formula icomp = input_completion(p, plan.iota);
  const std::vector<std::string> vars = p.constraint_variables();
  const Box box = cfg.var_box.value_or(kDefaultOracleBox);
  for (const AtomSet& x : models_of(icomp, p.vocabulary(), p.atoms(), cfg.oracle_cap)) {
    if (plan.ranking && !exists_input_level_ranking(p, x, plan.iota, cfg.oracle_cap)) continue;
    const auto cs = induced_constraints(p, x);
    if (lists_valuations(cfg)) {
      for (auto& nu : gcsp_enumerate_bounded(cs, cfg.logic, box, vars))
        report.results.push_back({x, std::move(nu)});
      continue;
    }
    std::optional<Valuation> nu =
        cfg.logic == LexiconKind::RealLinear ? real_witness_1d(cs, cfg.var_box, vars)
                                             : gcsp_solve_bounded(cs, cfg.logic, box, vars);
    if (!nu) continue;
    report.results.push_back({x, cfg.extended ? std::move(nu) : std::nullopt});
  }
  report.status = report.results.empty() ? SolveStatus::Unsat : SolveStatus::Sat;
  finish(report, cfg.enumerate);
  return report;
}

}  // namespace

SmtScript build_script(const Program& p, const SolveConfig& cfg) {
  return encode(p, cfg, plan_for(p, cfg)).script;
}

SolveReport solve(const Program& p, const SolveConfig& cfg) {
  const Plan plan = plan_for(p, cfg);
  SolveReport report;
  report.tight = plan.tight;
  report.encoding = plan.ranking ? Encoding::ICompPlusRanking : Encoding::ICompOnly;
  report.vocabulary = p.vocabulary();
  if (cfg.emit_path) {
    std::ofstream out(*cfg.emit_path, std::ios::binary);
    out << encode(p, cfg, plan).script.query();
    if (!out) throw std::runtime_error("cannot write " + cfg.emit_path->string());
  }
  return cfg.oracle_only ? solve_oracle(p, cfg, plan, std::move(report))
                         : solve_smt(p, cfg, plan, std::move(report));
}

bool verify(const Program& p, const AtomSet& x, Box box, LexiconKind kind) {
  if (!x.is_subset_of(p.atoms())) return false;
  if (!is_input_answer_set(p, x, p.irregular_atoms())) return false;
  const auto cs = induced_constraints(p, x);
  if (kind == LexiconKind::RealLinear) return real_witness_1d(cs, box).has_value();
  return gcsp_solve_bounded(cs, kind, box).has_value();
}

namespace {

nlohmann::json json_number(const Rational& v) {
  if (v.denominator() == 1) return v.numerator();
  return to_string(v);
}

}  // namespace

std::string render_report(const SolveReport& r, ReportFormat format) {
  std::string out;
  if (format == ReportFormat::Text) {
    std::size_t n = 0;
    for (const auto& result : r.results) {
      out += "Answer " + std::to_string(++n) + ":";
      if (!result.atoms.empty()) out += " " + r.vocabulary.format(result.atoms);
      if (result.valuation && !result.valuation->empty()) {
        out += " ";
        for (const auto& [var, value] : *result.valuation) out += " " + var + "=" + to_string(value);
      }
      out += "\n";
    }
    out += std::string(to_string(r.status)) + "\n";
    return out;
  }
  for (const auto& result : r.results) {
    nlohmann::json j;
    j["atoms"] = nlohmann::json::array();
    for (AtomId a : result.atoms.members()) j["atoms"].push_back(r.vocabulary.name(a));
    j["valuation"] = nlohmann::json::object();
    if (result.valuation)
      for (const auto& [var, value] : *result.valuation) j["valuation"][var] = json_number(value);
    j["encoding"] = to_string(r.encoding);
    j["tight"] = r.tight;
    out += j.dump() + "\n";
  }
  out += nlohmann::json{{"status", to_string(r.status)}}.dump() + "\n";
  return out;
}

}  // namespace casp
