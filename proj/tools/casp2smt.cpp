// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The casp2smt Authors

#include "casp2smt/error.hpp"
#include "casp2smt/parser.hpp"
#include "casp2smt/pipeline.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

// 0 sat, 1 unsat, 2 unknown; errors from 10 up.
int exit_code(casp::SolveStatus s) {
  switch (s) {
    case casp::SolveStatus::Sat: return 0;
    case casp::SolveStatus::Unsat: return 1;
    case casp::SolveStatus::Unknown: return 2;
  }
  return 2;
}

int exit_code(casp::Errc e) {
  using casp::Errc;
  switch (e) {
    case Errc::SyntaxError:
    case Errc::IrregularHead:
    case Errc::ReservedPrefix:
    case Errc::GammaNotInjective:
      return 10;
    case Errc::InconsistentConfig:
    case Errc::NotTight:
      return 11;
    case Errc::SolverSpawnFailure:
    case Errc::SolverProtocolError:
      return 12;
    default:
      return 13;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Answer sets of ground constraint answer set programs via SMT"};
  app.option_defaults()->always_capture_default();

  std::string file;
  std::string logic = "lia";
  std::string mode = "auto";
  std::string ranking = "skip";
  std::string format = "text";
  std::string solver;
  std::string emit;
  std::vector<std::int64_t> box;
  double timeout = 60;
  casp::SolveConfig cfg;

  app.add_option("file", file, "Program file ('-' for stdin)")->required();
  app.add_option("--logic", logic, "Lexicon")->check(CLI::IsMember({"lia", "lra"}));
  app.add_option("--mode", mode, "auto: ranking only for nontight programs")
      ->check(CLI::IsMember({"auto", "tight", "ranking"}));
  app.add_option("--ranking", ranking, "skip: omit implications IComp already implies")
      ->check(CLI::IsMember({"skip", "full"}));
  app.add_flag("--bound-ranks", cfg.bound_ranks, "Bound rank variables by the atom count");
  app.add_option("--solver", solver, "Solver command (default: $CASP2SMT_SOLVER or 'z3 -in')");
  app.add_option("--timeout", timeout, "Seconds per solver call")->check(CLI::PositiveNumber);
  app.add_flag("--oracle", cfg.oracle_only, "Brute-force oracle instead of a solver");
  app.add_option("--enumerate", cfg.enumerate, "Number of results, 0 for all");
  app.add_flag("--extended", cfg.extended, "Report valuations");
  app.add_option("--var-box", box, "Bounds for every program variable")->expected(2);
  app.add_option("--emit-smtlib", emit, "Write the SMT-LIB script to this path");
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "jsonl"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 14;
  }

  cfg.logic = logic == "lra" ? casp::LexiconKind::RealLinear : casp::LexiconKind::IntegerLinear;
  cfg.mode = mode == "tight"     ? casp::SolveMode::TightOnly
             : mode == "ranking" ? casp::SolveMode::ForceRanking
                                 : casp::SolveMode::Auto;
  cfg.ranking = ranking == "full" ? casp::RankingMode::Full : casp::RankingMode::Skip;
  if (box.size() == 2) cfg.var_box = casp::Box{box[0], box[1]};
  if (!emit.empty()) cfg.emit_path = emit;
  if (!solver.empty()) {
    cfg.solver.command = solver;
  } else if (const char* env = std::getenv(casp::kSolverEnv); env && *env) {
    cfg.solver.command = env;
  }
  cfg.solver.timeout = std::chrono::milliseconds(static_cast<std::int64_t>(timeout * 1000));

  std::stringstream text;
  if (file == "-") {
    text << std::cin.rdbuf();
  } else {
    std::ifstream in(file, std::ios::binary);
    if (!in) {
      std::cerr << "casp2smt: cannot open " << file << "\n";
      return 10;
    }
    text << in.rdbuf();
  }

  try {
    const casp::Program program = casp::parse_program(text.str());
    const casp::SolveReport report = casp::solve(program, cfg);
    std::cout << casp::render_report(
        report, format == "jsonl" ? casp::ReportFormat::JsonLines : casp::ReportFormat::Text);
    return exit_code(report.status);
  } catch (const casp::Error& e) {
    std::cerr << "casp2smt: " << e.what() << "\n";
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "casp2smt: " << e.what() << "\n";
    return 13;
  }
}
