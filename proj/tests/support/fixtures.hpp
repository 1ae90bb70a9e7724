// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The casp2smt Authors

#pragma once

#include "casp2smt/parser.hpp"
#include "casp2smt/program.hpp"

#include <cstdlib>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <string_view>

namespace casp::testing {

// Light switch program.
inline constexpr std::string_view kAcp = R"(
{switch}.
lightOn :- switch, not am.
:- not lightOn.
{am}.
)";

// The same program extended by time-of-day constraints.
inline constexpr std::string_view kPi1 = R"(
{switch}.
lightOn :- switch, not am.
:- not lightOn.
{am}.
:- not am, |x < 12|.
:- am, |x >= 12|.
:- |x < 0|.
:- |x > 23|.
)";

inline AtomId atom(const Vocabulary& v, std::string_view name) {
  if (auto a = v.find(name)) return *a;
  throw std::invalid_argument("no atom named " + std::string(name));
}

inline AtomSet atoms(const Vocabulary& v, std::initializer_list<std::string_view> names) {
  AtomSet out;
  for (auto n : names) out.insert(atom(v, n));
  return out;
}

inline AtomSet atoms(const Program& p, std::initializer_list<std::string_view> names) {
  return atoms(p.vocabulary(), names);
}

/// Solver command the SMT tests use; empty when none was found at configure
/// time and CASP2SMT_SOLVER is unset.
inline std::string test_solver() {
  if (const char* env = std::getenv("CASP2SMT_SOLVER"); env && *env) return env;
#ifdef CASP2SMT_TEST_SOLVER
  return CASP2SMT_TEST_SOLVER;
#else
  return {};
#endif
}

}  // namespace casp::testing
