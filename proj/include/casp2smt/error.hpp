// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The casp2smt Authors

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace casp {

enum class Errc {
  OracleCapExceeded,
  HeadsIntersectInput,
  UnboundVariable,
  UnsupportedMultivariate,
  NotAModel,
  PartialRanking,
  RankVarForIrregular,
  MissingGamma,
  GammaNotInjective,
  SolverSpawnFailure,
  SolverProtocolError,
  UnknownSymbol,
  SyntaxError,
  IrregularHead,
  ReservedPrefix,
  NotTight,
  InconsistentConfig,
};

std::string_view to_string(Errc code);

/// Library-wide exception; every failure mode carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace casp
