// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The casp2smt Authors

#include "casp2smt/error.hpp"

namespace casp {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::OracleCapExceeded: return "OracleCapExceeded";
    case Errc::HeadsIntersectInput: return "HeadsIntersectInput";
    case Errc::UnboundVariable: return "UnboundVariable";
    case Errc::UnsupportedMultivariate: return "UnsupportedMultivariate";
    case Errc::NotAModel: return "NotAModel";
    case Errc::PartialRanking: return "PartialRanking";
    case Errc::RankVarForIrregular: return "RankVarForIrregular";
    case Errc::MissingGamma: return "MissingGamma";
    case Errc::GammaNotInjective: return "GammaNotInjective";
    case Errc::SolverSpawnFailure: return "SolverSpawnFailure";
    case Errc::SolverProtocolError: return "SolverProtocolError";
    case Errc::UnknownSymbol: return "UnknownSymbol";
    case Errc::SyntaxError: return "SyntaxError";
    case Errc::IrregularHead: return "IrregularHead";
    case Errc::ReservedPrefix: return "ReservedPrefix";
    case Errc::NotTight: return "NotTight";
    case Errc::InconsistentConfig: return "InconsistentConfig";
  }
  return "Unknown";
}

}  // namespace casp
