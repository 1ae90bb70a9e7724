// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The casp2smt Authors

#pragma once

#include "casp2smt/program.hpp"

#include <string>
#include <string_view>

namespace casp {

/// Ground programs in a small gringo-like syntax:
///
///   switch.  {am}.  lightOn :- switch, not am.  :- not am, |x < 12|.
///
/// Choice heads are desugared to `a :- not not a, ...`. Bar atoms denote
/// irregular atoms and are identified by their normalized constraint.
/// Throws Errc::SyntaxError (with line:column), Errc::IrregularHead and
/// Errc::ReservedPrefix.
Program parse_program(std::string_view text);

/// One rule per line, parseable by parse_program. Rules whose head also
/// occurs under `not not` print as choices. Throws Errc::SyntaxError for a
/// denial with an empty body, which the grammar cannot express.
std::string render_program(const Program& p);

}  // namespace casp
