// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The casp2smt Authors

#pragma once

#include <boost/rational.hpp>

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace casp {

using Rational = boost::rational<std::int64_t>;

/// "12", "-3", "9/2".
std::string to_string(const Rational& value);

enum class Relation { LT, GT, LE, GE, EQ, NE };

/// LT<->GE, GT<->LE, EQ<->NE.
Relation complement(Relation rel);
std::string_view symbol(Relation rel);
bool holds(Relation rel, const Rational& lhs, const Rational& rhs);

/// Linear expression a1*x1 + ... + an*xn, kept sorted by variable name with no
/// zero coefficients.
class LinExpr {
 public:
  using Terms = std::map<std::string, Rational, std::less<>>;

  LinExpr() = default;

  /// Adds coeff*var, merging with an existing term for var.
  LinExpr& add(std::string_view var, Rational coeff);

  const Terms& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  std::vector<std::string> variables() const;

  friend bool operator==(const LinExpr&, const LinExpr&) = default;

 private:
  Terms terms_;
};

/// The constraint expr <rel> bound, or its complement when negated is set.
struct LinearConstraint {
  LinExpr expr;
  Relation rel = Relation::EQ;
  Rational bound{0};
  bool negated = false;

  friend bool operator==(const LinearConstraint&, const LinearConstraint&) = default;
};

using Valuation = std::map<std::string, Rational, std::less<>>;

enum class LexiconKind { IntegerLinear, RealLinear };

/// Closed per-variable search box [lo, hi].
struct Box {
  std::int64_t lo = -32;
  std::int64_t hi = 32;

  friend bool operator==(const Box&, const Box&) = default;
};

/// Canonical positive form: negation eliminated, coefficients and bound
/// scaled to coprime integers. The relation is never flipped.
LinearConstraint normalize(const LinearConstraint& c);

/// Positive-form complement of c; ~(e<k) becomes e<k.
LinearConstraint negate(const LinearConstraint& c);

/// Throws Errc::UnboundVariable when v misses a variable of c.
bool evaluate(const LinearConstraint& c, const Valuation& v);

/// Renders "2*x2+3*x3=13"; negated constraints render as "not(...)".
std::string to_string(const LinearConstraint& c);

/// Parses the bar-atom body syntax, e.g. "2*x2 + 3*x3 = 13" or "x>=-3".
/// The result is normalized. Throws Errc::SyntaxError.
LinearConstraint parse_constraint(std::string_view text);

/// x - y <rel> k with rel one of < <= > >= =.
bool is_difference_constraint(const LinearConstraint& c);

/// Sorted, deduplicated variables of all constraints plus extra.
std::vector<std::string> variables_of(std::span<const LinearConstraint> cs,
                                      std::span<const std::string> extra = {});

/// Lexicographically smallest solution (variables in name order, values
/// ascending) inside box^vars. The real lexicon routes to real_witness_1d
/// clipped to the box.
std::optional<Valuation> gcsp_solve_bounded(std::span<const LinearConstraint> cs,
                                            LexiconKind kind, Box box,
                                            std::span<const std::string> extra_vars = {});

/// All integer solutions inside the box in lexicographic order; limit 0 means
/// unlimited. Throws Errc::InconsistentConfig for the real lexicon.
std::vector<Valuation> gcsp_enumerate_bounded(std::span<const LinearConstraint> cs,
                                              LexiconKind kind, Box box,
                                              std::span<const std::string> extra_vars = {},
                                              std::size_t limit = 0);

/// Interval feasibility over the reals. Every constraint must mention at most
/// one variable (Errc::UnsupportedMultivariate otherwise).
bool real_feasible_1d(std::span<const LinearConstraint> cs);

/// A witness for real_feasible_1d, optionally restricted to a closed box.
std::optional<Valuation> real_witness_1d(std::span<const LinearConstraint> cs,
                                         std::optional<Box> box = std::nullopt,
                                         std::span<const std::string> extra_vars = {});

}  // namespace casp
