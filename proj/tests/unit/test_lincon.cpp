// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The casp2smt Authors

#include "casp2smt/error.hpp"
#include "casp2smt/lincon.hpp"

#include "../support/oracles.hpp"

#include <doctest.h>

#include <random>

using namespace casp;

namespace {

LinearConstraint lc(std::string_view text) { return parse_constraint(text); }

Valuation val(std::initializer_list<std::pair<const std::string, Rational>> init) {
  return Valuation(init);
}

LinearConstraint random_constraint(std::mt19937& rng) {
  static const Relation rels[] = {Relation::LT, Relation::GT, Relation::LE,
                                  Relation::GE, Relation::EQ, Relation::NE};
  std::uniform_int_distribution<int> coeff(-4, 4);
  std::uniform_int_distribution<int> den(1, 3);
  LinExpr e;
  e.add("x", Rational(coeff(rng), den(rng))).add("y", Rational(coeff(rng), den(rng)));
  if (e.empty()) e.add("x", 1);
  return {e, rels[std::uniform_int_distribution<int>(0, 5)(rng)],
          Rational(coeff(rng) * 3, den(rng)), std::bernoulli_distribution(0.3)(rng)};
}

}  // namespace

TEST_CASE("parse and render constraints") {
  CHECK(to_string(lc("2*x2 + 3*x3 = 13")) == "2*x2+3*x3=13");
  CHECK(to_string(lc("x < 12")) == "x<12");
  CHECK(lc("x < 12") == lc("1*x < 12"));
  CHECK(to_string(lc("-x + y <= 3")) == "-x+y<=3");
  CHECK(to_string(lc("x >= -3")) == "x>=-3");
  CHECK(to_string(lc("4*x + 6*y != 8")) == "2*x+3*y!=4");
  CHECK(to_string(lc("x > 4.5")) == "2*x>9");
  CHECK(to_string(lc("x - x > 1")) == "0>1");
  CHECK_THROWS_AS(lc("x <"), Error);
  CHECK_THROWS_AS(lc("3 < x"), Error);
  CHECK_THROWS_AS(lc("x * 2 < 3"), Error);
  CHECK_THROWS_AS(lc("x < 1 2"), Error);
}

TEST_CASE("normalization keeps the relation and reduces the coefficients") {
  LinExpr e;
  e.add("y", Rational(1, 2)).add("x", Rational(3, 4));
  const LinearConstraint n = normalize({e, Relation::LE, Rational(1, 4), false});
  CHECK(to_string(n) == "3*x+2*y<=1");
  CHECK(normalize({LinExpr().add("x", -2), Relation::GT, Rational(4), false}) ==
        LinearConstraint{LinExpr().add("x", -1), Relation::GT, Rational(2), false});
  const LinearConstraint neg{LinExpr().add("x", 1), Relation::LT, Rational(12), true};
  CHECK(normalize(neg) == lc("x >= 12"));
}

TEST_CASE("evaluate") {
  CHECK(evaluate(lc("x >= 12"), val({{"x", Rational(12)}})));
  const LinearConstraint not_lt{LinExpr().add("x", 1), Relation::LT, Rational(12), true};
  CHECK(evaluate(not_lt, val({{"x", Rational(12)}})));
  CHECK(evaluate(lc("2*x2 + 3*x3 = 13"), val({{"x2", Rational(2)}, {"x3", Rational(3)}})));
  try {
    (void)evaluate(lc("x + y > 0"), val({{"x", Rational(1)}}));
    FAIL("expected UnboundVariable");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::UnboundVariable);
    CHECK(std::string(e.what()).find("'y'") != std::string::npos);
  }
}

TEST_CASE("negate") {
  CHECK(negate(lc("x < 12")) == lc("x >= 12"));
  const LinearConstraint not_lt{LinExpr().add("x", 1), Relation::LT, Rational(12), true};
  CHECK(negate(not_lt) == lc("x < 12"));
  CHECK(negate(lc("x = 0")) == lc("x != 0"));
}

TEST_CASE("bounded solving") {
  const std::vector<LinearConstraint> ex3 = {lc("x >= 12"), negate(lc("x < 12")),
                                             negate(lc("x < 0")), negate(lc("x > 23"))};
  auto nu = gcsp_solve_bounded(ex3, LexiconKind::IntegerLinear, {0, 23});
  REQUIRE(nu);
  CHECK(*nu == val({{"x", Rational(12)}}));

  const std::vector<LinearConstraint> gap = {lc("x > 4"), lc("x < 5")};
  CHECK_FALSE(gcsp_solve_bounded(gap, LexiconKind::IntegerLinear, {-100, 100}));
  CHECK(gcsp_enumerate_bounded(gap, LexiconKind::IntegerLinear, {0, 10}).empty());

  auto empty = gcsp_solve_bounded({}, LexiconKind::IntegerLinear, {0, 1});
  REQUIRE(empty);
  CHECK(empty->empty());

  const std::vector<LinearConstraint> range = {lc("x >= 12"), lc("x <= 23")};
  const auto all = gcsp_enumerate_bounded(range, LexiconKind::IntegerLinear, {0, 23});
  REQUIRE(all.size() == 12);
  for (std::size_t i = 0; i < all.size(); ++i)
    CHECK(all[i].at("x") == Rational(12 + static_cast<int>(i)));

  const std::vector<std::string> x{"x"};
  const auto free = gcsp_enumerate_bounded({}, LexiconKind::IntegerLinear, {0, 1}, x);
  CHECK(free == std::vector<Valuation>{val({{"x", Rational(0)}}), val({{"x", Rational(1)}})});
  CHECK(gcsp_enumerate_bounded(range, LexiconKind::IntegerLinear, {0, 23}, {}, 3).size() == 3);
  CHECK_THROWS_AS(gcsp_enumerate_bounded(range, LexiconKind::RealLinear, {0, 23}), Error);
}

TEST_CASE("one-variable real feasibility") {
  const std::vector<LinearConstraint> gap = {lc("x > 4"), lc("x < 5")};
  CHECK(real_feasible_1d(gap));
  auto w = real_witness_1d(gap);
  REQUIRE(w);
  CHECK(w->at("x") > Rational(4));
  CHECK(w->at("x") < Rational(5));
  CHECK_FALSE(real_feasible_1d(std::vector{lc("x > 4"), lc("x < 4")}));
  CHECK_FALSE(real_feasible_1d(std::vector{lc("x >= 4"), lc("x <= 4"), lc("x != 4")}));
  CHECK(real_feasible_1d(std::vector{lc("x >= 4"), lc("x <= 5"), lc("x != 4")}));
  CHECK(real_feasible_1d(std::vector{lc("x != 4"), lc("x != 5")}));
  CHECK_FALSE(real_feasible_1d(std::vector{lc("0*x > 1")}));
  auto bounded = real_witness_1d(gap, Box{0, 23});
  REQUIRE(bounded);
  CHECK(bounded->at("x") > Rational(4));
  try {
    (void)real_feasible_1d(std::vector{lc("x + y > 1")});
    FAIL("expected UnsupportedMultivariate");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::UnsupportedMultivariate);
  }
}

TEST_CASE("difference shape") {
  CHECK(is_difference_constraint(lc("x - y <= 3")));
  CHECK(is_difference_constraint(lc("-x + y > -1")));
  CHECK_FALSE(is_difference_constraint(lc("x - 2*y <= 3")));
  CHECK_FALSE(is_difference_constraint(lc("x <= 3")));
  CHECK_FALSE(is_difference_constraint(lc("x - y != 3")));
}

TEST_CASE("property: negation complements truth and normalization is stable") {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> value(-6, 6);
  for (int i = 0; i < 2000; ++i) {
    const LinearConstraint c = random_constraint(rng);
    const Valuation v = val({{"x", Rational(value(rng), 2)}, {"y", Rational(value(rng))}});
    CHECK(evaluate(negate(c), v) == !evaluate(c, v));
    CHECK(evaluate(normalize(c), v) == evaluate(c, v));
    const LinearConstraint n = normalize(c);
    CHECK(normalize(n) == n);
    if (!n.expr.empty()) CHECK(parse_constraint(to_string(n)) == n);
    for (const auto& [var, coeff] : n.expr.terms()) CHECK(coeff.denominator() == 1);
    CHECK(n.bound.denominator() == 1);
  }
}

TEST_CASE("property: bounded solver agrees with per-constraint evaluation") {
  std::mt19937 rng(11);
  const std::vector<std::string> vars{"x", "y"};
  const Box box{-4, 4};
  for (int i = 0; i < 300; ++i) {
    std::vector<LinearConstraint> cs;
    const int n = std::uniform_int_distribution<int>(0, 3)(rng);
    for (int k = 0; k < n; ++k) cs.push_back(random_constraint(rng));
    const auto expected = casp::testing::brute_force_gcsp(cs, vars, box);
    const auto all = gcsp_enumerate_bounded(cs, LexiconKind::IntegerLinear, box, vars);
    CHECK(all == expected);
    const auto one = gcsp_solve_bounded(cs, LexiconKind::IntegerLinear, box, vars);
    CHECK(one.has_value() == !expected.empty());
    if (one) {
      CHECK(*one == expected.front());
      for (const auto& c : cs) CHECK(evaluate(c, *one));
    }
  }
}
