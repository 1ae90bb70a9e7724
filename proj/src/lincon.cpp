// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The casp2smt Authors

#include "casp2smt/lincon.hpp"

#include "casp2smt/error.hpp"

#include <boost/integer/common_factor.hpp>

#include <algorithm>
#include <cctype>
#include <set>

namespace casp {

std::string to_string(const Rational& value) {
  if (value.denominator() == 1) return std::to_string(value.numerator());
  return std::to_string(value.numerator()) + "/" + std::to_string(value.denominator());
}

Relation complement(Relation rel) {
  switch (rel) {
    case Relation::LT: return Relation::GE;
    case Relation::GE: return Relation::LT;
    case Relation::GT: return Relation::LE;
    case Relation::LE: return Relation::GT;
    case Relation::EQ: return Relation::NE;
    case Relation::NE: return Relation::EQ;
  }
  return rel;
}

std::string_view symbol(Relation rel) {
  switch (rel) {
    case Relation::LT: return "<";
    case Relation::GT: return ">";
    case Relation::LE: return "<=";
    case Relation::GE: return ">=";
    case Relation::EQ: return "=";
    case Relation::NE: return "!=";
  }
  return "?";
}

bool holds(Relation rel, const Rational& lhs, const Rational& rhs) {
  switch (rel) {
    case Relation::LT: return lhs < rhs;
    case Relation::GT: return lhs > rhs;
    case Relation::LE: return lhs <= rhs;
    case Relation::GE: return lhs >= rhs;
    case Relation::EQ: return lhs == rhs;
    case Relation::NE: return lhs != rhs;
  }
  return false;
}

LinExpr& LinExpr::add(std::string_view var, Rational coeff) {
  auto it = terms_.find(var);
  if (it == terms_.end()) {
    if (coeff != Rational(0)) terms_.emplace(std::string(var), coeff);
    return *this;
  }
  it->second += coeff;
  if (it->second == Rational(0)) terms_.erase(it);
  return *this;
}

std::vector<std::string> LinExpr::variables() const {
  std::vector<std::string> out;
  out.reserve(terms_.size());
  for (const auto& [var, coeff] : terms_) out.push_back(var);
  return out;
}

LinearConstraint normalize(const LinearConstraint& c) {
  LinearConstraint out = c;
  if (out.negated) {
    out.rel = complement(out.rel);
    out.negated = false;
  }
  std::int64_t lcm = out.bound.denominator();
  for (const auto& [var, coeff] : out.expr.terms())
    lcm = boost::integer::lcm(lcm, coeff.denominator());
  std::int64_t gcd = 0;
  auto scaled_bound = out.bound * lcm;
  gcd = boost::integer::gcd(gcd, scaled_bound.numerator());
  for (const auto& [var, coeff] : out.expr.terms())
    gcd = boost::integer::gcd(gcd, (coeff * lcm).numerator());
  if (gcd == 0) gcd = 1;
  const Rational factor(lcm, gcd);
  LinExpr expr;
  for (const auto& [var, coeff] : out.expr.terms()) expr.add(var, coeff * factor);
  out.expr = std::move(expr);
  out.bound = out.bound * factor;
  return out;
}

LinearConstraint negate(const LinearConstraint& c) {
  LinearConstraint out = c;
  if (out.negated) {
    out.negated = false;
  } else {
    out.rel = complement(out.rel);
  }
  return out;
}

bool evaluate(const LinearConstraint& c, const Valuation& v) {
  Rational sum{0};
  for (const auto& [var, coeff] : c.expr.terms()) {
    auto it = v.find(var);
    if (it == v.end()) throw Error(Errc::UnboundVariable, "no value for variable '" + var + "'");
    sum += coeff * it->second;
  }
  const bool value = holds(c.rel, sum, c.bound);
  return c.negated ? !value : value;
}

std::string to_string(const LinearConstraint& c) {
  std::string out;
  bool first = true;
  for (const auto& [var, coeff] : c.expr.terms()) {
    if (coeff < 0) {
      out += '-';
    } else if (!first) {
      out += '+';
    }
    const Rational magnitude = abs(coeff);
    if (magnitude != Rational(1)) out += to_string(magnitude) + "*";
    out += var;
    first = false;
  }
  if (first) out += "0";
  out += symbol(c.rel);
  out += to_string(c.bound);
  return c.negated ? "not(" + out + ")" : out;
}

namespace {

class ConstraintReader {
 public:
  explicit ConstraintReader(std::string_view text) : text_(text) {}

  LinearConstraint read() {
    LinExpr expr;
    skip_ws();
    bool negative = false;
    if (eat('-')) {
      negative = true;
    } else {
      eat('+');
    }
    while (true) {
      read_term(expr, negative);
      skip_ws();
      if (eat('+')) {
        negative = false;
      } else if (peek() == '-') {
        ++pos_;
        negative = true;
      } else {
        break;
      }
    }
    const Relation rel = read_relation();
    skip_ws();
    bool bound_negative = false;
    if (eat('-')) bound_negative = true;
    skip_ws();
    auto bound = read_number();
    if (!bound) fail("expected a number after the relation");
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    LinearConstraint c{std::move(expr), rel, bound_negative ? -*bound : *bound, false};
    return normalize(c);
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(Errc::SyntaxError,
                msg + " at offset " + std::to_string(pos_) + " in '" + std::string(text_) + "'");
  }

  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool eat(char ch) {
    skip_ws();
    if (peek() != ch) return false;
    ++pos_;
    return true;
  }

  std::optional<Rational> read_number() {
    const std::size_t start = pos_;
    std::int64_t num = 0;
    std::int64_t den = 1;
    std::size_t digits = 0;
    while (std::isdigit(static_cast<unsigned char>(peek()))) {
      num = num * 10 + (peek() - '0');
      ++pos_;
      if (++digits > 17) fail("numeral too long");
    }
    if (digits == 0) {
      pos_ = start;
      return std::nullopt;
    }
    if (peek() == '.') {
      ++pos_;
      std::size_t frac = 0;
      while (std::isdigit(static_cast<unsigned char>(peek()))) {
        num = num * 10 + (peek() - '0');
        den *= 10;
        ++pos_;
        ++frac;
        if (++digits > 17) fail("numeral too long");
      }
      if (frac == 0) fail("expected digits after '.'");
    }
    return Rational(num, den);
  }

  std::string read_identifier() {
    const std::size_t start = pos_;
    if (!std::isalpha(static_cast<unsigned char>(peek()))) fail("expected a variable name");
    while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_') ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  void read_term(LinExpr& expr, bool negative) {
    skip_ws();
    Rational coeff{1};
    if (auto number = read_number()) {
      skip_ws();
      if (!eat('*')) fail("expected '*' after a coefficient");
      skip_ws();
      coeff = *number;
    }
    const std::string var = read_identifier();
    expr.add(var, negative ? -coeff : coeff);
  }

  Relation read_relation() {
    skip_ws();
    const char ch = peek();
    const char next = pos_ + 1 < text_.size() ? text_[pos_ + 1] : '\0';
    auto take = [&](std::size_t n, Relation rel) {
      pos_ += n;
      return rel;
    };
    if (ch == '<') return next == '=' ? take(2, Relation::LE) : take(1, Relation::LT);
    if (ch == '>') return next == '=' ? take(2, Relation::GE) : take(1, Relation::GT);
    if (ch == '=') return take(1, Relation::EQ);
    if (ch == '!' && next == '=') return take(2, Relation::NE);
    fail("expected one of < > <= >= = !=");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

LinearConstraint parse_constraint(std::string_view text) {
  return ConstraintReader(text).read();
}

bool is_difference_constraint(const LinearConstraint& c) {
  const LinearConstraint n = normalize(c);
  if (n.expr.size() != 2 || n.rel == Relation::NE) return false;
  auto it = n.expr.terms().begin();
  const Rational first = it->second;
  const Rational second = std::next(it)->second;
  const Rational one{1};
  return (first == one && second == -one) || (first == -one && second == one);
}

std::vector<std::string> variables_of(std::span<const LinearConstraint> cs,
                                      std::span<const std::string> extra) {
  std::set<std::string> vars(extra.begin(), extra.end());
  for (const auto& c : cs)
    for (const auto& [var, coeff] : c.expr.terms()) vars.insert(var);
  return {vars.begin(), vars.end()};
}

namespace {

// Depth-first search over box^vars in lexicographic order. Each constraint is
// checked as soon as its last variable (in name order) is assigned.
class BoxSearch {
 public:
  BoxSearch(std::span<const LinearConstraint> cs, Box box, std::vector<std::string> vars)
      : box_(box), vars_(std::move(vars)), buckets_(vars_.size() + 1) {
    for (const auto& c : cs) {
      std::size_t last = 0;
      for (const auto& [var, coeff] : c.expr.terms()) {
        auto pos = std::lower_bound(vars_.begin(), vars_.end(), var) - vars_.begin();
        last = std::max<std::size_t>(last, static_cast<std::size_t>(pos) + 1);
      }
      buckets_[last].push_back(&c);
    }
  }

  void run(const std::function<bool(const Valuation&)>& on_solution) {
    Valuation v;
    if (!bucket_ok(0, v)) return;
    if (box_.lo > box_.hi && !vars_.empty()) return;
    descend(0, v, on_solution);
  }

 private:
  bool bucket_ok(std::size_t index, const Valuation& v) const {
    return std::all_of(buckets_[index].begin(), buckets_[index].end(),
                       [&](const LinearConstraint* c) { return evaluate(*c, v); });
  }

  // Returns false once the callback asks to stop.
  bool descend(std::size_t depth, Valuation& v,
               const std::function<bool(const Valuation&)>& on_solution) {
    if (depth == vars_.size()) return on_solution(v);
    for (std::int64_t value = box_.lo; value <= box_.hi; ++value) {
      v[vars_[depth]] = Rational(value);
      if (bucket_ok(depth + 1, v) && !descend(depth + 1, v, on_solution)) return false;
    }
    v.erase(vars_[depth]);
    return true;
  }

  Box box_;
  std::vector<std::string> vars_;
  std::vector<std::vector<const LinearConstraint*>> buckets_;
};

}  // namespace

std::optional<Valuation> gcsp_solve_bounded(std::span<const LinearConstraint> cs,
                                            LexiconKind kind, Box box,
                                            std::span<const std::string> extra_vars) {
  if (kind == LexiconKind::RealLinear) return real_witness_1d(cs, box, extra_vars);
  std::optional<Valuation> found;
  BoxSearch(cs, box, variables_of(cs, extra_vars)).run([&](const Valuation& v) {
    found = v;
    return false;
  });
  return found;
}

std::vector<Valuation> gcsp_enumerate_bounded(std::span<const LinearConstraint> cs,
                                              LexiconKind kind, Box box,
                                              std::span<const std::string> extra_vars,
                                              std::size_t limit) {
  if (kind == LexiconKind::RealLinear)
    throw Error(Errc::InconsistentConfig, "valuation enumeration requires the integer lexicon");
  std::vector<Valuation> out;
  BoxSearch(cs, box, variables_of(cs, extra_vars)).run([&](const Valuation& v) {
    out.push_back(v);
    return limit == 0 || out.size() < limit;
  });
  return out;
}

namespace {

struct Interval {
  std::optional<Rational> lo;
  std::optional<Rational> hi;
  bool lo_open = false;
  bool hi_open = false;
  std::set<Rational> holes;

  void lower(const Rational& value, bool open) {
    if (!lo || value > *lo || (value == *lo && open)) {
      lo = value;
      lo_open = open;
    }
  }

  void upper(const Rational& value, bool open) {
    if (!hi || value < *hi || (value == *hi && open)) {
      hi = value;
      hi_open = open;
    }
  }

  bool contains(const Rational& x) const {
    if (lo && (x < *lo || (x == *lo && lo_open))) return false;
    if (hi && (x > *hi || (x == *hi && hi_open))) return false;
    return !holes.contains(x);
  }

  // Nonempty-interior intervals minus finitely many holes are never empty, so
  // the candidate walks below terminate after at most holes.size()+1 steps.
  std::optional<Rational> witness() const {
    if (lo && hi) {
      if (*lo > *hi) return std::nullopt;
      if (*lo == *hi) {
        if (lo_open || hi_open) return std::nullopt;
        return contains(*lo) ? std::optional(*lo) : std::nullopt;
      }
      if (contains(*lo)) return *lo;
      if (contains(*hi)) return *hi;
      Rational candidate = (*lo + *hi) / 2;
      while (!contains(candidate)) candidate = (*lo + candidate) / 2;
      return candidate;
    }
    if (lo) {
      Rational candidate = lo_open ? *lo + 1 : *lo;
      while (!contains(candidate)) candidate += 1;
      return candidate;
    }
    if (hi) {
      Rational candidate = hi_open ? *hi - 1 : *hi;
      while (!contains(candidate)) candidate -= 1;
      return candidate;
    }
    Rational candidate{0};
    while (!contains(candidate)) candidate += 1;
    return candidate;
  }
};

}  // namespace

std::optional<Valuation> real_witness_1d(std::span<const LinearConstraint> cs,
                                         std::optional<Box> box,
                                         std::span<const std::string> extra_vars) {
  std::map<std::string, Interval, std::less<>> intervals;
  for (const auto& var : variables_of(cs, extra_vars)) {
    auto& iv = intervals[var];
    if (box) {
      iv.lower(Rational(box->lo), false);
      iv.upper(Rational(box->hi), false);
    }
  }
  for (const auto& raw : cs) {
    const LinearConstraint c = normalize(raw);
    if (c.expr.size() >= 2)
      throw Error(Errc::UnsupportedMultivariate,
                  "constraint '" + to_string(c) + "' mentions more than one variable");
    if (c.expr.empty()) {
      if (!holds(c.rel, Rational(0), c.bound)) return std::nullopt;
      continue;
    }
    const auto& [var, coeff] = *c.expr.terms().begin();
    const Rational point = c.bound / coeff;
    Relation rel = c.rel;
    if (coeff < 0) {
      switch (rel) {
        case Relation::LT: rel = Relation::GT; break;
        case Relation::GT: rel = Relation::LT; break;
        case Relation::LE: rel = Relation::GE; break;
        case Relation::GE: rel = Relation::LE; break;
        default: break;
      }
    }
    auto& iv = intervals[var];
    switch (rel) {
      case Relation::LT: iv.upper(point, true); break;
      case Relation::LE: iv.upper(point, false); break;
      case Relation::GT: iv.lower(point, true); break;
      case Relation::GE: iv.lower(point, false); break;
      case Relation::EQ:
        iv.lower(point, false);
        iv.upper(point, false);
        break;
      case Relation::NE: iv.holes.insert(point); break;
    }
  }
  Valuation out;
  for (const auto& [var, iv] : intervals) {
    auto value = iv.witness();
    if (!value) return std::nullopt;
    out.emplace(var, *value);
  }
  return out;
}

bool real_feasible_1d(std::span<const LinearConstraint> cs) {
  return real_witness_1d(cs).has_value();
}

}  // namespace casp
