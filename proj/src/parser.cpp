// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The casp2smt Authors

#include "casp2smt/parser.hpp"

#include "casp2smt/error.hpp"

#include <algorithm>
#include <cctype>

namespace casp {

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Program run() {
    while (true) {
      skip();
      if (at_end()) break;
      parse_rule();
    }
    return std::move(builder_).build();
  }

 private:
  struct Lit {
    AtomId atom;
    int nots = 0;
  };

  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[pos_]; }

  std::string where(std::size_t at) const {
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t i = 0; i < at && i < text_.size(); ++i) {
      if (text_[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    return std::to_string(line) + ":" + std::to_string(col);
  }

  [[noreturn]] void fail(const std::string& msg, std::size_t at) const {
    throw Error(Errc::SyntaxError, where(at) + ": " + msg);
  }
  [[noreturn]] void fail(const std::string& msg) const { fail(msg, pos_); }

  void skip() {
    while (!at_end()) {
      if (std::isspace(static_cast<unsigned char>(peek()))) {
        ++pos_;
      } else if (peek() == '%') {
        while (!at_end() && peek() != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  bool accept(std::string_view token) {
    skip();
    if (text_.substr(pos_).starts_with(token)) {
      pos_ += token.size();
      return true;
    }
    return false;
  }

  void expect(std::string_view token) {
    if (!accept(token)) fail("expected '" + std::string(token) + "'");
  }

  std::string identifier() {
    skip();
    const std::size_t start = pos_;
    if (!std::islower(static_cast<unsigned char>(peek()))) fail("expected an atom");
    while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_') ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  bool keyword_not() {
    skip();
    if (!text_.substr(pos_).starts_with("not")) return false;
    const std::size_t after = pos_ + 3;
    if (after < text_.size() &&
        (std::isalnum(static_cast<unsigned char>(text_[after])) || text_[after] == '_'))
      return false;
    pos_ = after;
    return true;
  }

  AtomId atom() {
    skip();
    const std::size_t start = pos_;
    if (peek() != '|') {
      const std::string name = identifier();
      if (name == "not") fail("'not' is a keyword", start);
      return wrap(start, [&] { return builder_.regular(name); });
    }
    const std::size_t close = text_.find('|', pos_ + 1);
    if (close == std::string_view::npos) fail("unterminated constraint atom");
    const std::string_view inner = text_.substr(pos_ + 1, close - pos_ - 1);
    LinearConstraint c;
    try {
      c = parse_constraint(inner);
    } catch (const Error& e) {
      if (e.code() != Errc::SyntaxError) throw;
      fail(std::string("bad constraint atom: ") + e.what(), start);
    }
    pos_ = close + 1;
    return wrap(start, [&] { return builder_.irregular(c); });
  }

  template <typename F>
  AtomId wrap(std::size_t at, F&& f) {
    try {
      return f();
    } catch (const Error& e) {
      throw Error(e.code(), where(at) + ": " + e.what());
    }
  }

  Lit literal() {
    Lit lit{};
    while (lit.nots < 2 && keyword_not()) ++lit.nots;
    lit.atom = atom();
    return lit;
  }

  void parse_rule() {
    const std::size_t start = pos_;
    std::optional<AtomId> head;
    bool choice = false;
    if (accept("{")) {
      choice = true;
      head = atom();
      expect("}");
    } else if (!text_.substr(pos_).starts_with(":-")) {
      head = atom();
    }
    std::vector<AtomId> pos, neg, dneg;
    if (accept(":-")) {
      do {
        const Lit lit = literal();
        (lit.nots == 0 ? pos : lit.nots == 1 ? neg : dneg).push_back(lit.atom);
      } while (accept(","));
    } else if (!head) {
      fail("expected a rule");
    }
    expect(".");
    try {
      if (choice) {
        builder_.choice(*head, std::move(pos), std::move(neg), std::move(dneg));
      } else {
        builder_.rule(head, std::move(pos), std::move(neg), std::move(dneg));
      }
    } catch (const Error& e) {
      throw Error(e.code(), where(start) + ": " + e.what());
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  ProgramBuilder builder_;
};

}  // namespace

Program parse_program(std::string_view text) { return Parser(text).run(); }

std::string render_program(const Program& p) {
  const Vocabulary& vocab = p.vocabulary();
  auto name = [&](AtomId a) {
    if (auto it = p.gamma().find(a); it != p.gamma().end()) return bar_name(it->second);
    return vocab.name(a);
  };
  std::string out;
  for (const Rule& r : p.rules()) {
    std::vector<std::string> lits;
    const bool choice = r.head && std::find(r.dneg.begin(), r.dneg.end(), *r.head) != r.dneg.end();
    for (AtomId a : r.pos) lits.push_back(name(a));
    for (AtomId a : r.neg) lits.push_back("not " + name(a));
    for (AtomId a : r.dneg)
      if (!choice || a != *r.head) lits.push_back("not not " + name(a));
    if (!r.head && lits.empty())
      throw Error(Errc::SyntaxError, "an empty-bodied denial has no text form");
    if (r.head) out += choice ? "{" + name(*r.head) + "}" : name(*r.head);
    if (!lits.empty()) {
      out += r.head ? " :- " : ":- ";
      for (std::size_t i = 0; i < lits.size(); ++i) out += (i ? ", " : "") + lits[i];
    }
    out += ".\n";
  }
  return out;
}

}  // namespace casp
