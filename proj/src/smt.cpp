// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The casp2smt Authors

#include "casp2smt/smt.hpp"

#include "casp2smt/error.hpp"

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cstring>
#include <sstream>

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

namespace casp {

std::string_view to_string(Logic logic) { return logic == Logic::QF_LIA ? "QF_LIA" : "QF_LRA"; }

std::string_view to_string(Sort sort) {
  switch (sort) {
    case Sort::Bool: return "Bool";
    case Sort::Int: return "Int";
    case Sort::Real: return "Real";
  }
  return "?";
}

Logic logic_for(LexiconKind kind) {
  return kind == LexiconKind::IntegerLinear ? Logic::QF_LIA : Logic::QF_LRA;
}

const SmtDecl* SmtScript::find_decl(std::string_view symbol) const {
  auto it = std::lower_bound(decls.begin(), decls.end(), symbol,
                             [](const SmtDecl& d, std::string_view s) { return d.symbol < s; });
  if (it == decls.end() || it->symbol != symbol) return nullptr;
  return &*it;
}

std::string SmtScript::text() const {
  std::string out = "(set-logic " + std::string(to_string(logic)) + ")\n";
  for (const auto& d : decls)
    out += "(declare-fun " + d.symbol + " () " + std::string(to_string(d.sort)) + ")\n";
  for (const auto& a : asserts) out += a + "\n";
  return out;
}

std::string SmtScript::query() const { return text() + "(check-sat)\n(get-model)\n"; }

// Rendering ----------------------------------------------------------------

std::string render_numeral(const Rational& value, Sort sort) {
  const Rational magnitude = abs(value);
  std::string text = magnitude.denominator() == 1
                         ? std::to_string(magnitude.numerator())
                         : "(/ " + std::to_string(magnitude.numerator()) + " " +
                               std::to_string(magnitude.denominator()) + ")";
  (void)sort;
  return value < 0 ? "(- " + text + ")" : text;
}

std::string render_constraint(const LinearConstraint& raw, Sort sort,
                              const std::map<std::string, std::string, std::less<>>& symbols) {
  const LinearConstraint c = normalize(raw);
  std::vector<std::string> terms;
  for (const auto& [var, coeff] : c.expr.terms()) {
    auto it = symbols.find(var);
    if (it == symbols.end()) throw Error(Errc::UnknownSymbol, "no symbol for variable '" + var + "'");
    const std::string& sym = it->second;
    if (coeff == Rational(1)) {
      terms.push_back(sym);
    } else if (coeff == Rational(-1)) {
      terms.push_back("(- " + sym + ")");
    } else {
      terms.push_back("(* " + render_numeral(coeff, sort) + " " + sym + ")");
    }
  }
  std::string lhs;
  if (terms.empty()) {
    lhs = "0";
  } else if (terms.size() == 1) {
    lhs = terms.front();
  } else {
    lhs = "(+";
    for (const auto& t : terms) lhs += " " + t;
    lhs += ")";
  }
  const std::string rhs = render_numeral(c.bound, sort);
  if (c.rel == Relation::NE) return "(not (= " + lhs + " " + rhs + "))";
  std::string op = c.rel == Relation::EQ ? "=" : std::string(symbol(c.rel));
  return "(" + op + " " + lhs + " " + rhs + ")";
}

namespace {

bool is_reserved_symbol(std::string_view s) {
  static const std::set<std::string, std::less<>> reserved = {
      "true",  "false",   "not",    "and",  "or",    "xor",     "distinct", "ite",
      "let",   "forall",  "exists", "match", "par",  "as",      "div",      "mod",
      "abs",   "to_real", "to_int", "is_int", "BINARY", "DECIMAL", "HEXADECIMAL",
      "NUMERAL", "STRING"};
  return reserved.contains(s);
}

std::string sanitize_symbol(std::string_view name) {
  static constexpr std::string_view extra = "~!@$%^&*_+=<>.?/-";
  std::string out;
  for (char ch : name)
    out += (std::isalnum(static_cast<unsigned char>(ch)) || extra.find(ch) != std::string_view::npos)
               ? ch
               : '_';
  if (out.empty() || std::isdigit(static_cast<unsigned char>(out.front()))) out.insert(0, "_");
  return out;
}

// "x>=12" -> "x_ge_12".
std::string mangle_constraint(std::string_view text) {
  std::string out;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char ch = text[i];
    const char next = i + 1 < text.size() ? text[i + 1] : '\0';
    if ((ch == '<' || ch == '>' || ch == '!') && next == '=') {
      out += ch == '<' ? "_le_" : ch == '>' ? "_ge_" : "_ne_";
      ++i;
    } else if (ch == '<') {
      out += "_lt_";
    } else if (ch == '>') {
      out += "_gt_";
    } else if (ch == '=') {
      out += "_eq_";
    } else if (ch == '+') {
      out += "_p_";
    } else if (ch == '-') {
      out += "_m_";
    } else if (ch == '/') {
      out += "_d_";
    } else if (ch == '*') {
    } else if (std::isalnum(static_cast<unsigned char>(ch)) || ch == '_') {
      out += ch;
    } else {
      out += '_';
    }
  }
  return out;
}

class SymbolTable {
 public:
  std::string claim(const std::string& base) {
    std::string candidate = base;
    for (std::size_t suffix = 1; used_.contains(candidate) || is_reserved_symbol(candidate);
         ++suffix)
      candidate = base + "_" + std::to_string(suffix);
    used_.insert(candidate);
    return candidate;
  }

 private:
  std::set<std::string> used_;
};

}  // namespace

SmtScript emit_script(const ClauseSet& clauses, const std::map<AtomId, LinearConstraint>& gamma,
                      LexiconKind kind, const AtomSet& also_declare) {
  const Vocabulary& vocab = clauses.vocabulary;
  const Sort num_sort = kind == LexiconKind::IntegerLinear ? Sort::Int : Sort::Real;
  SmtScript s;
  s.logic = logic_for(kind);

  AtomSet used = also_declare;
  for (const Clause& c : clauses.clauses)
    for (const Literal& l : c) used.insert(l.atom);

  std::vector<LinearConstraint> constraints;
  for (AtomId a : used.members()) {
    if (!vocab.is_irregular(a)) continue;
    auto it = gamma.find(a);
    if (it == gamma.end())
      throw Error(Errc::MissingGamma, "irregular atom '" + vocab.name(a) + "' has no constraint");
    constraints.push_back(it->second);
  }

  SymbolTable table;
  for (AtomId a : used.members())
    if (!vocab.is_irregular(a)) s.atom_symbols.emplace(a, table.claim(sanitize_symbol(vocab.name(a))));
  for (const auto& var : variables_of(constraints))
    s.var_symbols.emplace(var, table.claim(sanitize_symbol(var)));
  std::vector<std::pair<std::string, std::string>> bridges;
  for (AtomId a : used.members()) {
    if (!vocab.is_irregular(a)) continue;
    const LinearConstraint& c = gamma.at(a);
    const std::string sym = table.claim("b__" + mangle_constraint(to_string(normalize(c))));
    s.atom_symbols.emplace(a, sym);
    bridges.emplace_back(sym, "(assert (= " + sym + " " + render_constraint(c, num_sort, s.var_symbols) + "))");
  }

  for (const auto& [atom, sym] : s.atom_symbols) s.decls.push_back({sym, Sort::Bool});
  for (const auto& [var, sym] : s.var_symbols) s.decls.push_back({sym, num_sort});
  std::sort(s.decls.begin(), s.decls.end(),
            [](const SmtDecl& x, const SmtDecl& y) { return x.symbol < y.symbol; });

  std::sort(bridges.begin(), bridges.end());
  for (auto& [sym, text] : bridges) s.asserts.push_back(std::move(text));

  for (const Clause& c : clauses.clauses) {
    std::vector<std::string> lits;
    for (const Literal& l : c) {
      const std::string& sym = s.atom_symbols.at(l.atom);
      lits.push_back(l.positive ? sym : "(not " + sym + ")");
    }
    if (lits.empty()) {
      s.asserts.emplace_back("(assert false)");
    } else if (lits.size() == 1) {
      s.asserts.push_back("(assert " + lits.front() + ")");
    } else {
      std::string text = "(assert (or";
      for (const auto& l : lits) text += " " + l;
      s.asserts.push_back(text + "))");
    }
  }
  return s;
}

SmtScript assert_box(SmtScript s, const std::vector<std::string>& vars, Box box) {
  for (const auto& var : vars) {
    auto it = s.var_symbols.find(var);
    if (it == s.var_symbols.end()) continue;
    const Sort sort = s.find_decl(it->second)->sort;
    s.asserts.push_back("(assert (and (<= " + render_numeral(Rational(box.lo), sort) + " " +
                        it->second + ") (<= " + it->second + " " +
                        render_numeral(Rational(box.hi), sort) + ")))");
  }
  return s;
}

// S-expressions ------------------------------------------------------------

namespace {

struct SExpr {
  std::string atom;
  std::vector<SExpr> list;
  bool is_list = false;
};

class SExprReader {
 public:
  explicit SExprReader(std::string_view text) : text_(text) {}

  std::vector<SExpr> read_all() {
    std::vector<SExpr> out;
    while (true) {
      skip();
      if (pos_ >= text_.size()) break;
      out.push_back(read());
    }
    return out;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(Errc::SolverProtocolError, msg + " near '" + excerpt() + "'");
  }

  std::string excerpt() const {
    const std::size_t start = pos_ > 40 ? pos_ - 40 : 0;
    return std::string(text_.substr(start, 80));
  }

  void skip() {
    while (pos_ < text_.size()) {
      if (std::isspace(static_cast<unsigned char>(text_[pos_]))) {
        ++pos_;
      } else if (text_[pos_] == ';') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  SExpr read() {
    skip();
    if (pos_ >= text_.size()) fail("unexpected end of solver output");
    const char ch = text_[pos_];
    if (ch == '(') {
      ++pos_;
      SExpr e;
      e.is_list = true;
      while (true) {
        skip();
        if (pos_ >= text_.size()) fail("unbalanced parenthesis in solver output");
        if (text_[pos_] == ')') {
          ++pos_;
          return e;
        }
        e.list.push_back(read());
      }
    }
    if (ch == ')') fail("unexpected ')' in solver output");
    SExpr e;
    if (ch == '|') {
      const std::size_t end = text_.find('|', pos_ + 1);
      if (end == std::string_view::npos) fail("unterminated quoted symbol");
      e.atom = std::string(text_.substr(pos_ + 1, end - pos_ - 1));
      pos_ = end + 1;
      return e;
    }
    if (ch == '"') {
      std::size_t end = pos_ + 1;
      while (end < text_.size()) {
        if (text_[end] == '"') {
          if (end + 1 < text_.size() && text_[end + 1] == '"') {
            end += 2;
            continue;
          }
          break;
        }
        ++end;
      }
      if (end >= text_.size()) fail("unterminated string literal");
      e.atom = std::string(text_.substr(pos_, end - pos_ + 1));
      pos_ = end + 1;
      return e;
    }
    const std::size_t start = pos_;
    while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) &&
           text_[pos_] != '(' && text_[pos_] != ')')
      ++pos_;
    e.atom = std::string(text_.substr(start, pos_ - start));
    return e;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

bool is_error(const SExpr& e) {
  return e.is_list && !e.list.empty() && !e.list.front().is_list && e.list.front().atom == "error";
}

std::optional<Rational> parse_decimal(std::string_view s) {
  if (s.empty()) return std::nullopt;
  std::int64_t num = 0;
  std::int64_t den = 1;
  bool seen_dot = false;
  std::size_t digits = 0;
  for (char ch : s) {
    if (ch == '.' && !seen_dot) {
      seen_dot = true;
      continue;
    }
    if (!std::isdigit(static_cast<unsigned char>(ch))) return std::nullopt;
    if (++digits > 18) throw Error(Errc::SolverProtocolError, "numeral too large: " + std::string(s));
    num = num * 10 + (ch - '0');
    if (seen_dot) den *= 10;
  }
  return Rational(num, den);
}

Rational parse_value(const SExpr& e) {
  if (!e.is_list) {
    if (auto v = parse_decimal(e.atom)) return *v;
    throw Error(Errc::SolverProtocolError, "unexpected numeric value '" + e.atom + "'");
  }
  if (e.list.size() == 2 && !e.list[0].is_list && e.list[0].atom == "-")
    return -parse_value(e.list[1]);
  if (e.list.size() == 3 && !e.list[0].is_list && e.list[0].atom == "/") {
    const Rational den = parse_value(e.list[2]);
    if (den == Rational(0)) throw Error(Errc::SolverProtocolError, "division by zero in model value");
    return parse_value(e.list[1]) / den;
  }
  throw Error(Errc::SolverProtocolError, "unsupported model value expression");
}

void collect_definitions(const SExpr& e, SmtModel& m) {
  if (!e.is_list) return;
  if (is_error(e)) throw Error(Errc::SolverProtocolError, "solver reported an error instead of a model");
  if (!e.list.empty() && !e.list[0].is_list && e.list[0].atom == "define-fun") {
    if (e.list.size() != 5 || e.list[1].is_list || !e.list[2].is_list || e.list[3].is_list)
      throw Error(Errc::SolverProtocolError, "malformed define-fun entry");
    if (!e.list[2].list.empty()) return;  // function with arguments
    const std::string& name = e.list[1].atom;
    const std::string& sort = e.list[3].atom;
    const SExpr& value = e.list[4];
    if (sort == "Bool") {
      if (value.is_list || (value.atom != "true" && value.atom != "false"))
        throw Error(Errc::SolverProtocolError, "unexpected Bool value for '" + name + "'");
      m.bools[name] = value.atom == "true";
    } else if (sort == "Int" || sort == "Real") {
      m.nums[name] = parse_value(value);
    }
    return;
  }
  for (const auto& child : e.list) collect_definitions(child, m);
}

}  // namespace

SmtModel parse_model(std::string_view text) {
  SmtModel m;
  for (const auto& e : SExprReader(text).read_all()) collect_definitions(e, m);
  return m;
}

// Process driver -----------------------------------------------------------

namespace {

class Fd {
 public:
  Fd() = default;
  explicit Fd(int fd) : fd_(fd) {}
  Fd(Fd&& other) noexcept : fd_(std::exchange(other.fd_, -1)) {}
  Fd& operator=(Fd&& other) noexcept {
    if (this != &other) {
      reset();
      fd_ = std::exchange(other.fd_, -1);
    }
    return *this;
  }
  Fd(const Fd&) = delete;
  Fd& operator=(const Fd&) = delete;
  ~Fd() { reset(); }

  int get() const { return fd_; }
  void reset() {
    if (fd_ >= 0) ::close(fd_);
    fd_ = -1;
  }

 private:
  int fd_ = -1;
};

std::vector<std::string> split_command(std::string_view command) {
  std::vector<std::string> out;
  std::istringstream in{std::string(command)};
  for (std::string word; in >> word;) out.push_back(word);
  return out;
}

struct ProcessOutput {
  std::string text;
  bool timed_out = false;
};

ProcessOutput run_process(const std::vector<std::string>& argv, const std::string& input,
                          std::chrono::milliseconds timeout) {
  int in_pair[2];
  int out_pipe[2];
  int err_pipe[2];
  if (::socketpair(AF_UNIX, SOCK_STREAM | SOCK_CLOEXEC, 0, in_pair) != 0)
    throw Error(Errc::SolverSpawnFailure, std::string("socketpair: ") + std::strerror(errno));
  Fd in_parent(in_pair[0]), in_child(in_pair[1]);
  if (::pipe2(out_pipe, O_CLOEXEC) != 0)
    throw Error(Errc::SolverSpawnFailure, std::string("pipe: ") + std::strerror(errno));
  Fd out_read(out_pipe[0]), out_write(out_pipe[1]);
  if (::pipe2(err_pipe, O_CLOEXEC) != 0)
    throw Error(Errc::SolverSpawnFailure, std::string("pipe: ") + std::strerror(errno));
  Fd exec_read(err_pipe[0]), exec_write(err_pipe[1]);

  std::vector<char*> args;
  for (const auto& a : argv) args.push_back(const_cast<char*>(a.c_str()));
  args.push_back(nullptr);

  const pid_t pid = ::fork();
  if (pid < 0) throw Error(Errc::SolverSpawnFailure, std::string("fork: ") + std::strerror(errno));
  if (pid == 0) {
    ::dup2(in_child.get(), STDIN_FILENO);
    ::dup2(out_write.get(), STDOUT_FILENO);
    ::dup2(out_write.get(), STDERR_FILENO);
    ::execvp(args[0], args.data());
    const int err = errno;
    [[maybe_unused]] auto n = ::write(exec_write.get(), &err, sizeof err);
    ::_exit(127);
  }
  in_child.reset();
  out_write.reset();
  exec_write.reset();

  int exec_errno = 0;
  if (::read(exec_read.get(), &exec_errno, sizeof exec_errno) == sizeof exec_errno) {
    ::waitpid(pid, nullptr, 0);
    throw Error(Errc::SolverSpawnFailure,
                "cannot execute '" + argv[0] + "': " + std::strerror(exec_errno));
  }

  ProcessOutput result;
  std::size_t written = 0;
  if (input.empty()) ::shutdown(in_parent.get(), SHUT_WR);
  const auto deadline = std::chrono::steady_clock::now() + timeout;
  bool open = true;
  while (open) {
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
        deadline - std::chrono::steady_clock::now());
    if (left.count() <= 0) {
      result.timed_out = true;
      break;
    }
    pollfd fds[2] = {{out_read.get(), POLLIN, 0}, {in_parent.get(), POLLOUT, 0}};
    const nfds_t count = written < input.size() ? 2 : 1;
    const int ready = ::poll(fds, count, static_cast<int>(left.count()));
    if (ready < 0) {
      if (errno == EINTR) continue;
      break;
    }
    if (count == 2 && (fds[1].revents & (POLLOUT | POLLERR | POLLHUP)) != 0) {
      const ssize_t n = ::send(in_parent.get(), input.data() + written, input.size() - written,
                               MSG_NOSIGNAL);
      if (n > 0) written += static_cast<std::size_t>(n);
      if (n < 0 && errno != EAGAIN && errno != EINTR) written = input.size();
      if (written == input.size()) ::shutdown(in_parent.get(), SHUT_WR);
    }
    if ((fds[0].revents & (POLLIN | POLLHUP | POLLERR)) != 0) {
      char buf[4096];
      const ssize_t n = ::read(out_read.get(), buf, sizeof buf);
      if (n > 0) {
        result.text.append(buf, static_cast<std::size_t>(n));
      } else if (n == 0 || errno != EINTR) {
        open = false;
      }
    }
  }
  if (result.timed_out) ::kill(pid, SIGKILL);
  ::waitpid(pid, nullptr, 0);
  return result;
}

std::string excerpt(const std::string& text) {
  return text.size() > 200 ? text.substr(0, 200) + "..." : text;
}

}  // namespace

SolverResult run_solver(const SmtScript& s, const SolverOptions& options) {
  const auto argv = split_command(options.command);
  if (argv.empty()) throw Error(Errc::SolverSpawnFailure, "empty solver command");
  ProcessOutput proc = run_process(argv, s.query(), options.timeout);

  SolverResult result;
  result.output = std::move(proc.text);
  if (proc.timed_out) return result;

  // Output that does not even parse carries no answer: Unknown.
  std::vector<SExpr> items;
  try {
    items = SExprReader(result.output).read_all();
  } catch (const Error&) {
    return result;
  }
  std::size_t i = 0;
  for (; i < items.size(); ++i) {
    if (is_error(items[i]))
      throw Error(Errc::SolverProtocolError, "solver error: " + excerpt(result.output));
    if (!items[i].is_list &&
        (items[i].atom == "sat" || items[i].atom == "unsat" || items[i].atom == "unknown"))
      break;
  }
  if (i == items.size()) return result;
  if (items[i].atom == "unsat") {
    result.status = SolverStatus::Unsat;
    return result;
  }
  if (items[i].atom == "unknown") return result;

  result.status = SolverStatus::Sat;
  if (i + 1 >= items.size())
    throw Error(Errc::SolverProtocolError, "sat without a model: " + excerpt(result.output));
  try {
    collect_definitions(items[i + 1], result.model);
  } catch (const Error& e) {
    throw Error(Errc::SolverProtocolError, std::string(e.what()) + "; output: " + excerpt(result.output));
  }
  for (const auto& d : s.decls) {
    if (d.sort == Sort::Bool) {
      result.model.bools.try_emplace(d.symbol, false);
    } else {
      result.model.nums.try_emplace(d.symbol, Rational(0));
    }
  }
  return result;
}

SmtScript block_model(SmtScript s, const SmtModel& m, const std::set<std::string>& scope) {
  std::vector<std::string> lits;
  for (const auto& sym : scope) {
    const SmtDecl* decl = s.find_decl(sym);
    if (!decl) throw Error(Errc::UnknownSymbol, "symbol '" + sym + "' is not declared");
    if (decl->sort == Sort::Bool) {
      auto it = m.bools.find(sym);
      if (it == m.bools.end()) throw Error(Errc::UnknownSymbol, "model has no value for '" + sym + "'");
      lits.push_back(it->second ? sym : "(not " + sym + ")");
    } else {
      auto it = m.nums.find(sym);
      if (it == m.nums.end()) throw Error(Errc::UnknownSymbol, "model has no value for '" + sym + "'");
      lits.push_back("(= " + sym + " " + render_numeral(it->second, decl->sort) + ")");
    }
  }
  if (lits.empty()) {
    s.asserts.emplace_back("(assert false)");
  } else if (lits.size() == 1) {
    s.asserts.push_back("(assert (not " + lits.front() + "))");
  } else {
    std::string text = "(assert (not (and";
    for (const auto& l : lits) text += " " + l;
    s.asserts.push_back(text + ")))");
  }
  return s;
}

Decoded decode(const SmtModel& m, const SmtScript& s, const AtomSet& vocab,
               const std::vector<std::string>& vars) {
  Decoded out;
  for (AtomId a : vocab.members()) {
    auto sym = s.atom_symbols.find(a);
    if (sym == s.atom_symbols.end()) continue;
    auto value = m.bools.find(sym->second);
    if (value != m.bools.end() && value->second) out.atoms.insert(a);
  }
  for (const auto& var : vars) {
    Rational value{0};
    if (auto sym = s.var_symbols.find(var); sym != s.var_symbols.end()) {
      if (auto it = m.nums.find(sym->second); it != m.nums.end()) value = it->second;
    }
    out.valuation.emplace(var, value);
  }
  return out;
}

}  // namespace casp
