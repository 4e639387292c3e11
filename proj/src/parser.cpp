#include "innerbox/parser.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

namespace innerbox {

ParseError::ParseError(int line, int column, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
      line_(line),
      column_(column),
      detail_(what) {}

namespace {

enum class Tok { number, ident, punct, newline, end };

struct Token {
  Tok kind = Tok::end;
  std::string text;
  int line = 1;
  int column = 1;
};

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    i += n;
    col += static_cast<int>(n);
  };
  while (i < src.size()) {
    char c = src[i];
    if (c == '\n') {
      out.push_back({Tok::newline, "\n", line, col});
      ++i;
      ++line;
      col = 1;
      continue;
    }
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    Token t{Tok::end, "", line, col};
    if (std::isdigit(static_cast<unsigned char>(c)) || (c == '.' && i + 1 < src.size() && std::isdigit(static_cast<unsigned char>(src[i + 1])))) {
      std::size_t j = i;
      while (j < src.size() && (std::isdigit(static_cast<unsigned char>(src[j])) || src[j] == '.')) ++j;
      if (j < src.size() && (src[j] == 'e' || src[j] == 'E')) {
        std::size_t k = j + 1;
        if (k < src.size() && (src[k] == '+' || src[k] == '-')) ++k;
        if (k < src.size() && std::isdigit(static_cast<unsigned char>(src[k]))) {
          while (k < src.size() && std::isdigit(static_cast<unsigned char>(src[k]))) ++k;
          j = k;
        }
      }
      t.kind = Tok::number;
      t.text = std::string(src.substr(i, j - i));
      advance(j - i);
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
      t.kind = Tok::ident;
      t.text = std::string(src.substr(i, j - i));
      advance(j - i);
    } else {
      t.kind = Tok::punct;
      if ((c == '<' || c == '>' || c == '=') && i + 1 < src.size() && src[i + 1] == '=') {
        t.text = std::string(src.substr(i, 2));
        advance(2);
      } else if (std::string_view("+-*/^()[],;:<>=").find(c) != std::string_view::npos) {
        t.text = std::string(1, c);
        advance(1);
      } else {
        throw ParseError(line, col, std::string("unexpected character '") + c + "'");
      }
    }
    out.push_back(std::move(t));
  }
  out.push_back({Tok::end, "", line, col});
  return out;
}

const std::vector<std::string> kFunctions = {"sin", "cos", "exp", "log", "sqrt"};
const std::vector<std::string> kKeywords = {"var", "forall", "in", "pi", "sin", "cos", "exp", "log", "sqrt"};

bool is_keyword(const std::string& s) { return std::find(kKeywords.begin(), kKeywords.end(), s) != kKeywords.end(); }

Op function_op(const std::string& s) {
  if (s == "sin") return Op::sin;
  if (s == "cos") return Op::cos;
  if (s == "exp") return Op::exp;
  if (s == "log") return Op::log;
  return Op::sqrt;
}

class Parser {
 public:
  explicit Parser(std::string_view src) : toks_(lex(src)) {}

  Problem problem() {
    ProblemBuilder builder;
    bool seen_constraint = false, seen_forall = false;
    while (true) {
      skip_separators();
      const Token& t = peek();
      if (t.kind == Tok::end) break;
      if (t.kind == Tok::ident && t.text == "var") {
        if (seen_forall || seen_constraint)
          throw ParseError(t.line, t.column, "variable declarations must precede the quantifier and constraints");
        next();
        auto [name, dom] = declaration();
        builder.var(name, dom);
        declare(name);
        end_of_statement();
        continue;
      }
      if (t.kind == Tok::ident && t.text == "forall") {
        if (seen_forall) throw ParseError(t.line, t.column, "only one quantified variable is supported");
        if (seen_constraint) throw ParseError(t.line, t.column, "the quantifier must precede the constraints");
        next();
        auto [name, dom] = declaration();
        builder.forall(name, dom);
        declare(name);
        expect(":");
        seen_forall = true;
        continue;
      }
      builder.add(constraint());
      seen_constraint = true;
      end_of_statement();
    }
    try {
      return builder.build();
    } catch (const std::invalid_argument& e) {
      throw ParseError(peek().line, peek().column, e.what());
    }
  }

  Expr lone_expression(const VarNames& vars) {
    for (const auto& v : vars) declare(v);
    skip_separators();
    Expr e = expr();
    skip_separators();
    if (peek().kind != Tok::end) fail(peek(), "unexpected '" + peek().text + "' after expression");
    return e;
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  VarNames vars_;

  const Token& peek(std::size_t ahead = 0) const { return toks_[std::min(pos_ + ahead, toks_.size() - 1)]; }
  const Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

  [[noreturn]] void fail(const Token& t, const std::string& msg) const { throw ParseError(t.line, t.column, msg); }

  bool at_punct(const char* p) const { return peek().kind == Tok::punct && peek().text == p; }

  void expect(const char* p) {
    if (!at_punct(p)) {
      const Token& t = peek();
      fail(t, std::string("expected '") + p + "' but found " + (t.kind == Tok::end ? "end of input" : t.kind == Tok::newline ? "end of line" : "'" + t.text + "'"));
    }
    next();
  }

  void skip_separators() {
    while (peek().kind == Tok::newline || at_punct(";")) next();
  }

  void end_of_statement() {
    const Token& t = peek();
    if (t.kind == Tok::newline || t.kind == Tok::end || at_punct(";")) return;
    fail(t, "unexpected '" + t.text + "'");
  }

  void declare(const std::string& name) { vars_.push_back(name); }

  std::pair<std::string, Interval> declaration() {
    const Token& nt = peek();
    if (nt.kind != Tok::ident) fail(nt, "expected a variable name");
    if (is_keyword(nt.text)) fail(nt, "'" + nt.text + "' is reserved");
    if (std::find(vars_.begin(), vars_.end(), nt.text) != vars_.end()) fail(nt, "duplicate variable '" + nt.text + "'");
    std::string name = next().text;
    if (!(peek().kind == Tok::ident && peek().text == "in")) fail(peek(), "expected 'in'");
    next();
    const Token& open = peek();
    expect("[");
    double lo = bound(true);
    expect(",");
    double hi = bound(false);
    expect("]");
    if (!std::isfinite(lo) || !std::isfinite(hi)) fail(open, "unbounded initial domain for '" + name + "'");
    if (lo > hi) fail(open, "empty domain for '" + name + "'");
    return {name, Interval(lo, hi)};
  }

  double bound(bool lower) {
    // A single signed literal names a double; anything else is enclosed.
    std::size_t k = 0;
    bool negative = false;
    if (peek().kind == Tok::punct && peek().text == "-") {
      negative = true;
      k = 1;
    }
    const Token& lit = peek(k);
    const Token& after = peek(k + 1);
    if (lit.kind == Tok::number && after.kind == Tok::punct && (after.text == "," || after.text == "]")) {
      for (std::size_t s = 0; s <= k; ++s) next();
      double v = std::strtod(lit.text.c_str(), nullptr);
      return negative ? -v : v;
    }
    const Token& start = peek();
    Expr e = expr();
    if (!variables_of(e).empty()) fail(start, "domain bounds must be constant");
    Interval enc = eval_natural(e, std::span<const Interval>());
    if (enc.is_empty()) fail(start, "domain bound is undefined");
    return lower ? enc.lo() : enc.hi();
  }

  Constraint constraint() {
    Expr lhs = expr();
    const Token& rt = peek();
    if (rt.kind != Tok::punct) fail(rt, rt.kind == Tok::end || rt.kind == Tok::newline ? "expected a relation" : "unexpected '" + rt.text + "'");
    std::string rel = rt.text;
    if (rel == "=" || rel == "==") fail(rt, "equality constraints are not supported");
    if (rel != "<=" && rel != ">=" && rel != "<" && rel != ">") fail(rt, "expected a relation but found '" + rel + "'");
    next();
    Expr rhs = expr();
    return (rel == "<=" || rel == "<") ? make_leq(lhs, rhs) : make_geq(lhs, rhs);
  }

  Expr expr() {
    Expr e = term();
    while (at_punct("+") || at_punct("-")) {
      Op op = next().text == "+" ? Op::add : Op::sub;
      e = Expr::binary(op, e, term());
    }
    return e;
  }

  Expr term() {
    Expr e = unary();
    while (at_punct("*") || at_punct("/")) {
      Op op = next().text == "*" ? Op::mul : Op::div;
      e = Expr::binary(op, e, unary());
    }
    return e;
  }

  Expr unary() {
    if (at_punct("-")) {
      next();
      const Token& lit = peek();
      bool powered = peek(1).kind == Tok::punct && peek(1).text == "^";
      if (lit.kind == Tok::number && !powered) {
        next();
        return number(lit, true);
      }
      return Expr::unary(Op::neg, unary());
    }
    return factor();
  }

  Expr factor() {
    Expr b = base();
    if (at_punct("^")) {
      next();
      const Token& t = peek();
      if (t.kind != Tok::number || t.text.find_first_not_of("0123456789") != std::string::npos)
        fail(t, "exponent must be a non-negative integer");
      next();
      int n = 0;
      try {
        n = std::stoi(t.text);
      } catch (const std::exception&) {
        fail(t, "exponent out of range");
      }
      return Expr::unary(Op::pow, b, n);
    }
    return b;
  }

  Expr number(const Token& t, bool negative) {
    Interval enc;
    try {
      enc = decimal_enclosure(t.text);
    } catch (const std::invalid_argument& e) {
      fail(t, e.what());
    }
    if (negative) return Expr::constant(neg(enc), "-" + t.text);
    return Expr::constant(enc, t.text);
  }

  Expr base() {
    const Token& t = peek();
    if (t.kind == Tok::number) {
      next();
      return number(t, false);
    }
    if (at_punct("(")) {
      next();
      Expr e = expr();
      expect(")");
      return e;
    }
    if (t.kind == Tok::ident) {
      if (t.text == "pi") {
        next();
        return Expr::pi();
      }
      if (std::find(kFunctions.begin(), kFunctions.end(), t.text) != kFunctions.end()) {
        Op op = function_op(t.text);
        next();
        expect("(");
        Expr arg = expr();
        expect(")");
        return Expr::unary(op, arg);
      }
      auto it = std::find(vars_.begin(), vars_.end(), t.text);
      if (it == vars_.end()) fail(t, "unbound variable '" + t.text + "'");
      next();
      return Expr::variable(static_cast<std::size_t>(it - vars_.begin()), t.text);
    }
    if (t.kind == Tok::end || t.kind == Tok::newline) fail(t, "unexpected end of expression");
    fail(t, "unexpected '" + t.text + "'");
  }
};

}  // namespace

Problem parse_problem(std::string_view text) { return Parser(text).problem(); }

Expr parse_expr(std::string_view text, const VarNames& vars) { return Parser(text).lone_expression(vars); }

Problem load_problem_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open problem file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_problem(ss.str());
}

}  // namespace innerbox
