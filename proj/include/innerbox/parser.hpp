// Reader for the problem text format:
//
//   var <name> in [<lo>, <hi>];          (one or more)
//   forall <name> in [<lo>, <hi>]:       (optional, at most once)
//   <expr> <rel> <expr>                  (one constraint per line or ';')
//
// expr   := term (('+'|'-') term)*
// term   := unary (('*'|'/') unary)*
// unary  := '-' unary | factor
// factor := base ('^' integer)?
// base   := number | name | 'pi' | '(' expr ')' | fn '(' expr ')'
// fn     := sin | cos | exp | log | sqrt
// rel    := '<=' | '>=' | '<' | '>'
//
// Strict relations are read as their non-strict counterparts. A domain bound
// written as a single signed number denotes the double nearest to it; any
// other constant expression (e.g. "2*pi") is enclosed outward. '#' starts a
// comment.

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "innerbox/expr.hpp"

namespace innerbox {

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, int column, const std::string& what);
  int line() const { return line_; }
  int column() const { return column_; }
  const std::string& detail() const { return detail_; }

 private:
  int line_;
  int column_;
  std::string detail_;
};

/// Throws ParseError on syntax errors, unbound identifiers, equations and
/// unbounded initial domains.
Problem parse_problem(std::string_view text);

/// Parses a single expression over the given variables (indices follow the
/// order of `vars`).
Expr parse_expr(std::string_view text, const VarNames& vars);

Problem load_problem_file(const std::string& path);

}  // namespace innerbox
