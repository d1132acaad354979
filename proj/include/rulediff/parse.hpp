#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "rulediff/ast.hpp"

namespace rulediff {

struct ParseError : std::runtime_error {
  ParseError(std::string msg, int line, int column,
             std::vector<std::string> expected);

  int line;
  int column;
  std::vector<std::string> expected;
};

// Grammar, lowest to highest precedence:
//
//   expr    := orExpr ('implies' expr)?            -- right-associative
//   orExpr  := andExpr ('or' andExpr)*
//   andExpr := unary ('and' unary)*
//   unary   := 'not' unary | predicate
//   predicate := '(' expr ')'
//             | startswith '(' var ',' textLiteral ')'
//             | endswith '(' var ',' textLiteral ')'
//             | operand ( cmpOp operand | ('in'|'notIn') list )
//   operand := var | literal | substring '(' var ',' int ',' int ')'
//   literal := integer | decimal | 'text' | date('YYYY-MM-DD')
//   list    := '[' literal (',' literal)* ']'
//
// substring indices are 1-based inclusive and must be non-negative integers.
Expr parse(const std::string& text);

// Canonical source form; parse(unparse(e)) is structurally equal to e.
std::string unparse(const Expr& e);

}  // namespace rulediff
