#pragma once

#include <string>
#include <vector>

#include "rulediff/ast.hpp"
#include "rulediff/value.hpp"

namespace rulediff {

struct Diagnostic {
  std::string message;
  Path path;

  bool operator==(const Diagnostic&) const = default;
};

// Static checks against a schema: unknown variables, comparisons between
// incompatible declared types, substring/string predicates on non-text
// variables, inclusion lists with elements incompatible with the operand.
// Empty result means well-typed.
std::vector<Diagnostic> typecheck(const Expr& expr, const Schema& schema);

}  // namespace rulediff
