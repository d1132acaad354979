#pragma once

#include <stdexcept>
#include <string>

#include "rulediff/ast.hpp"
#include "rulediff/value.hpp"

namespace rulediff {

// Tri-state rule outcome. A rule whose root is `implies` is NotApplied when
// the left operand is false; rules without a top-level `implies` are always
// applied and map true/false onto Pass/Fail.
enum class TriState { Pass, Fail, NotApplied };

std::string to_string(TriState t);

struct EvalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Two-valued evaluation. `implies` is material implication. Any comparison,
// inclusion, or string predicate with a Null operand evaluates to false.
// Throws EvalError on substring indices out of range or runtime type
// mismatches the type checker would have flagged.
bool evaluate(const Expr& expr, const Record& record);

// Tri-state categorization; see TriState. The right operand of a
// non-applied implication is never evaluated.
TriState categorize(const Expr& expr, const Record& record);

}  // namespace rulediff
