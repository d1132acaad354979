#pragma once

#include <string>
#include <variant>

#include "rulediff/eval.hpp"
#include "rulediff/registry.hpp"

namespace rulediff {

// Outcome of the policy-free reference engine: either a tri-state result or
// a documented evaluation error.
struct RefOutcome {
  std::variant<TriState, std::string> v;

  bool is_error() const { return std::holds_alternative<std::string>(v); }
  TriState result() const { return std::get<TriState>(v); }
  const std::string& error() const { return std::get<std::string>(v); }

  bool operator==(const RefOutcome&) const = default;
};

std::string to_string(const RefOutcome& o);

// Evaluates one rule on a bare record. Deliberately minimal: ignores the
// rule's active flag and any sibling versions, so every inconsistency a
// production service exhibits shows up as a mismatch against this baseline.
RefOutcome ref_validate(const Rule& rule, const Record& record);

}  // namespace rulediff
