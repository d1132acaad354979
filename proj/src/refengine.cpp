#include "rulediff/refengine.hpp"

namespace rulediff {

std::string to_string(const RefOutcome& o) {
  if (o.is_error()) return "EvalError: " + o.error();
  return to_string(o.result());
}

RefOutcome ref_validate(const Rule& rule, const Record& record) {
  try {
    return {categorize(rule.expression, record)};
  } catch (const EvalError& e) {
    return {std::string(e.what())};
  }
}

}  // namespace rulediff
