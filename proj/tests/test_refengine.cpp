#include "doctest.h"
#include "rulediff/parse.hpp"
#include "rulediff/refengine.hpp"

using namespace rulediff;

namespace {

Rule make_rule(const std::string& text) {
  Rule r;
  r.id = "V19";
  r.version = 1;
  r.expression = parse(text);
  return r;
}

}  // namespace

TEST_CASE("validate wraps categorize") {
  Rule r = make_rule("A = 1 implies B = 2");
  Record pass = {{"A", std::int64_t{1}}, {"B", std::int64_t{2}}};
  CHECK(ref_validate(r, pass) == RefOutcome{TriState::Pass});

  // an absent variable reads as Null, so the left operand is false
  Record only_a = {{"A", std::int64_t{0}}};
  CHECK(ref_validate(r, only_a) == RefOutcome{TriState::NotApplied});
}

TEST_CASE("evaluation errors become EvalError outcomes") {
  Rule r = make_rule("substring(t, 5, 7) = 'x'");
  Record record = {{"t", std::string("ab")}};
  RefOutcome out = ref_validate(r, record);
  REQUIRE(out.is_error());
  CHECK(out.error().find("substring") != std::string::npos);
}

TEST_CASE("the reference engine ignores registry policy") {
  Rule active = make_rule("A = 1 implies B = 2");
  Rule inactive = active;
  inactive.active = false;
  Rule other_version = active;
  other_version.version = 2;

  Record record = {{"A", std::int64_t{1}}, {"B", std::int64_t{2}}};
  CHECK(ref_validate(active, record) == ref_validate(inactive, record));
  CHECK(ref_validate(active, record) == ref_validate(other_version, record));
}
