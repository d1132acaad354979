#include "doctest.h"
#include "rulediff/eval.hpp"
#include "rulediff/parse.hpp"
#include "rulediff/typecheck.hpp"
#include "support/ast_gen.hpp"

using namespace rulediff;

namespace {

Record rec(std::initializer_list<std::pair<std::string, Value>> pairs) {
  Record r;
  for (auto& [k, v] : pairs) r[k] = v;
  return r;
}

const Schema kSchema = {
    {"A", ValueType::Integer},  {"B", ValueType::Integer},
    {"t", ValueType::Text},     {"topo", ValueType::Text},
    {"d", ValueType::Date},     {"w", ValueType::Decimal},
};

}  // namespace

TEST_CASE("typecheck accepts compatible comparisons") {
  CHECK(typecheck(parse("d < date('2020-01-01')"), kSchema).empty());
  CHECK(typecheck(parse("A = 1 implies B = 2"), kSchema).empty());
  CHECK(typecheck(parse("A < w"), kSchema).empty());  // numeric cross-type
  CHECK(typecheck(parse("substring(t, 1, 2) = 'ab'"), kSchema).empty());
}

TEST_CASE("typecheck flags type mismatches") {
  auto diags = typecheck(parse("t < 3"), kSchema);
  REQUIRE(diags.size() == 1);
  CHECK(diags[0].message.find("text") != std::string::npos);

  CHECK(!typecheck(parse("d = 3"), kSchema).empty());
  CHECK(!typecheck(parse("A = 'x'"), kSchema).empty());
}

TEST_CASE("typecheck flags unknown variables") {
  auto diags = typecheck(parse("unknown = 1"), kSchema);
  REQUIRE(diags.size() == 1);
  CHECK(diags[0].message.find("unknown variable") != std::string::npos);
}

TEST_CASE("typecheck flags substring and predicates on non-text") {
  CHECK(!typecheck(parse("substring(A, 1, 2) = 'x'"), kSchema).empty());
  CHECK(!typecheck(parse("startswith(A, 'x')"), kSchema).empty());
  CHECK(!typecheck(parse("A in ['x', 'y']"), kSchema).empty());
}

TEST_CASE("material implication truth table") {
  Expr e = parse("A = 1 implies B = 2");
  CHECK(evaluate(e, rec({{"A", std::int64_t{1}}, {"B", std::int64_t{2}}})));
  CHECK(!evaluate(e, rec({{"A", std::int64_t{1}}, {"B", std::int64_t{3}}})));
  CHECK(evaluate(e, rec({{"A", std::int64_t{0}}, {"B", std::int64_t{3}}})));
}

TEST_CASE("null operands make predicates false") {
  CHECK(!evaluate(parse("A = 1"), rec({})));
  CHECK(!evaluate(parse("A != 1"), rec({})));  // no three-valued logic
  CHECK(!evaluate(parse("A = 1"), rec({{"A", Null{}}})));
  CHECK(!evaluate(parse("topo in ['C50']"), rec({})));
  CHECK(!evaluate(parse("startswith(topo, 'C5')"), rec({})));
  CHECK(!evaluate(parse("substring(t, 1, 2) = 'ab'"), rec({})));
  // negation still applies on top of the false predicate
  CHECK(evaluate(parse("not A = 1"), rec({})));
}

TEST_CASE("substring is 1-based inclusive and errors out of range") {
  Record r = rec({{"t", std::string("abcdef")}});
  CHECK(evaluate(parse("substring(t, 2, 4) = 'bcd'"), r));
  CHECK(evaluate(parse("substring(t, 1, 6) = 'abcdef'"), r));
  CHECK(evaluate(parse("substring(t, 3, 3) = 'c'"), r));
  CHECK_THROWS_AS(evaluate(parse("substring(t, 0, 2) = 'ab'"), r), EvalError);
  CHECK_THROWS_AS(evaluate(parse("substring(t, 1, 7) = 'x'"), r), EvalError);
  CHECK_THROWS_AS(evaluate(parse("substring(t, 4, 2) = 'x'"), r), EvalError);
  CHECK_THROWS_AS(
      evaluate(parse("substring(t, 5, 7) = 'x'"), rec({{"t", std::string("ab")}})),
      EvalError);
}

TEST_CASE("string predicates") {
  Record r = rec({{"topo", std::string("C509")}});
  CHECK(evaluate(parse("startswith(topo, 'C5')"), r));
  CHECK(!evaluate(parse("startswith(topo, 'C6')"), r));
  CHECK(evaluate(parse("endswith(topo, '09')"), r));
  CHECK(!evaluate(parse("endswith(topo, 'C509X')"), r));  // longer than value
}

TEST_CASE("numeric comparison crosses integer and decimal") {
  CHECK(evaluate(parse("w = 2"), rec({{"w", 2.0}})));
  CHECK(evaluate(parse("A < 2.5"), rec({{"A", std::int64_t{2}}})));
  // text comparisons are lexicographic
  CHECK(evaluate(parse("t < 'b'"), rec({{"t", std::string("az")}})));
  // runtime cross-type text/number comparison is an error
  CHECK_THROWS_AS(evaluate(parse("t = 3"), rec({{"t", std::string("3")}})),
                  EvalError);
}

TEST_CASE("date comparisons") {
  Record r = rec({{"d", Date{2020, 6, 15}}});
  CHECK(evaluate(parse("d > date('2020-06-14')"), r));
  CHECK(evaluate(parse("d <= date('2020-06-15')"), r));
  CHECK(!evaluate(parse("d < date('2019-12-31')"), r));
}

TEST_CASE("categorize follows the tri-state rule") {
  Expr e = parse("A = 1 implies B = 2");
  CHECK(categorize(e, rec({{"A", std::int64_t{1}}, {"B", std::int64_t{2}}})) ==
        TriState::Pass);
  CHECK(categorize(e, rec({{"A", std::int64_t{1}}, {"B", std::int64_t{3}}})) ==
        TriState::Fail);
  CHECK(categorize(e, rec({{"A", std::int64_t{0}}, {"B", std::int64_t{3}}})) ==
        TriState::NotApplied);
  CHECK(categorize(e, rec({{"A", std::int64_t{0}}, {"B", std::int64_t{2}}})) ==
        TriState::NotApplied);  // irrespective of the right operand
}

TEST_CASE("rules without an implies root are always applied") {
  Expr e = parse("A = 1");
  CHECK(categorize(e, rec({{"A", std::int64_t{1}}})) == TriState::Pass);
  CHECK(categorize(e, rec({{"A", std::int64_t{2}}})) == TriState::Fail);
}

TEST_CASE("a false condition suppresses right-operand evaluation") {
  // the right operand would raise an evaluation error
  Expr e = parse("A = 1 implies substring(t, 9, 9) = 'x'");
  Record r = rec({{"A", std::int64_t{0}}, {"t", std::string("ab")}});
  CHECK(categorize(e, r) == TriState::NotApplied);
}

TEST_CASE("implies is equivalent to or-not") {
  testsupport::Rng rng(23);
  for (int i = 0; i < 150; ++i) {
    Expr left = testsupport::gen_small_bool(rng, {"A", "B", "C"}, 2);
    Expr right = testsupport::gen_small_bool(rng, {"A", "B", "C"}, 2);
    Expr implication = Expr::implies(left, right);
    Expr rewritten = Expr::or_of(Expr::not_of(left), right);
    for (const auto& record : testsupport::all_small_records(implication)) {
      CHECK(evaluate(implication, record) == evaluate(rewritten, record));
    }
  }
}

TEST_CASE("categorize agrees with the independent truth-table oracle") {
  testsupport::Rng rng(5);
  for (int i = 0; i < 150; ++i) {
    Expr rule = testsupport::gen_small_rule(rng, 4);
    for (const auto& record : testsupport::all_small_records(rule)) {
      CHECK(categorize(rule, record) == testsupport::simple_categorize(rule, record));
    }
  }
}
