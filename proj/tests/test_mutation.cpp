#include "doctest.h"
#include "rulediff/mutation.hpp"
#include "rulediff/parse.hpp"
#include "support/ast_gen.hpp"

using namespace rulediff;

namespace {

Rule make_rule(const std::string& text) {
  Rule r;
  r.id = "R1";
  r.version = 1;
  r.expression = parse(text);
  return r;
}

}  // namespace

TEST_CASE("CO sites: one per and/or node") {
  Rule r = make_rule("A = 1 and B = 2 and C = 3 and D = 4 implies E = 5");
  CHECK(sites(r.expression, MutationOperator::CO).size() == 3);
  CHECK(sites(parse("A = 1 or B = 2"), MutationOperator::CO).size() == 1);
}

TEST_CASE("SR sites: zero without an implies") {
  CHECK(sites(parse("A = 1 and B = 2"), MutationOperator::SR).empty());
  CHECK(sites(parse("A = 1 implies B = 2"), MutationOperator::SR).size() == 1);
  // swapping identical operands would not change the rule
  CHECK(sites(parse("A = 1 implies A = 1"), MutationOperator::SR).empty());
}

TEST_CASE("AD sites: one per date literal, six variants") {
  Expr e = parse("d >= date('2020-05-10')");
  CHECK(sites(e, MutationOperator::AD).size() == 1);
  CHECK(variants_for(MutationOperator::AD).size() == 6);
  CHECK(variants_for(MutationOperator::CO) == std::vector<std::string>{""});

  // date literals inside inclusion lists are sites too
  Expr list = parse("d in [date('2020-01-01'), date('2020-02-02')]");
  CHECK(sites(list, MutationOperator::AD).size() == 2);
}

TEST_CASE("ACO covers the four ordered comparisons only") {
  CHECK(sites(parse("A > 1 and B <= 2"), MutationOperator::ACO).size() == 2);
  CHECK(sites(parse("A = 1 and B != 2"), MutationOperator::ACO).empty());
}

TEST_CASE("NI covers equality and inequality only") {
  CHECK(sites(parse("A = 1 and B != 2"), MutationOperator::NI).size() == 2);
  CHECK(sites(parse("A > 1"), MutationOperator::NI).empty());
}

TEST_CASE("SSI requires distinct indices") {
  CHECK(sites(parse("substring(t, 1, 3) = 'ab'"), MutationOperator::SSI).size() == 1);
  CHECK(sites(parse("substring(t, 2, 2) = 'x'"), MutationOperator::SSI).empty());
}

TEST_CASE("apply rewrites exactly the addressed node") {
  Rule r = make_rule("A = 1 and B = 2");
  auto locations = sites(r.expression, MutationOperator::CO);
  Mutant m = apply_mutation(r, MutationOperator::CO, locations[0]);
  CHECK(unparse(m.expression) == "A = 1 or B = 2");
  CHECK(m.id() == "R1#CO-0");
  CHECK(tree_diff_size(r.expression, m.expression) == 1);
}

TEST_CASE("SR swaps the implication operands") {
  Rule r = make_rule("A = 1 implies B = 2");
  Mutant m = apply_mutation(r, MutationOperator::SR, {});
  CHECK(unparse(m.expression) == "B = 2 implies A = 1");
}

TEST_CASE("AD shifts dates with calendar rollover") {
  Rule r = make_rule("d = date('2020-01-31')");
  auto locations = sites(r.expression, MutationOperator::AD);
  REQUIRE(locations.size() == 1);

  auto shifted = [&](const std::string& variant) {
    Mutant m = apply_mutation(r, MutationOperator::AD, locations[0], variant);
    return std::get<Date>(node_at(m.expression, locations[0])->lit);
  };
  CHECK(shifted("+1d") == Date{2020, 2, 1});
  CHECK(shifted("-1d") == Date{2020, 1, 30});
  CHECK(shifted("+1m") == Date{2020, 2, 29});  // clamped, leap year
  CHECK(shifted("-1m") == Date{2019, 12, 31});
  CHECK(shifted("+1y") == Date{2021, 1, 31});
  CHECK(shifted("-1y") == Date{2019, 1, 31});
  CHECK(apply_mutation(r, MutationOperator::AD, locations[0], "+1d").id() ==
        "R1#AD-0-+1d");
}

TEST_CASE("AD mutants always hold valid dates") {
  for (const char* text : {"d = date('2020-02-29')", "d = date('2020-12-31')",
                           "d = date('2021-01-31')", "d = date('2019-03-01')"}) {
    Rule r = make_rule(text);
    for (const auto& variant : ad_variants()) {
      Mutant m = apply_mutation(r, MutationOperator::AD, {{1}}, variant);
      const Date& d = std::get<Date>(node_at(m.expression, {1})->lit);
      CHECK(is_valid_date(d));
    }
  }
}

TEST_CASE("invalid sites and variants are rejected") {
  Rule r = make_rule("A = 1 implies B = 2");
  CHECK_THROWS_AS(apply_mutation(r, MutationOperator::CO, {}), std::invalid_argument);
  CHECK_THROWS_AS(apply_mutation(r, MutationOperator::NI, {5}), std::invalid_argument);
  CHECK_THROWS_AS(apply_mutation(r, MutationOperator::NI, {0}, "+1d"),
                  std::invalid_argument);
  CHECK_THROWS_AS(apply_mutation(r, MutationOperator::AD, {0}, "+1d"),
                  std::invalid_argument);
}

TEST_CASE("involutive operators undo themselves") {
  testsupport::Rng rng(31);
  const MutationOperator involutive[] = {
      MutationOperator::ACO, MutationOperator::CO, MutationOperator::NI,
      MutationOperator::RI,  MutationOperator::RSE, MutationOperator::SR,
      MutationOperator::SSI};
  int exercised = 0;
  for (int i = 0; i < 120; ++i) {
    Rule rule;
    rule.id = "P";
    rule.expression = testsupport::gen_full_expr(rng, 3);
    for (auto op : involutive) {
      for (const auto& site : sites(rule.expression, op)) {
        Mutant once = apply_mutation(rule, op, site);
        Rule mutated;
        mutated.id = "P";
        mutated.expression = once.expression;
        Mutant twice = apply_mutation(mutated, op, site);
        CHECK(twice.expression == rule.expression);
        ++exercised;
      }
    }
  }
  CHECK(exercised > 100);
}

TEST_CASE("every non-SR mutant differs in exactly one node") {
  testsupport::Rng rng(37);
  for (int i = 0; i < 80; ++i) {
    Rule rule;
    rule.id = "P";
    rule.expression = testsupport::gen_full_expr(rng, 3);
    for (auto op : kAllMutationOperators) {
      if (op == MutationOperator::SR) continue;
      for (const auto& site : sites(rule.expression, op)) {
        for (const auto& variant : variants_for(op)) {
          Mutant m = apply_mutation(rule, op, site, variant);
          CHECK(tree_diff_size(rule.expression, m.expression) == 1);
        }
      }
    }
    // SR keeps the node and swaps the two subtrees beneath it
    for (const auto& site : sites(rule.expression, MutationOperator::SR)) {
      Mutant m = apply_mutation(rule, MutationOperator::SR, site);
      const Expr* original = node_at(rule.expression, site);
      const Expr* swapped = node_at(m.expression, site);
      CHECK(original->children[0] == swapped->children[1]);
      CHECK(original->children[1] == swapped->children[0]);
    }
  }
}

TEST_CASE("mutate_all: two-comparison implication yields three mutants") {
  // NI applies at both comparisons, SR at the root; nothing else applies
  Rule r = make_rule("A = 1 implies B = 2");
  auto mutants = mutate_all({r});
  REQUIRE(mutants.size() == 3);
  CHECK(mutants[0].id() == "R1#NI-0");
  CHECK(unparse(mutants[0].expression) == "A != 1 implies B = 2");
  CHECK(mutants[1].id() == "R1#NI-1");
  CHECK(unparse(mutants[1].expression) == "A = 1 implies B != 2");
  CHECK(mutants[2].id() == "R1#SR-0");
}

TEST_CASE("mutate_all count equals the site/variant sum") {
  testsupport::Rng rng(41);
  std::vector<Rule> rules;
  for (int i = 0; i < 25; ++i) {
    Rule r;
    r.id = "P" + std::to_string(i);
    r.expression = testsupport::gen_full_expr(rng, 3);
    rules.push_back(std::move(r));
  }
  std::size_t expected = 0;
  for (const auto& rule : rules)
    for (auto op : kAllMutationOperators)
      expected += sites(rule.expression, op).size() * variants_for(op).size();
  CHECK(mutate_all(rules).size() == expected);
}

TEST_CASE("mutate_all of an empty registry is empty") {
  CHECK(mutate_all({}).empty());
}

TEST_CASE("mutants parse and keep the source id") {
  Rule r = make_rule("topo in ['C50'] implies d >= date('2020-06-15')");
  for (const auto& m : mutate_all({r})) {
    CHECK(mutant_source_id(m.id()) == "R1");
    CHECK(parse(unparse(m.expression)) == m.expression);
  }
}
