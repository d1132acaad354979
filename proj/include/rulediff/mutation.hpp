#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rulediff/ast.hpp"
#include "rulediff/registry.hpp"

namespace rulediff {

// The eight rule mutation operators:
//   ACO  swap > with < and <= with >=
//   AD   shift a date literal by +/-1 year, month, or day (six variants)
//   CO   swap `and` with `or`
//   NI   swap = with !=
//   RI   swap `in` with `notIn`
//   RSE  swap startswith with endswith
//   SR   swap the operands of an `implies`
//   SSI  swap the two substring indices
enum class MutationOperator { ACO, AD, CO, NI, RI, RSE, SR, SSI };

inline constexpr MutationOperator kAllMutationOperators[] = {
    MutationOperator::ACO, MutationOperator::AD, MutationOperator::CO,
    MutationOperator::NI,  MutationOperator::RI, MutationOperator::RSE,
    MutationOperator::SR,  MutationOperator::SSI};

std::string to_string(MutationOperator op);
std::optional<MutationOperator> parse_mutation_operator(const std::string& s);

// AD variant tags in application order.
inline const std::vector<std::string>& ad_variants() {
  static const std::vector<std::string> kVariants = {"+1y", "-1y", "+1m",
                                                     "-1m", "+1d", "-1d"};
  return kVariants;
}

// Variant tags valid for `op`: the six date deltas for AD, a single empty
// tag for every other operator.
std::vector<std::string> variants_for(MutationOperator op);

struct Mutant {
  std::string source_id;
  int source_version = 1;
  MutationOperator op = MutationOperator::ACO;
  Path site;
  int site_index = 0;
  std::string variant;  // empty except for AD
  Expr expression;

  // "<sourceId>#<op>-<siteIndex>[-<variant>]"
  std::string id() const;
};

// Splits "<sourceId>#..." back into the source rule id; returns the whole
// id when no marker is present.
std::string mutant_source_id(const std::string& mutant_id);

// Every location where `op` applies, in deterministic pre-order. Sites that
// would reproduce the original expression (substring with equal indices,
// implies with identical operands) are not applicable.
std::vector<Path> sites(const Expr& expr, MutationOperator op);

// Rewrites exactly the node at `site`; all other nodes are unchanged.
// Throws std::invalid_argument for a site or variant that is not valid.
Mutant apply_mutation(const Rule& rule, MutationOperator op, const Path& site,
                      const std::string& variant = "");

// All mutants of all rules: per rule, operators in enum order, sites in
// pre-order, AD variants in ad_variants() order.
std::vector<Mutant> mutate_all(const std::vector<Rule>& rules);

// Mutants as a registry (ids carry the mutation suffix).
std::vector<Rule> mutants_to_rules(const std::vector<Mutant>& mutants);

}  // namespace rulediff
