#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rulediff/registry.hpp"

namespace rulediff {

// Synthetic corpus parameters. The built-in variable pool has ten variables
// covering all four value types, with "ds" designated as the
// pre-aggregation variable and two date variables. Date literals inside
// generated rules stay in 2020 while the baseline template uses 2021 dates,
// so date-format faults can be scoped to rules that actually bind dates.
struct CorpusSpec {
  int rule_count = 10;
  std::uint64_t seed = 42;
  // Each structural feature (inclusion list, string predicate, substring,
  // date comparison, multi-version pair) must appear in at least this many
  // rules. Every generated rule has an implies root.
  int min_feature_rules = 3;
};

struct Corpus {
  std::vector<Rule> rules;
  Schema schema;
  Record baseline_template;
};

struct InfeasibleCorpusError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A fixed CorpusSpec yields a byte-identical corpus. Every generated rule
// is verified to admit Pass, Fail, and NotApplied witnesses by the
// brute-force oracle below.
Corpus generate_corpus(const CorpusSpec& spec);

// Writes rules.json, schema.json, and template.json under `dir`.
void save_corpus(const Corpus& corpus, const std::string& dir);
Corpus load_corpus(const std::string& dir);

// One witness per test intent, when satisfiable. A missing entry means the
// intent is unsatisfiable over the search domains (e.g. NotApplied for a
// rule without an implies root).
struct IntentWitnesses {
  std::optional<Record> satisfying;  // Pass
  std::optional<Record> violating;   // Fail
  std::optional<Record> invalid;     // NotApplied

  bool complete() const {
    return satisfying.has_value() && violating.has_value() && invalid.has_value();
  }
};

// Candidate values per rule variable: literals appearing in the rule, each
// numeric literal +/-1, each date literal +/-1 day, one fresh text value,
// and Null. The fresh text is sized to keep substring sites in range.
std::map<std::string, std::vector<Value>> witness_domains(const Rule& rule,
                                                          const Schema& schema);

// Brute-force search over witness_domains, verified with categorize.
// Assignments that raise evaluation errors are skipped.
IntentWitnesses oracle_tests(const Rule& rule, const Schema& schema);

}  // namespace rulediff
