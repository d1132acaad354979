#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "rulediff/http_service.hpp"
#include "rulediff/refengine.hpp"
#include "rulediff/testgen.hpp"

namespace rulediff {

// Fills a full message from the baseline template and overrides it with the
// test's variables. The raw test values flow through unchanged so the
// service sees exactly what was generated. Throws ConfigError when the test
// binds a variable outside the schema.
nlohmann::json embed(const nlohmann::json& test, const Record& baseline,
                     const Schema& schema);

// One executed (rule, test) pair. The mismatch category is the service
// outcome; the intended test type is kept separately from what the
// engines actually observed.
struct DiffRecord {
  std::string rule_id;
  int version = 1;
  TriState intent = TriState::Pass;
  int repetition = 1;
  RefOutcome ref;
  ServiceResult service = ServiceResult::Pass;
  bool match = false;

  std::string rule_key() const { return rule_id + "/" + std::to_string(version); }
  nlohmann::json to_json() const;
  static DiffRecord from_json(const nlohmann::json& j);
};

// Reference result vs service result: a Pass/Fail/NotApplied pair matches
// when equal; every other pairing (Warning, Http500, EmptyResponse, or a
// reference evaluation error) mismatches.
bool outcomes_match(const RefOutcome& ref, ServiceResult service);

struct RunPairOptions {
  int max_retries = 3;
  int backoff_ms = 200;
};

// Executes one test against both engines: the reference on the bare test
// record, the service on the embedded message. nullopt means the service
// stayed unreachable after retries (infrastructure failure, excluded from
// ledgers).
std::optional<DiffRecord> run_pair(const Rule& rule, const nlohmann::json& test,
                                   TriState intent, int repetition,
                                   const Record& baseline, const Schema& schema,
                                   ServiceClient& client,
                                   const RunPairOptions& options = {});

// Per-category match/mismatch accounting over the executed rule set. A rule
// mismatches in category c when at least one of its records mismatches with
// service outcome c; otherwise it counts as a match for c.
struct DiffLedger {
  std::set<std::string> executed;  // rule keys
  std::map<ServiceResult, std::set<std::string>> mismatched;

  std::set<std::string> matched(ServiceResult category) const;
  nlohmann::json to_json() const;
  // columns: category, matchCount, matchPercent, mismatchCount, mismatchedRules
  std::string to_csv() const;
};

DiffLedger build_ledger(const std::vector<DiffRecord>& records);

void save_diff_records(const std::vector<DiffRecord>& records,
                       const std::string& path);
std::vector<DiffRecord> load_diff_records(const std::string& path);

// Outcome of a full differential stage over a generation file.
struct DiffStageResult {
  std::vector<DiffRecord> records;
  int skipped_non_exact = 0;    // repetitions without a parsed test set
  int infrastructure_failures = 0;
  int inexecutable_tests = 0;   // tests binding unknown variables
};

DiffStageResult run_differential(const std::vector<Rule>& rules,
                                 const std::vector<GenerationRecord>& generations,
                                 const Record& baseline, const Schema& schema,
                                 ServiceClient& client,
                                 const RunPairOptions& options = {});

}  // namespace rulediff
