#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rulediff/registry.hpp"
#include "rulediff/stats.hpp"
#include "rulediff/testgen.hpp"

namespace rulediff {

// CR: fraction of repetitions that were exact matches. Throws ConfigError
// when t_expected < 1.
double completion_rate(int em, int t_expected);

// SI as a percentage: Euclidean closeness of (#Observed, #True) to the
// perfect point (T, T), normalized by the maximal distance T*sqrt(2).
double success_index(int observed, int true_count, int t_expected);

// RI = 1 - mean |SI_original - SI_mutated|, with all SI values on the
// [0, 1] fractional scale. Throws ConfigError on an empty mutant list.
double robustness_index(double si_original,
                        const std::vector<double>& si_mutated);

// Per (provider, rule, test type) counters against T_expected.
struct GenerationTally {
  std::string provider;
  std::string rule_key;  // "id/version"; mutant ids keep their suffix
  TriState type = TriState::Pass;
  int t_expected = 0;
  int em = 0;
  int observed = 0;
  int true_count = 0;
};

// Folds generation records into tallies. #True re-runs each parsed test
// slot through the reference engine of the rule it was generated for, so
// the registry must contain every generated rule (originals and mutants).
std::vector<GenerationTally> tally_generations(
    const std::vector<GenerationRecord>& records,
    const std::vector<Rule>& registry, const Schema& schema);

struct MetricsRow {
  std::string provider;
  std::string rule_key;
  TriState type = TriState::Pass;
  double cr = 0.0;
  double si = 0.0;                // percent
  std::optional<double> ri;       // fraction in [0,1]
  int n_rt = 0;                   // mutants contributing to ri
};

// Metric rows for original rules only; mutant tallies feed the robustness
// index of their source rule.
std::vector<MetricsRow> compute_metrics(const std::vector<GenerationTally>& tallies);

// provider,rule,testType,CR,SI,RI,n_rt with RI reported as a percentage
std::string metrics_to_csv(const std::vector<MetricsRow>& rows);
std::vector<MetricsRow> metrics_from_csv(const std::string& csv);

void save_metrics(const std::vector<MetricsRow>& rows, const std::string& path);
std::vector<MetricsRow> load_metrics(const std::string& path);

// Metric names usable for grouped comparisons.
const std::vector<std::string>& known_metric_names();

// One observation group per provider for the named metric (CR, SI_Pass,
// SI_Fail, SI_NotApplied, RI_Pass, RI_Fail, RI_NotApplied; matched
// case-insensitively). RI groups contain only rules with mutants.
std::vector<stats::SampleGroup> metric_groups(const std::vector<MetricsRow>& rows,
                                              const std::string& metric);

}  // namespace rulediff
