#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "rulediff/eval.hpp"
#include "rulediff/registry.hpp"

namespace rulediff {

// Six-way service outcome. Http500 and EmptyResponse arise as whole-response
// gates; per-rule values are the first four.
enum class ServiceResult { Pass, Fail, NotApplied, Warning, Http500, EmptyResponse };

inline constexpr ServiceResult kAllServiceResults[] = {
    ServiceResult::Pass,        ServiceResult::Fail,
    ServiceResult::NotApplied,  ServiceResult::Warning,
    ServiceResult::Http500,     ServiceResult::EmptyResponse};

std::string to_string(ServiceResult r);
std::optional<ServiceResult> parse_service_result(const std::string& s);
// Report form, e.g. "500" and "Empty Response".
std::string display_name(ServiceResult r);

// Seedable inconsistencies. An empty config makes the service agree with
// the reference engine on every rule and record.
struct FaultConfig {
  enum class Downgrade { Fail, NotApplied };

  struct VersionPolicy {
    std::string id;
    int version = 1;
    bool active = true;
    // applied to Pass results of inactive versions
    Downgrade downgrade = Downgrade::Fail;
  };

  struct PreAggregationVar {
    std::string var;
    // empty: only null/missing/unconvertible values are invalid
    std::vector<Value> valid_values;
  };

  std::vector<VersionPolicy> version_policy;
  // accepted date pattern where Y/M/D match one digit and every other
  // character matches itself; empty disables the gate
  std::string strict_date_format;
  std::vector<PreAggregationVar> pre_aggregation;
  std::set<std::string> warning_rules;            // Fail reported as Warning
  std::set<std::string> always_not_applied_rules; // any result forced to NotApplied

  bool empty() const {
    return version_policy.empty() && strict_date_format.empty() &&
           pre_aggregation.empty() && warning_rules.empty() &&
           always_not_applied_rules.empty();
  }

  static FaultConfig from_json(const nlohmann::json& j, const Schema& schema);
  static FaultConfig load(const std::string& path, const Schema& schema);
  nlohmann::json to_json() const;
};

// True when `text` matches the Y/M/D digit pattern exactly.
bool matches_date_pattern(const std::string& text, const std::string& pattern);

struct RuleResult {
  std::string id;
  int version = 1;
  ServiceResult result = ServiceResult::Pass;
};

// Whole response of one validation call.
struct ServiceResponse {
  enum class Kind { PerRule, Http500, EmptyResponse };

  Kind kind = Kind::PerRule;
  std::vector<RuleResult> results;  // registry order; only for PerRule
  std::string detail;               // human-readable reason for the gates

  std::optional<ServiceResult> result_for(const std::string& id, int version) const;
};

// Validates a full message against the registry. Gate order: strict date
// format (Http500), then pre-aggregation variables (EmptyResponse), then
// per-rule evaluation with the version policy, always-NotApplied override,
// and Warning escalation. A rule evaluation error surfaces as Http500, the
// service analog of an unhandled exception.
ServiceResponse validate_message(const nlohmann::json& message,
                                 const std::vector<Rule>& registry,
                                 const Schema& schema, const FaultConfig& cfg);

}  // namespace rulediff
