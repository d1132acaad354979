#include "rulediff/service.hpp"

#include <algorithm>

namespace rulediff {

std::string to_string(ServiceResult r) {
  switch (r) {
    case ServiceResult::Pass: return "Pass";
    case ServiceResult::Fail: return "Fail";
    case ServiceResult::NotApplied: return "NotApplied";
    case ServiceResult::Warning: return "Warning";
    case ServiceResult::Http500: return "Http500";
    case ServiceResult::EmptyResponse: return "EmptyResponse";
  }
  return "?";
}

std::optional<ServiceResult> parse_service_result(const std::string& s) {
  for (auto r : kAllServiceResults)
    if (to_string(r) == s) return r;
  return std::nullopt;
}

std::string display_name(ServiceResult r) {
  switch (r) {
    case ServiceResult::Http500: return "500";
    case ServiceResult::EmptyResponse: return "Empty Response";
    case ServiceResult::NotApplied: return "Not Applied";
    default: return to_string(r);
  }
}

bool matches_date_pattern(const std::string& text, const std::string& pattern) {
  if (text.size() != pattern.size()) return false;
  for (std::size_t i = 0; i < pattern.size(); ++i) {
    char p = pattern[i];
    char c = text[i];
    if (p == 'Y' || p == 'M' || p == 'D') {
      if (c < '0' || c > '9') return false;
    } else if (p != c) {
      return false;
    }
  }
  return true;
}

FaultConfig FaultConfig::from_json(const nlohmann::json& j, const Schema& schema) {
  FaultConfig cfg;
  if (j.is_null()) return cfg;
  if (!j.is_object()) throw ConfigError("fault config must be a JSON object");

  for (const auto& entry : j.value("versionPolicy", nlohmann::json::array())) {
    VersionPolicy p;
    p.id = entry.at("id").get<std::string>();
    p.version = entry.at("version").get<int>();
    p.active = entry.value("active", true);
    std::string kind = entry.value("downgrade", "fail");
    if (kind == "fail") {
      p.downgrade = Downgrade::Fail;
    } else if (kind == "notApplied") {
      p.downgrade = Downgrade::NotApplied;
    } else {
      throw ConfigError("versionPolicy downgrade must be 'fail' or 'notApplied'");
    }
    cfg.version_policy.push_back(std::move(p));
  }

  cfg.strict_date_format = j.value("strictDateFormat", "");

  for (const auto& entry : j.value("preAggregationVars", nlohmann::json::array())) {
    PreAggregationVar v;
    if (entry.is_string()) {
      v.var = entry.get<std::string>();
    } else {
      v.var = entry.at("var").get<std::string>();
      auto it = schema.find(v.var);
      if (it == schema.end())
        throw ConfigError("pre-aggregation variable '" + v.var +
                          "' is not in the schema");
      for (const auto& raw : entry.value("validValues", nlohmann::json::array())) {
        Value val = value_from_json(raw, it->second);
        if (is_null(val))
          throw ConfigError("validValues for '" + v.var +
                            "' contains a value of the wrong type");
        v.valid_values.push_back(std::move(val));
      }
    }
    if (schema.find(v.var) == schema.end())
      throw ConfigError("pre-aggregation variable '" + v.var +
                        "' is not in the schema");
    cfg.pre_aggregation.push_back(std::move(v));
  }

  for (const auto& id : j.value("warningRules", nlohmann::json::array()))
    cfg.warning_rules.insert(id.get<std::string>());
  for (const auto& id : j.value("alwaysNotAppliedRules", nlohmann::json::array()))
    cfg.always_not_applied_rules.insert(id.get<std::string>());
  return cfg;
}

FaultConfig FaultConfig::load(const std::string& path, const Schema& schema) {
  return from_json(load_json_file(path), schema);
}

nlohmann::json FaultConfig::to_json() const {
  nlohmann::json j = nlohmann::json::object();
  auto policy = nlohmann::json::array();
  for (const auto& p : version_policy) {
    policy.push_back(
        {{"id", p.id},
         {"version", p.version},
         {"active", p.active},
         {"downgrade", p.downgrade == Downgrade::Fail ? "fail" : "notApplied"}});
  }
  j["versionPolicy"] = policy;
  j["strictDateFormat"] = strict_date_format;
  auto preagg = nlohmann::json::array();
  for (const auto& v : pre_aggregation) {
    nlohmann::json entry = {{"var", v.var}};
    auto values = nlohmann::json::array();
    for (const auto& val : v.valid_values) values.push_back(value_to_json(val));
    entry["validValues"] = values;
    preagg.push_back(entry);
  }
  j["preAggregationVars"] = preagg;
  j["warningRules"] = warning_rules;
  j["alwaysNotAppliedRules"] = always_not_applied_rules;
  return j;
}

std::optional<ServiceResult> ServiceResponse::result_for(const std::string& id,
                                                         int version) const {
  if (kind == Kind::Http500) return ServiceResult::Http500;
  if (kind == Kind::EmptyResponse) return ServiceResult::EmptyResponse;
  for (const auto& r : results)
    if (r.id == id && r.version == version) return r.result;
  return std::nullopt;
}

ServiceResponse validate_message(const nlohmann::json& message,
                                 const std::vector<Rule>& registry,
                                 const Schema& schema, const FaultConfig& cfg) {
  ServiceResponse resp;

  // 1: strict date format gate
  if (!cfg.strict_date_format.empty()) {
    for (const auto& [name, type] : schema) {
      if (type != ValueType::Date) continue;
      auto it = message.find(name);
      if (it == message.end() || it->is_null()) continue;
      if (!it->is_string() ||
          !matches_date_pattern(it->get<std::string>(), cfg.strict_date_format)) {
        resp.kind = ServiceResponse::Kind::Http500;
        resp.detail = "non-compliant date format for variable '" + name + "'";
        return resp;
      }
    }
  }

  // 2: pre-aggregation gate
  for (const auto& pre : cfg.pre_aggregation) {
    auto declared = schema.at(pre.var);
    auto it = message.find(pre.var);
    bool invalid = false;
    if (it == message.end() || it->is_null()) {
      invalid = true;
    } else {
      Value v = value_from_json(*it, declared);
      if (is_null(v)) {
        invalid = true;
      } else if (!pre.valid_values.empty()) {
        invalid = std::find(pre.valid_values.begin(), pre.valid_values.end(),
                            v) == pre.valid_values.end();
      }
    }
    if (invalid) {
      resp.kind = ServiceResponse::Kind::EmptyResponse;
      resp.detail = "pre-aggregation constraint on variable '" + pre.var + "'";
      return resp;
    }
  }

  // 3: per-rule evaluation
  Record record = record_from_json(message, schema, true);
  for (const auto& rule : registry) {
    ServiceResult result;
    try {
      switch (categorize(rule.expression, record)) {
        case TriState::Pass: result = ServiceResult::Pass; break;
        case TriState::Fail: result = ServiceResult::Fail; break;
        default: result = ServiceResult::NotApplied; break;
      }
    } catch (const EvalError& e) {
      resp.kind = ServiceResponse::Kind::Http500;
      resp.results.clear();
      resp.detail = std::string("rule ") + rule.key() + ": " + e.what();
      return resp;
    }

    if (cfg.always_not_applied_rules.count(rule.id))
      result = ServiceResult::NotApplied;

    if (result == ServiceResult::Pass) {
      for (const auto& p : cfg.version_policy) {
        if (p.id == rule.id && p.version == rule.version && !p.active) {
          result = p.downgrade == FaultConfig::Downgrade::Fail
                       ? ServiceResult::Fail
                       : ServiceResult::NotApplied;
          break;
        }
      }
    }

    if (result == ServiceResult::Fail && cfg.warning_rules.count(rule.id))
      result = ServiceResult::Warning;

    resp.results.push_back({rule.id, rule.version, result});
  }
  return resp;
}

}  // namespace rulediff
