#include "rulediff/difftest.hpp"

#include <chrono>
#include <fstream>
#include <sstream>
#include <thread>

namespace rulediff {

nlohmann::json embed(const nlohmann::json& test, const Record& baseline,
                     const Schema& schema) {
  if (!test.is_object()) throw ConfigError("test must be a JSON object");
  nlohmann::json message = record_to_json(baseline);
  for (const auto& [name, value] : test.items()) {
    if (schema.find(name) == schema.end())
      throw ConfigError("test binds unknown variable '" + name + "'");
    message[name] = value;
  }
  return message;
}

bool outcomes_match(const RefOutcome& ref, ServiceResult service) {
  if (ref.is_error()) return false;
  switch (ref.result()) {
    case TriState::Pass: return service == ServiceResult::Pass;
    case TriState::Fail: return service == ServiceResult::Fail;
    case TriState::NotApplied: return service == ServiceResult::NotApplied;
  }
  return false;
}

std::optional<DiffRecord> run_pair(const Rule& rule, const nlohmann::json& test,
                                   TriState intent, int repetition,
                                   const Record& baseline, const Schema& schema,
                                   ServiceClient& client,
                                   const RunPairOptions& options) {
  nlohmann::json message = embed(test, baseline, schema);

  DiffRecord rec;
  rec.rule_id = rule.id;
  rec.version = rule.version;
  rec.intent = intent;
  rec.repetition = repetition;
  rec.ref = ref_validate(rule, record_from_json(test, schema, false));

  ServiceClient::CallResult call;
  for (int attempt = 0; attempt <= options.max_retries; ++attempt) {
    call = client.validate(message);
    if (!call.transport_error) break;
    if (attempt < options.max_retries && options.backoff_ms > 0)
      std::this_thread::sleep_for(
          std::chrono::milliseconds(options.backoff_ms * (1 << attempt)));
  }
  if (call.transport_error) return std::nullopt;

  auto service = call.response.result_for(rule.id, rule.version);
  if (!service) return std::nullopt;  // rule not present in the response
  rec.service = *service;
  rec.match = outcomes_match(rec.ref, rec.service);
  return rec;
}

nlohmann::json DiffRecord::to_json() const {
  nlohmann::json j = {{"ruleId", rule_id},
                      {"version", version},
                      {"testType", to_string(intent)},
                      {"repetition", repetition},
                      {"service", to_string(service)},
                      {"match", match}};
  if (ref.is_error()) {
    j["ref"] = "EvalError";
    j["refError"] = ref.error();
  } else {
    j["ref"] = to_string(ref.result());
  }
  return j;
}

DiffRecord DiffRecord::from_json(const nlohmann::json& j) {
  DiffRecord rec;
  rec.rule_id = j.at("ruleId").get<std::string>();
  rec.version = j.at("version").get<int>();
  std::string intent = j.at("testType").get<std::string>();
  for (auto t : {TriState::Pass, TriState::Fail, TriState::NotApplied})
    if (to_string(t) == intent) rec.intent = t;
  rec.repetition = j.at("repetition").get<int>();
  std::string ref = j.at("ref").get<std::string>();
  if (ref == "EvalError") {
    rec.ref = {j.value("refError", std::string("evaluation error"))};
  } else {
    for (auto t : {TriState::Pass, TriState::Fail, TriState::NotApplied})
      if (to_string(t) == ref) rec.ref = {t};
  }
  rec.service = *parse_service_result(j.at("service").get<std::string>());
  rec.match = j.at("match").get<bool>();
  return rec;
}

std::set<std::string> DiffLedger::matched(ServiceResult category) const {
  std::set<std::string> out = executed;
  auto it = mismatched.find(category);
  if (it != mismatched.end())
    for (const auto& rule : it->second) out.erase(rule);
  return out;
}

nlohmann::json DiffLedger::to_json() const {
  nlohmann::json j;
  j["executedRules"] = executed;
  nlohmann::json categories = nlohmann::json::object();
  for (auto category : kAllServiceResults) {
    auto matches = matched(category);
    auto it = mismatched.find(category);
    std::set<std::string> misses = it == mismatched.end() ? std::set<std::string>{}
                                                          : it->second;
    categories[to_string(category)] = {{"matchCount", matches.size()},
                                       {"mismatchCount", misses.size()},
                                       {"mismatchedRules", misses}};
  }
  j["categories"] = categories;
  return j;
}

std::string DiffLedger::to_csv() const {
  std::ostringstream out;
  out << "category,matchCount,matchPercent,mismatchCount,mismatchedRules\n";
  for (auto category : kAllServiceResults) {
    auto matches = matched(category);
    auto it = mismatched.find(category);
    std::size_t misses = it == mismatched.end() ? 0 : it->second.size();
    double percent = executed.empty()
                         ? 100.0
                         : 100.0 * static_cast<double>(matches.size()) /
                               static_cast<double>(executed.size());
    out << display_name(category) << "," << matches.size() << ",";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", percent);
    out << buf << "," << misses << ",\"";
    if (it != mismatched.end()) {
      bool first = true;
      for (const auto& rule : it->second) {
        if (!first) out << "; ";
        out << rule;
        first = false;
      }
    }
    out << "\"\n";
  }
  return out.str();
}

DiffLedger build_ledger(const std::vector<DiffRecord>& records) {
  DiffLedger ledger;
  for (const auto& rec : records) {
    ledger.executed.insert(rec.rule_key());
    if (!rec.match) ledger.mismatched[rec.service].insert(rec.rule_key());
  }
  return ledger;
}

void save_diff_records(const std::vector<DiffRecord>& records,
                       const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  for (const auto& rec : records) out << rec.to_json().dump() << "\n";
}

std::vector<DiffRecord> load_diff_records(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  std::vector<DiffRecord> records;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    records.push_back(DiffRecord::from_json(nlohmann::json::parse(line)));
  }
  return records;
}

DiffStageResult run_differential(const std::vector<Rule>& rules,
                                 const std::vector<GenerationRecord>& generations,
                                 const Record& baseline, const Schema& schema,
                                 ServiceClient& client,
                                 const RunPairOptions& options) {
  std::map<std::string, const Rule*> by_key;
  for (const auto& rule : rules) by_key[rule.key()] = &rule;

  DiffStageResult result;
  for (const auto& gen : generations) {
    if (!gen.exact_match()) {
      ++result.skipped_non_exact;
      continue;
    }
    auto it = by_key.find(gen.rule_id + "/" + std::to_string(gen.rule_version));
    if (it == by_key.end()) continue;  // e.g. mutants, never sent to the service
    for (auto intent : {TriState::Pass, TriState::Fail, TriState::NotApplied}) {
      const nlohmann::json& test = gen.tests->case_for(intent);
      try {
        auto rec = run_pair(*it->second, test, intent, gen.repetition, baseline,
                            schema, client, options);
        if (rec)
          result.records.push_back(std::move(*rec));
        else
          ++result.infrastructure_failures;
      } catch (const ConfigError&) {
        ++result.inexecutable_tests;
      }
    }
  }
  return result;
}

}  // namespace rulediff
