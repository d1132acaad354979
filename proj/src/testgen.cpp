#include "rulediff/testgen.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <fstream>
#include <mutex>
#include <regex>
#include <thread>

#include "httplib.h"
#include "rulediff/parse.hpp"

namespace rulediff {

namespace {

constexpr const char* kRuleMarker = "Generate the three tests for the following rule:\n";

const std::vector<std::string>& case_keys() {
  static const std::vector<std::string> kKeys = {"satisfying_case",
                                                 "violating_case", "invalid_case"};
  return kKeys;
}

const std::vector<std::string>& expected_keys() {
  static const std::vector<std::string> kKeys = {
      "satisfying_case", "violating_case", "invalid_case", "confidence_score"};
  return kKeys;
}

int edit_distance(const std::string& a, const std::string& b) {
  std::vector<int> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = static_cast<int>(j);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = static_cast<int>(i);
    for (std::size_t j = 1; j <= b.size(); ++j) {
      int sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

bool looks_like_rename(const std::string& unknown, const std::string& missing) {
  return edit_distance(unknown, missing) <= 3;
}

// Splits text into top-level balanced JSON documents ({...} or [...]).
// Returns the chunks and whether only whitespace lies between them.
std::pair<std::vector<std::string>, bool> scan_documents(const std::string& text) {
  std::vector<std::string> chunks;
  bool clean_gaps = true;
  int depth = 0;
  bool in_string = false;
  bool escaped = false;
  std::size_t start = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (in_string) {
      if (escaped) escaped = false;
      else if (c == '\\') escaped = true;
      else if (c == '"') in_string = false;
      continue;
    }
    if (c == '"') {
      in_string = true;
      continue;
    }
    if (c == '{' || c == '[') {
      if (depth == 0) start = i;
      ++depth;
    } else if (c == '}' || c == ']') {
      if (depth > 0 && --depth == 0)
        chunks.push_back(text.substr(start, i - start + 1));
    } else if (depth == 0 && !std::isspace(static_cast<unsigned char>(c))) {
      clean_gaps = false;
    }
  }
  if (depth != 0) clean_gaps = false;
  return {chunks, clean_gaps};
}

HallucinationReport invalid_json(InvalidJsonKind kind, std::string detail) {
  return {HallucinationCategory::InvalidJson, kind, std::move(detail)};
}

// Category predicates for a syntactically valid top-level object, evaluated
// in this order: rename-style semantic alterations, missing test types,
// extra test cases, other unexpected keys (also semantic alterations),
// missing confidence_score, then per-slot structure checks.
ParseOutcome classify_object(const nlohmann::json& obj) {
  std::vector<std::string> unknown;
  std::vector<std::string> missing;
  for (const auto& key : expected_keys())
    if (!obj.contains(key)) missing.push_back(key);
  for (const auto& [key, _] : obj.items())
    if (std::find(expected_keys().begin(), expected_keys().end(), key) ==
        expected_keys().end())
      unknown.push_back(key);

  for (const auto& u : unknown) {
    for (const auto& m : missing) {
      if (looks_like_rename(u, m))
        return HallucinationReport{HallucinationCategory::SemanticAlteration,
                                   InvalidJsonKind::None,
                                   "key '" + u + "' instead of '" + m + "'"};
    }
  }
  for (const auto& key : case_keys()) {
    if (!obj.contains(key))
      return HallucinationReport{HallucinationCategory::MissingTestTypes,
                                 InvalidJsonKind::None, "missing '" + key + "'"};
  }
  if (!unknown.empty()) {
    for (const auto& u : unknown) {
      if (u.find("case") != std::string::npos || u.find("test") != std::string::npos)
        return HallucinationReport{HallucinationCategory::AdditionalTests,
                                   InvalidJsonKind::None, "extra test '" + u + "'"};
    }
    return HallucinationReport{HallucinationCategory::SemanticAlteration,
                               InvalidJsonKind::None,
                               "unexpected key '" + unknown.front() + "'"};
  }
  if (!obj.contains("confidence_score"))
    return invalid_json(InvalidJsonKind::MissingPairs, "missing confidence_score");

  for (const auto& key : case_keys()) {
    const auto& slot = obj.at(key);
    if (!slot.is_object())
      return invalid_json(InvalidJsonKind::WrongStructure,
                          "'" + key + "' is not an object");
    if (slot.empty())
      return invalid_json(InvalidJsonKind::MissingPairs, "'" + key + "' is empty");
    for (const auto& [var, value] : slot.items()) {
      if (value.is_object() || value.is_array())
        return invalid_json(InvalidJsonKind::WrongStructure,
                            "'" + key + "." + var + "' is not a flat value");
    }
  }
  if (!obj.at("confidence_score").is_number())
    return invalid_json(InvalidJsonKind::WrongStructure,
                        "confidence_score is not a number");

  GeneratedTestSet tests;
  tests.satisfying_case = obj.at("satisfying_case");
  tests.violating_case = obj.at("violating_case");
  tests.invalid_case = obj.at("invalid_case");
  double c = obj.at("confidence_score").get<double>();
  if (c > 1.0) c /= 100.0;  // providers report either [0,1] or [0,100]
  tests.confidence_score = std::clamp(c, 0.0, 1.0);
  return tests;
}

ParseOutcome classify_unparseable(const std::string& text) {
  auto [chunks, clean_gaps] = scan_documents(text);
  if (chunks.size() >= 2 && clean_gaps) {
    bool all_parse = std::all_of(chunks.begin(), chunks.end(), [](const auto& c) {
      return !nlohmann::json::parse(c, nullptr, false).is_discarded();
    });
    if (all_parse)
      return HallucinationReport{HallucinationCategory::LackOfIntegration,
                                 InvalidJsonKind::None,
                                 std::to_string(chunks.size()) +
                                     " separate JSON documents"};
  }

  static const std::regex kUnquoted(R"(([{,])\s*[A-Za-z_][A-Za-z0-9_]*\s*:)");
  static const std::regex kMissingPair(R"((:\s*[,}\]])|(,\s*[,}]))");
  static const std::regex kMissingDelim(R"("[ \t]*["{\[0-9])");
  if (std::regex_search(text, kUnquoted))
    return invalid_json(InvalidJsonKind::UnquotedNames, "unquoted property name");
  if (std::regex_search(text, kMissingPair))
    return invalid_json(InvalidJsonKind::MissingPairs, "missing value in pair");
  if (std::regex_search(text, kMissingDelim))
    return invalid_json(InvalidJsonKind::MissingDelimiters, "missing ':' or ','");
  return invalid_json(InvalidJsonKind::WrongStructure, "not a JSON object");
}

}  // namespace

const char* intent_slot(TriState intent) {
  switch (intent) {
    case TriState::Pass: return "satisfying_case";
    case TriState::Fail: return "violating_case";
    case TriState::NotApplied: return "invalid_case";
  }
  return "?";
}

std::string Prompt::combined_text() const { return system + "\n\n" + user; }

Prompt build_prompt(const Rule& rule, bool combined) {
  Prompt p;
  p.combined = combined;
  p.system =
      "You are a test data generator for validation rules written as logical "
      "constraints over variables.\n"
      "Follow these steps:\n"
      "Step 1: Be precise.\n"
      "Step 2: Identify the variables of the rule and generate three tests: "
      "one variable assignment that satisfies the rule (satisfying_case), one "
      "that violates it (violating_case), and one where the rule's condition "
      "does not hold so the rule is not applicable (invalid_case).\n"
      "Step 3: Do not be repetitive.\n"
      "Step 4: Express your confidence in the generated tests as a number "
      "(confidence_score).\n"
      "Step 5: Generate a single JSON object as the output with exactly the "
      "keys satisfying_case, violating_case, invalid_case, and "
      "confidence_score, where each case is a flat JSON object mapping "
      "variable names to values.";
  p.user = std::string(kRuleMarker) + unparse(rule.expression);
  return p;
}

const nlohmann::json& GeneratedTestSet::case_for(TriState intent) const {
  switch (intent) {
    case TriState::Pass: return satisfying_case;
    case TriState::Fail: return violating_case;
    case TriState::NotApplied: return invalid_case;
  }
  return satisfying_case;
}

nlohmann::json GeneratedTestSet::to_json() const {
  return {{"satisfying_case", satisfying_case},
          {"violating_case", violating_case},
          {"invalid_case", invalid_case},
          {"confidence_score", confidence_score}};
}

GeneratedTestSet GeneratedTestSet::from_json(const nlohmann::json& j) {
  GeneratedTestSet t;
  t.satisfying_case = j.at("satisfying_case");
  t.violating_case = j.at("violating_case");
  t.invalid_case = j.at("invalid_case");
  t.confidence_score = j.at("confidence_score").get<double>();
  return t;
}

std::string to_string(HallucinationCategory c) {
  switch (c) {
    case HallucinationCategory::SemanticAlteration: return "SemanticAlteration";
    case HallucinationCategory::MissingTestTypes: return "MissingTestTypes";
    case HallucinationCategory::AdditionalTests: return "AdditionalTests";
    case HallucinationCategory::LackOfIntegration: return "LackOfIntegration";
    case HallucinationCategory::InvalidJson: return "InvalidJson";
  }
  return "?";
}

std::string to_string(InvalidJsonKind k) {
  switch (k) {
    case InvalidJsonKind::None: return "none";
    case InvalidJsonKind::UnquotedNames: return "unquotedNames";
    case InvalidJsonKind::MissingPairs: return "missingPairs";
    case InvalidJsonKind::WrongStructure: return "wrongStructure";
    case InvalidJsonKind::MissingDelimiters: return "missingDelimiters";
  }
  return "?";
}

std::string HallucinationReport::label() const {
  std::string s = to_string(category);
  if (category == HallucinationCategory::InvalidJson)
    s += "/" + to_string(subkind);
  return s;
}

ParseOutcome parse_response(const std::string& text) {
  nlohmann::json parsed = nlohmann::json::parse(text, nullptr, false);
  if (!parsed.is_discarded()) {
    if (parsed.is_object()) return classify_object(parsed);
    if (parsed.is_array())
      return invalid_json(InvalidJsonKind::WrongStructure,
                          "top-level JSON array instead of an object");
    return invalid_json(InvalidJsonKind::WrongStructure,
                        "top-level JSON scalar instead of an object");
  }
  return classify_unparseable(text);
}

// --- mock provider ----------------------------------------------------------

namespace {

std::string format_date_with_pattern(const Date& d, const std::string& pattern) {
  std::string out;
  for (std::size_t i = 0; i < pattern.size();) {
    if (pattern.compare(i, 4, "YYYY") == 0) {
      char buf[8];
      std::snprintf(buf, sizeof(buf), "%04d", d.year);
      out += buf;
      i += 4;
    } else if (pattern.compare(i, 2, "MM") == 0) {
      char buf[4];
      std::snprintf(buf, sizeof(buf), "%02d", d.month);
      out += buf;
      i += 2;
    } else if (pattern.compare(i, 2, "DD") == 0) {
      char buf[4];
      std::snprintf(buf, sizeof(buf), "%02d", d.day);
      out += buf;
      i += 2;
    } else {
      out.push_back(pattern[i]);
      ++i;
    }
  }
  return out;
}

nlohmann::json witness_json(const std::optional<Record>& witness) {
  if (!witness) return nlohmann::json::object();
  return record_to_json(*witness);
}

}  // namespace

MockProvider::MockProvider(std::vector<Rule> rules, Schema schema,
                           nlohmann::json scenario)
    : schema_(std::move(schema)), scenario_(std::move(scenario)) {
  for (auto& rule : rules) {
    Entry entry;
    entry.witnesses = oracle_tests(rule, schema_);
    std::string text = unparse(rule.expression);
    entry.rule = std::move(rule);
    by_text_.emplace(std::move(text), std::move(entry));
  }
}

const MockProvider::Entry* MockProvider::entry_for_prompt(
    const std::string& user) const {
  auto pos = user.find(kRuleMarker);
  if (pos == std::string::npos) return nullptr;
  std::string rule_text = user.substr(pos + std::string(kRuleMarker).size());
  auto it = by_text_.find(rule_text);
  return it == by_text_.end() ? nullptr : &it->second;
}

std::vector<std::string> MockProvider::behaviors_for(const std::string& rule_id) const {
  auto read = [](const nlohmann::json& j) {
    std::vector<std::string> out;
    for (const auto& b : j) out.push_back(b.get<std::string>());
    return out;
  };
  if (scenario_.contains("rules")) {
    const auto& rules = scenario_.at("rules");
    if (rules.contains(rule_id)) return read(rules.at(rule_id));
  }
  if (scenario_.contains("default")) return read(scenario_.at("default"));
  return {"oracle"};
}

CompletionProvider::Completion MockProvider::complete(const Prompt& prompt,
                                                      double /*temperature*/,
                                                      std::uint64_t seed_hint) {
  const Entry* entry = entry_for_prompt(prompt.user);
  if (!entry)
    return {false, "", "mock provider has no entry for the prompted rule", false};

  auto behaviors = behaviors_for(entry->rule.id);
  const std::string& behavior =
      behaviors.empty() ? std::string("oracle")
                        : behaviors[seed_hint % behaviors.size()];

  const auto& w = entry->witnesses;
  nlohmann::json sat = witness_json(w.satisfying);
  nlohmann::json vio = witness_json(w.violating);
  nlohmann::json inv = witness_json(w.invalid);

  if (behavior == "transport_failure")
    return {false, "", "scripted transport failure", true};

  if (behavior == "wrong_intent") std::swap(sat, vio);

  if (behavior.rfind("date_format:", 0) == 0) {
    std::string pattern = behavior.substr(std::string("date_format:").size());
    auto rewrite = [&](nlohmann::json& test) {
      for (auto& [name, value] : test.items()) {
        auto it = schema_.find(name);
        if (it == schema_.end() || it->second != ValueType::Date) continue;
        if (!value.is_string()) continue;
        if (auto d = parse_date(value.get<std::string>()))
          value = format_date_with_pattern(*d, pattern);
      }
    };
    rewrite(sat);
    rewrite(vio);
    rewrite(inv);
  }

  nlohmann::json full = {{"satisfying_case", sat},
                         {"violating_case", vio},
                         {"invalid_case", inv},
                         {"confidence_score", 0.95}};

  std::string text;
  if (behavior == "semantic_alteration") {
    nlohmann::json altered = {{"satisfying_case", sat},
                              {"violation_case", vio},
                              {"invalid_case", inv},
                              {"confidence_score", 0.95}};
    text = altered.dump();
  } else if (behavior == "missing_test_types") {
    nlohmann::json partial = {{"satisfying_case", sat}, {"violating_case", vio}};
    text = partial.dump();
  } else if (behavior == "additional_tests") {
    nlohmann::json extra = full;
    extra["invalid_case_1"] = inv;
    text = extra.dump();
  } else if (behavior == "lack_of_integration") {
    text = nlohmann::json{{"satisfying_case", sat}}.dump() + "\n" +
           nlohmann::json{{"violating_case", vio}}.dump() + "\n" +
           nlohmann::json{{"invalid_case", inv}}.dump();
  } else if (behavior == "invalid_json_unquoted_names") {
    text = "{satisfying_case: " + sat.dump() + ", violating_case: " + vio.dump() +
           ", invalid_case: " + inv.dump() + ", confidence_score: 0.95}";
  } else if (behavior == "invalid_json_missing_pairs") {
    text = "{\"satisfying_case\": , \"violating_case\": " + vio.dump() +
           ", \"invalid_case\": " + inv.dump() + ", \"confidence_score\": 0.95}";
  } else if (behavior == "invalid_json_wrong_structure") {
    text = nlohmann::json::array({sat, vio, inv}).dump();
  } else if (behavior == "invalid_json_missing_delimiters") {
    text = "{\"satisfying_case\" " + sat.dump() + " \"violating_case\" " +
           vio.dump() + "}";
  } else {
    // oracle, wrong_intent, date_format
    text = full.dump();
  }
  return {true, text, "", false};
}

// --- HTTP provider ----------------------------------------------------------

struct HttpProvider::Impl {
  std::string host;         // scheme://host[:port]
  std::string path_prefix;  // e.g. /v1
  std::string api_key;
};

HttpProvider::HttpProvider(std::string base_url, std::string model,
                           std::string api_key)
    : model_(std::move(model)) {
  impl_ = std::make_unique<Impl>();
  auto scheme_end = base_url.find("://");
  auto path_start = base_url.find('/', scheme_end == std::string::npos
                                           ? 0
                                           : scheme_end + 3);
  if (path_start == std::string::npos) {
    impl_->host = base_url;
  } else {
    impl_->host = base_url.substr(0, path_start);
    impl_->path_prefix = base_url.substr(path_start);
    while (!impl_->path_prefix.empty() && impl_->path_prefix.back() == '/')
      impl_->path_prefix.pop_back();
  }
  impl_->api_key = std::move(api_key);
}

std::unique_ptr<HttpProvider> HttpProvider::from_environment() {
  const char* base = std::getenv("PROVIDER_BASE_URL");
  const char* model = std::getenv("PROVIDER_MODEL");
  const char* key = std::getenv("PROVIDER_API_KEY");
  if (!base || !model)
    throw ConfigError(
        "the http provider requires PROVIDER_BASE_URL and PROVIDER_MODEL");
  return std::make_unique<HttpProvider>(base, model, key ? key : "");
}

HttpProvider::~HttpProvider() = default;

CompletionProvider::Completion HttpProvider::complete(const Prompt& prompt,
                                                      double temperature,
                                                      std::uint64_t seed_hint) {
  nlohmann::json messages = nlohmann::json::array();
  if (prompt.combined) {
    messages.push_back({{"role", "user"}, {"content", prompt.combined_text()}});
  } else {
    messages.push_back({{"role", "system"}, {"content", prompt.system}});
    messages.push_back({{"role", "user"}, {"content", prompt.user}});
  }
  nlohmann::json body = {{"model", model_},
                         {"temperature", temperature},
                         {"seed", seed_hint},
                         {"messages", messages}};

  httplib::Client client(impl_->host);
  client.set_connection_timeout(10);
  client.set_read_timeout(120);
  httplib::Headers headers;
  if (!impl_->api_key.empty())
    headers.emplace("Authorization", "Bearer " + impl_->api_key);

  auto res = client.Post(impl_->path_prefix + "/chat/completions", headers,
                         body.dump(), "application/json");
  if (!res) return {false, "", httplib::to_string(res.error()), true};
  if (res->status == 401 || res->status == 403)
    return {false, "", "authentication rejected (HTTP " +
                            std::to_string(res->status) + ")", false};
  if (res->status == 404 || res->status == 400)
    return {false, "", "provider configuration error (HTTP " +
                            std::to_string(res->status) + "): " + res->body,
            false};
  if (res->status != 200)
    return {false, "", "HTTP " + std::to_string(res->status), true};

  nlohmann::json parsed = nlohmann::json::parse(res->body, nullptr, false);
  if (parsed.is_discarded() || !parsed.contains("choices") ||
      parsed["choices"].empty())
    return {false, "", "malformed completion response", true};
  const auto& message = parsed["choices"][0]["message"];
  return {true, message.value("content", ""), "", false};
}

// --- generation ---------------------------------------------------------------

std::vector<GenerationRecord> generate(const std::vector<Rule>& rules,
                                       CompletionProvider& provider,
                                       const GenerateOptions& options) {
  if (options.reps < 1) throw ConfigError("reps must be at least 1");

  struct Job {
    std::size_t rule_index;
    int repetition;
  };
  std::vector<Job> jobs;
  for (std::size_t i = 0; i < rules.size(); ++i)
    for (int rep = 1; rep <= options.reps; ++rep)
      jobs.push_back({i, rep});

  std::vector<GenerationRecord> records(jobs.size());
  std::atomic<std::size_t> next{0};
  std::atomic<bool> aborted{false};
  std::string abort_reason;
  std::mutex abort_mutex;

  auto worker = [&] {
    while (true) {
      std::size_t index = next.fetch_add(1);
      if (index >= jobs.size() || aborted.load()) return;
      const Job& job = jobs[index];
      const Rule& rule = rules[job.rule_index];

      GenerationRecord rec;
      rec.rule_id = rule.id;
      rec.rule_version = rule.version;
      rec.repetition = job.repetition;
      rec.provider = provider.name();

      Prompt prompt = build_prompt(rule, options.combined_prompt);
      std::uint64_t seed_hint =
          options.seed + static_cast<std::uint64_t>(job.repetition);

      auto started = std::chrono::steady_clock::now();
      CompletionProvider::Completion completion;
      for (int attempt = 0; attempt <= options.max_retries; ++attempt) {
        completion = provider.complete(prompt, options.temperature, seed_hint);
        if (completion.ok || !completion.retryable) break;
        if (attempt < options.max_retries && options.backoff_ms > 0)
          std::this_thread::sleep_for(std::chrono::milliseconds(
              options.backoff_ms * (1 << attempt)));
      }
      auto finished = std::chrono::steady_clock::now();
      rec.latency_seconds =
          provider.deterministic()
              ? 0.0
              : std::chrono::duration<double>(finished - started).count();

      if (!completion.ok) {
        if (!completion.retryable) {
          std::lock_guard<std::mutex> lock(abort_mutex);
          aborted.store(true);
          abort_reason = completion.error;
          return;
        }
        rec.transport_failure = true;
        rec.transport_error = completion.error;
      } else {
        rec.raw_response = completion.text;
        ParseOutcome outcome = parse_response(completion.text);
        if (auto* tests = std::get_if<GeneratedTestSet>(&outcome))
          rec.tests = std::move(*tests);
        else
          rec.hallucination = std::get<HallucinationReport>(outcome);
      }
      records[index] = std::move(rec);
    }
  };

  int workers = std::max(1, options.parallelism);
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < workers; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (aborted.load())
    throw ConfigError("provider aborted the run: " + abort_reason);
  return records;
}

nlohmann::json GenerationRecord::to_json() const {
  nlohmann::json j = {{"ruleId", rule_id},
                      {"version", rule_version},
                      {"repetition", repetition},
                      {"provider", provider},
                      {"latencySeconds", latency_seconds}};
  if (transport_failure) {
    j["outcome"] = "transportFailure";
    j["error"] = transport_error;
    return j;
  }
  j["raw"] = raw_response;
  if (tests) {
    j["outcome"] = "tests";
    j["tests"] = tests->to_json();
  } else if (hallucination) {
    j["outcome"] = "hallucination";
    j["hallucination"] = {{"category", to_string(hallucination->category)},
                          {"subkind", to_string(hallucination->subkind)},
                          {"detail", hallucination->detail}};
  }
  return j;
}

GenerationRecord GenerationRecord::from_json(const nlohmann::json& j) {
  GenerationRecord rec;
  rec.rule_id = j.at("ruleId").get<std::string>();
  rec.rule_version = j.at("version").get<int>();
  rec.repetition = j.at("repetition").get<int>();
  rec.provider = j.value("provider", "");
  rec.latency_seconds = j.value("latencySeconds", 0.0);
  std::string outcome = j.at("outcome").get<std::string>();
  if (outcome == "transportFailure") {
    rec.transport_failure = true;
    rec.transport_error = j.value("error", "");
  } else if (outcome == "tests") {
    rec.raw_response = j.value("raw", "");
    rec.tests = GeneratedTestSet::from_json(j.at("tests"));
  } else {
    rec.raw_response = j.value("raw", "");
    HallucinationReport report;
    const auto& h = j.at("hallucination");
    std::string category = h.at("category").get<std::string>();
    for (auto c : {HallucinationCategory::SemanticAlteration,
                   HallucinationCategory::MissingTestTypes,
                   HallucinationCategory::AdditionalTests,
                   HallucinationCategory::LackOfIntegration,
                   HallucinationCategory::InvalidJson})
      if (to_string(c) == category) report.category = c;
    std::string subkind = h.value("subkind", "none");
    for (auto k : {InvalidJsonKind::None, InvalidJsonKind::UnquotedNames,
                   InvalidJsonKind::MissingPairs, InvalidJsonKind::WrongStructure,
                   InvalidJsonKind::MissingDelimiters})
      if (to_string(k) == subkind) report.subkind = k;
    report.detail = h.value("detail", "");
    rec.hallucination = report;
  }
  return rec;
}

void save_generations(const std::vector<GenerationRecord>& records,
                      const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  for (const auto& rec : records) out << rec.to_json().dump() << "\n";
}

std::vector<GenerationRecord> load_generations(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  std::vector<GenerationRecord> records;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    records.push_back(GenerationRecord::from_json(nlohmann::json::parse(line)));
  }
  return records;
}

}  // namespace rulediff
