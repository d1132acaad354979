#include <atomic>

#include "doctest.h"
#include "httplib.h"
#include "rulediff/corpus.hpp"
#include "rulediff/parse.hpp"
#include "rulediff/testgen.hpp"

using namespace rulediff;

namespace {

Rule make_rule(const std::string& id, const std::string& text) {
  Rule r;
  r.id = id;
  r.version = 1;
  r.expression = parse(text);
  return r;
}

std::string fixture_path(const std::string& name) {
  return std::string(RULEDIFF_SOURCE_DIR) + "/tests/data/" + name;
}

}  // namespace

TEST_CASE("prompts are deterministic and carry the rule exactly once") {
  Rule rule = make_rule("V01", "topo in ['C50'] implies ds = 9");
  Prompt a = build_prompt(rule, false);
  Prompt b = build_prompt(rule, false);
  CHECK(a.system == b.system);
  CHECK(a.user == b.user);

  std::string rule_text = unparse(rule.expression);
  auto count = [&](const std::string& haystack) {
    std::size_t n = 0, pos = 0;
    while ((pos = haystack.find(rule_text, pos)) != std::string::npos) {
      ++n;
      pos += rule_text.size();
    }
    return n;
  };
  CHECK(count(a.user) == 1);
  CHECK(count(a.system) == 0);

  // the five instruction steps appear in order
  std::size_t last = 0;
  for (const char* step : {"Step 1", "Step 2", "Step 3", "Step 4", "Step 5"}) {
    auto pos = a.system.find(step);
    REQUIRE(pos != std::string::npos);
    CHECK(pos > last);
    last = pos;
  }

  Prompt combined = build_prompt(rule, true);
  CHECK(combined.combined_text() == combined.system + "\n\n" + combined.user);
}

TEST_CASE("rule text with braces is not templated") {
  // braces come through verbatim; only the single placeholder is filled
  Rule rule = make_rule("V02", "t = '{rule}' implies t = '{x}'");
  Prompt p = build_prompt(rule, false);
  CHECK(p.user.find("'{rule}'") != std::string::npos);
  CHECK(p.user.find("'{x}'") != std::string::npos);
}

TEST_CASE("a fully valid completion parses into a test set") {
  auto outcome = parse_response(
      R"({"satisfying_case": {"A": 1}, "violating_case": {"A": 2},
          "invalid_case": {"A": null}, "confidence_score": 0.9})");
  REQUIRE(exact_match(outcome));
  const auto& tests = std::get<GeneratedTestSet>(outcome);
  CHECK(tests.satisfying_case["A"] == 1);
  CHECK(tests.invalid_case["A"].is_null());
  CHECK(tests.confidence_score == doctest::Approx(0.9));
}

TEST_CASE("confidence on a 0-100 scale is normalized") {
  auto outcome = parse_response(
      R"({"satisfying_case": {"A": 1}, "violating_case": {"A": 2},
          "invalid_case": {"A": 3}, "confidence_score": 85})");
  REQUIRE(exact_match(outcome));
  CHECK(std::get<GeneratedTestSet>(outcome).confidence_score == doctest::Approx(0.85));
}

TEST_CASE("the hallucination fixture classifies 15 for 15") {
  auto cases = load_json_file(fixture_path("hallucination_cases.json"));
  REQUIRE(cases.size() == 15);
  for (const auto& item : cases) {
    CAPTURE(item.at("name").get<std::string>());
    auto outcome = parse_response(item.at("response").get<std::string>());
    REQUIRE(!exact_match(outcome));
    CHECK(std::get<HallucinationReport>(outcome).label() ==
          item.at("expected").get<std::string>());
  }
}

TEST_CASE("every failed parse gets exactly one category") {
  // spec examples
  auto renamed = parse_response(
      R"({"satisfying_case": {}, "violation_case": {}, "invalid_case": {},
          "confidence_score": 1})");
  CHECK(std::get<HallucinationReport>(renamed).category ==
        HallucinationCategory::SemanticAlteration);

  auto missing = parse_response(
      R"({"satisfying_case": {"A": 1}, "violating_case": {"A": 2}})");
  CHECK(std::get<HallucinationReport>(missing).category ==
        HallucinationCategory::MissingTestTypes);

  auto list = parse_response(R"([{"A": 1}, {"A": 2}, {"A": 3}])");
  const auto& report = std::get<HallucinationReport>(list);
  CHECK(report.category == HallucinationCategory::InvalidJson);
  CHECK(report.subkind == InvalidJsonKind::WrongStructure);
}

TEST_CASE("exact_match is total over parse outcomes") {
  CHECK(!exact_match(parse_response("")));
  CHECK(!exact_match(parse_response("plain prose, no JSON at all")));
  CHECK(!exact_match(parse_response("42")));
  CHECK(!exact_match(parse_response("null")));
}

TEST_CASE("mock provider emits deterministic oracle tests") {
  Schema schema = {{"A", ValueType::Integer}, {"B", ValueType::Integer}};
  std::vector<Rule> rules = {make_rule("V01", "A = 1 implies B = 2")};
  MockProvider provider(rules, schema);

  Prompt prompt = build_prompt(rules[0], false);
  auto first = provider.complete(prompt, 0.7, 43);
  auto second = provider.complete(prompt, 0.7, 43);
  REQUIRE(first.ok);
  CHECK(first.text == second.text);

  auto outcome = parse_response(first.text);
  REQUIRE(exact_match(outcome));
  const auto& tests = std::get<GeneratedTestSet>(outcome);
  CHECK(tests.satisfying_case["A"] == 1);
  CHECK(tests.satisfying_case["B"] == 2);
}

TEST_CASE("mock scenarios script hallucinations per rule and repetition") {
  Schema schema = {{"A", ValueType::Integer}, {"B", ValueType::Integer}};
  std::vector<Rule> rules = {make_rule("V01", "A = 1 implies B = 2"),
                             make_rule("V02", "B = 3 implies A = 4")};
  nlohmann::json scenario = {
      {"default", {"oracle"}},
      {"rules", {{"V02", {"oracle", "missing_test_types"}}}}};
  MockProvider provider(rules, schema, scenario);

  GenerateOptions options;
  options.reps = 4;
  options.seed = 100;
  options.backoff_ms = 0;
  auto records = generate(rules, provider, options);
  REQUIRE(records.size() == 8);

  // V01 stays on the oracle behavior
  for (int rep = 0; rep < 4; ++rep) CHECK(records[rep].exact_match());
  // V02 alternates: behaviors cycle on (seed + repetition)
  int v02_exact = 0, v02_missing = 0;
  for (int rep = 4; rep < 8; ++rep) {
    if (records[rep].exact_match()) {
      ++v02_exact;
    } else {
      CHECK(records[rep].hallucination->category ==
            HallucinationCategory::MissingTestTypes);
      ++v02_missing;
    }
  }
  CHECK(v02_exact == 2);
  CHECK(v02_missing == 2);
}

TEST_CASE("each scripted behavior lands in its own category") {
  Schema schema = {{"A", ValueType::Integer},
                   {"B", ValueType::Integer},
                   {"d", ValueType::Date}};
  std::vector<Rule> rules = {
      make_rule("V01", "A = 1 implies d > date('2020-05-10')")};

  const std::pair<const char*, const char*> expectations[] = {
      {"semantic_alteration", "SemanticAlteration"},
      {"missing_test_types", "MissingTestTypes"},
      {"additional_tests", "AdditionalTests"},
      {"lack_of_integration", "LackOfIntegration"},
      {"invalid_json_unquoted_names", "InvalidJson/unquotedNames"},
      {"invalid_json_missing_pairs", "InvalidJson/missingPairs"},
      {"invalid_json_wrong_structure", "InvalidJson/wrongStructure"},
      {"invalid_json_missing_delimiters", "InvalidJson/missingDelimiters"},
  };
  for (const auto& [behavior, label] : expectations) {
    CAPTURE(behavior);
    nlohmann::json scenario = {{"default", {behavior}}};
    MockProvider provider(rules, schema, scenario);
    auto completion = provider.complete(build_prompt(rules[0], false), 0.7, 1);
    REQUIRE(completion.ok);
    auto outcome = parse_response(completion.text);
    REQUIRE(!exact_match(outcome));
    CHECK(std::get<HallucinationReport>(outcome).label() == label);
  }
}

TEST_CASE("scripted date_format rewrites date values only") {
  Schema schema = {{"A", ValueType::Integer}, {"d", ValueType::Date}};
  std::vector<Rule> rules = {
      make_rule("V01", "A = 1 implies d > date('2020-05-10')")};
  nlohmann::json scenario = {{"default", {"date_format:DD-MM-YYYY"}}};
  MockProvider provider(rules, schema, scenario);
  auto completion = provider.complete(build_prompt(rules[0], false), 0.7, 1);
  auto outcome = parse_response(completion.text);
  REQUIRE(exact_match(outcome));
  const auto& tests = std::get<GeneratedTestSet>(outcome);
  std::string date = tests.satisfying_case["d"].get<std::string>();
  CHECK(date.size() == 10);
  CHECK(date.substr(6) == "2020");  // day-month-year order
  CHECK(tests.satisfying_case["A"] == 1);
}

TEST_CASE("transport failures are retried then recorded, reps stay exact") {
  Schema schema = {{"A", ValueType::Integer}, {"B", ValueType::Integer}};
  std::vector<Rule> rules = {make_rule("V01", "A = 1 implies B = 2")};
  nlohmann::json scenario = {{"default", {"transport_failure", "oracle", "oracle"}}};
  MockProvider provider(rules, schema, scenario);

  GenerateOptions options;
  options.reps = 3;
  options.seed = 0;  // seed+rep = 1,2,3 -> oracle, oracle, transport_failure
  options.backoff_ms = 0;
  auto records = generate(rules, provider, options);
  REQUIRE(records.size() == 3);
  CHECK(records[0].exact_match());
  CHECK(records[1].exact_match());
  CHECK(records[2].transport_failure);
  CHECK(!records[2].exact_match());
  CHECK(records[2].repetition == 3);
}

TEST_CASE("generation records are ordered canonically even in parallel") {
  CorpusSpec spec;
  spec.rule_count = 6;
  spec.min_feature_rules = 2;
  Corpus corpus = generate_corpus(spec);
  MockProvider provider(corpus.rules, corpus.schema);

  GenerateOptions serial;
  serial.reps = 5;
  GenerateOptions parallel = serial;
  parallel.parallelism = 8;

  auto a = generate(corpus.rules, provider, serial);
  auto b = generate(corpus.rules, provider, parallel);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].rule_id == b[i].rule_id);
    CHECK(a[i].repetition == b[i].repetition);
    CHECK(a[i].raw_response == b[i].raw_response);
    CHECK(a[i].latency_seconds == 0.0);  // deterministic provider
  }
}

TEST_CASE("a provider configuration error aborts the run") {
  Schema schema = {{"A", ValueType::Integer}};
  std::vector<Rule> known = {make_rule("V01", "A = 1")};
  MockProvider provider(known, schema);

  // prompting for a rule the provider has never seen is a config error
  std::vector<Rule> unknown = {make_rule("V99", "A = 2")};
  GenerateOptions options;
  options.reps = 1;
  CHECK_THROWS_AS(generate(unknown, provider, options), ConfigError);
}

TEST_CASE("http provider against a canned chat endpoint") {
  httplib::Server server;
  std::atomic<int> failures_left{0};
  nlohmann::json seen_body;
  std::mutex seen_mutex;

  server.Post("/v1/chat/completions",
              [&](const httplib::Request& req, httplib::Response& res) {
                if (failures_left.fetch_sub(1) > 0) {
                  res.status = 503;
                  return;
                }
                {
                  std::lock_guard<std::mutex> lock(seen_mutex);
                  seen_body = nlohmann::json::parse(req.body);
                }
                nlohmann::json completion = {
                    {"choices",
                     {{{"message",
                        {{"role", "assistant"}, {"content", "{\"ok\": 1}"}}}}}}};
                res.set_content(completion.dump(), "application/json");
              });
  server.Post("/denied/chat/completions",
              [](const httplib::Request&, httplib::Response& res) {
                res.status = 401;
              });

  int port = server.bind_to_any_port("127.0.0.1");
  std::thread thread([&] { server.listen_after_bind(); });
  server.wait_until_ready();
  std::string base = "http://127.0.0.1:" + std::to_string(port) + "/v1";

  Rule rule = make_rule("V01", "A = 1");
  Prompt prompt = build_prompt(rule, false);

  SUBCASE("success path carries model, temperature, and both roles") {
    HttpProvider provider(base, "test-model", "secret");
    auto completion = provider.complete(prompt, 0.7, 5);
    REQUIRE(completion.ok);
    CHECK(completion.text == "{\"ok\": 1}");
    std::lock_guard<std::mutex> lock(seen_mutex);
    CHECK(seen_body["model"] == "test-model");
    CHECK(seen_body["temperature"] == doctest::Approx(0.7));
    REQUIRE(seen_body["messages"].size() == 2);
    CHECK(seen_body["messages"][0]["role"] == "system");
    CHECK(seen_body["messages"][1]["role"] == "user");
  }

  SUBCASE("combined prompts collapse to a single user message") {
    HttpProvider provider(base, "test-model", "");
    Prompt combined = build_prompt(rule, true);
    auto completion = provider.complete(combined, 0.7, 5);
    REQUIRE(completion.ok);
    std::lock_guard<std::mutex> lock(seen_mutex);
    REQUIRE(seen_body["messages"].size() == 1);
    CHECK(seen_body["messages"][0]["role"] == "user");
  }

  SUBCASE("server errors are retryable, auth failures are not") {
    HttpProvider provider(base, "test-model", "");
    failures_left.store(1);
    auto failed = provider.complete(prompt, 0.7, 5);
    CHECK(!failed.ok);
    CHECK(failed.retryable);

    HttpProvider denied(
        "http://127.0.0.1:" + std::to_string(port) + "/denied", "m", "key");
    auto rejected = denied.complete(prompt, 0.7, 1);
    CHECK(!rejected.ok);
    CHECK(!rejected.retryable);
  }

  server.stop();
  thread.join();
}

TEST_CASE("http provider requires its environment") {
  unsetenv("PROVIDER_BASE_URL");
  unsetenv("PROVIDER_MODEL");
  CHECK_THROWS_AS(HttpProvider::from_environment(), ConfigError);
}

TEST_CASE("generation records round-trip through JSONL") {
  Schema schema = {{"A", ValueType::Integer}, {"B", ValueType::Integer}};
  std::vector<Rule> rules = {make_rule("V01", "A = 1 implies B = 2")};
  nlohmann::json scenario = {
      {"default", {"oracle", "missing_test_types", "transport_failure"}}};
  MockProvider provider(rules, schema, scenario);
  GenerateOptions options;
  options.reps = 6;
  options.seed = 0;
  options.backoff_ms = 0;
  auto records = generate(rules, provider, options);

  std::string path = "/tmp/rulediff_test_generations.jsonl";
  save_generations(records, path);
  auto loaded = load_generations(path);
  REQUIRE(loaded.size() == records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    CHECK(loaded[i].to_json() == records[i].to_json());
  }
}
