#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "rulediff/corpus.hpp"
#include "rulediff/eval.hpp"
#include "rulediff/registry.hpp"

namespace rulediff {

// JSON slot names for the three test intents.
const char* intent_slot(TriState intent);

struct Prompt {
  std::string system;
  std::string user;
  bool combined = false;

  // system and user joined with one blank line, for providers without
  // separate message roles
  std::string combined_text() const;
};

// Deterministic prompt for one rule; the rule text appears verbatim exactly
// once in the user part.
Prompt build_prompt(const Rule& rule, bool combined);

// One parsed completion: the three test cases as flat variable->value JSON
// objects plus the provider-reported confidence, normalized to [0, 1].
struct GeneratedTestSet {
  nlohmann::json satisfying_case;
  nlohmann::json violating_case;
  nlohmann::json invalid_case;
  double confidence_score = 0.0;

  const nlohmann::json& case_for(TriState intent) const;
  nlohmann::json to_json() const;
  static GeneratedTestSet from_json(const nlohmann::json& j);
};

enum class HallucinationCategory {
  SemanticAlteration,  // renamed or invented keys (violation_case, ...)
  MissingTestTypes,    // fewer than three test cases
  AdditionalTests,     // extra test cases (invalid_case_1, ...)
  LackOfIntegration,   // several JSON documents instead of one object
  InvalidJson,
};

enum class InvalidJsonKind {
  None,
  UnquotedNames,
  MissingPairs,
  WrongStructure,
  MissingDelimiters,
};

std::string to_string(HallucinationCategory c);
std::string to_string(InvalidJsonKind k);

struct HallucinationReport {
  HallucinationCategory category = HallucinationCategory::InvalidJson;
  InvalidJsonKind subkind = InvalidJsonKind::None;
  std::string detail;

  std::string label() const;  // e.g. "InvalidJson/wrongStructure"
};

using ParseOutcome = std::variant<GeneratedTestSet, HallucinationReport>;

// Strict validation of one completion. Categories are tried in declaration
// order; every failed parse lands in exactly one.
ParseOutcome parse_response(const std::string& text);

inline bool exact_match(const ParseOutcome& outcome) {
  return std::holds_alternative<GeneratedTestSet>(outcome);
}

// --- providers --------------------------------------------------------------

class CompletionProvider {
 public:
  struct Completion {
    bool ok = false;
    std::string text;
    std::string error;
    bool retryable = false;
  };

  virtual ~CompletionProvider() = default;
  virtual std::string name() const = 0;
  virtual Completion complete(const Prompt& prompt, double temperature,
                              std::uint64_t seed_hint) = 0;
  // pure function of (prompt, seed_hint); latency is reported as zero
  virtual bool deterministic() const { return false; }
};

// Scripted offline provider. The scenario assigns behavior sequences per
// rule id (falling back to "default"), cycled by seed hint:
//
//   {"default": ["oracle"],
//    "rules": {"V03": ["oracle", "missing_test_types"]}}
//
// Behaviors: oracle, wrong_intent, semantic_alteration, missing_test_types,
// additional_tests, lack_of_integration, invalid_json_unquoted_names,
// invalid_json_missing_pairs, invalid_json_wrong_structure,
// invalid_json_missing_delimiters, transport_failure, and
// date_format:<pattern> (oracle tests with date values rewritten, e.g.
// date_format:DD-MM-YYYY).
class MockProvider : public CompletionProvider {
 public:
  MockProvider(std::vector<Rule> rules, Schema schema,
               nlohmann::json scenario = nlohmann::json::object());

  std::string name() const override { return "mock"; }
  bool deterministic() const override { return true; }
  Completion complete(const Prompt& prompt, double temperature,
                      std::uint64_t seed_hint) override;

 private:
  struct Entry {
    Rule rule;
    IntentWitnesses witnesses;
  };

  const Entry* entry_for_prompt(const std::string& user) const;
  std::vector<std::string> behaviors_for(const std::string& rule_id) const;

  std::map<std::string, Entry> by_text_;
  Schema schema_;
  nlohmann::json scenario_;
};

// Chat-completions HTTP client. Configuration comes from the environment:
// PROVIDER_BASE_URL, PROVIDER_MODEL, PROVIDER_API_KEY. Authentication and
// configuration failures are not retryable and abort the run.
class HttpProvider : public CompletionProvider {
 public:
  HttpProvider(std::string base_url, std::string model, std::string api_key);
  static std::unique_ptr<HttpProvider> from_environment();
  ~HttpProvider() override;

  std::string name() const override { return "http:" + model_; }
  Completion complete(const Prompt& prompt, double temperature,
                      std::uint64_t seed_hint) override;

 private:
  struct Impl;
  std::string model_;
  std::unique_ptr<Impl> impl_;
};

// --- generation --------------------------------------------------------------

struct GenerationRecord {
  std::string rule_id;
  int rule_version = 1;
  int repetition = 1;  // 1..reps
  std::string provider;
  std::string raw_response;
  bool transport_failure = false;
  std::string transport_error;
  std::optional<GeneratedTestSet> tests;
  std::optional<HallucinationReport> hallucination;
  double latency_seconds = 0.0;

  bool exact_match() const { return tests.has_value(); }
  nlohmann::json to_json() const;
  static GenerationRecord from_json(const nlohmann::json& j);
};

struct GenerateOptions {
  int reps = 30;
  double temperature = 0.7;
  std::uint64_t seed = 42;
  int parallelism = 1;
  int max_retries = 3;
  int backoff_ms = 200;
  // join system and user parts for providers without separate roles
  bool combined_prompt = false;
};

// Exactly reps records per rule, ordered by (rule, repetition) regardless of
// completion order. Transport errors are retried with exponential backoff
// and then recorded as failed repetitions, which still count against
// T_expected.
std::vector<GenerationRecord> generate(const std::vector<Rule>& rules,
                                       CompletionProvider& provider,
                                       const GenerateOptions& options);

void save_generations(const std::vector<GenerationRecord>& records,
                      const std::string& path);
std::vector<GenerationRecord> load_generations(const std::string& path);

}  // namespace rulediff
