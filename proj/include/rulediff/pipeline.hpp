#pragma once

#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "rulediff/registry.hpp"

namespace rulediff {

struct StageError : std::runtime_error {
  StageError(const std::string& stage, const std::string& message)
      : std::runtime_error("stage " + stage + " failed: " + message),
        stage_name(stage) {}

  std::string stage_name;
};

// Full pipeline configuration. Defaults follow the experiment settings:
// 30 repetitions, temperature 0.7, alpha 0.01.
struct RunConfig {
  // corpus inputs; left empty, the corpus stage generates a synthetic one
  std::string rules_path;
  std::string schema_path;
  std::string template_path;
  std::string faults_path;

  std::string out_dir;
  std::string provider = "mock";  // mock | http
  std::string scenario_path;      // mock behavior script
  int reps = 30;
  double temperature = 0.7;
  double alpha = 0.01;
  std::uint64_t seed = 42;
  int corpus_count = 10;
  std::string service_url;  // empty: embedded service on an ephemeral port
  int parallelism = 1;
  bool combined_prompt = false;
  std::vector<std::string> stages;  // empty: all, in pipeline order
  bool verbose = false;

  static RunConfig from_json(const nlohmann::json& j);
  // manifest form; excludes out_dir so reruns into fresh directories stay
  // byte-identical
  nlohmann::json to_manifest_json() const;
};

inline const std::vector<std::string>& pipeline_stage_names() {
  static const std::vector<std::string> kStages = {
      "corpus", "mutate", "generate", "diff", "metrics", "stats", "report"};
  return kStages;
}

// Executes the configured stages in pipeline order, writing each stage's
// artifacts and a manifest with content hashes into config.out_dir. A full
// run requires a fresh directory; explicit stage subsets may rerun in place
// against the prior artifacts. Throws ConfigError for configuration
// problems and StageError when a stage fails.
void run_pipeline(const RunConfig& config);

}  // namespace rulediff
