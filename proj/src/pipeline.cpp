#include "rulediff/pipeline.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "rulediff/corpus.hpp"
#include "rulediff/difftest.hpp"
#include "rulediff/http_service.hpp"
#include "rulediff/metrics.hpp"
#include "rulediff/mutation.hpp"
#include "rulediff/service.hpp"
#include "rulediff/sha256.hpp"
#include "rulediff/stats.hpp"
#include "rulediff/testgen.hpp"

namespace fs = std::filesystem;

namespace rulediff {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path);
  out << content;
}

struct StagePaths {
  std::string dir;

  std::string rules() const { return dir + "/rules.json"; }
  std::string schema() const { return dir + "/schema.json"; }
  std::string tmpl() const { return dir + "/template.json"; }
  std::string faults() const { return dir + "/faults.json"; }
  std::string mutants() const { return dir + "/mutants.json"; }
  std::string generations() const { return dir + "/generations.jsonl"; }
  std::string diff_records() const { return dir + "/diff_records.jsonl"; }
  std::string ledger_json() const { return dir + "/ledger.json"; }
  std::string ledger_csv() const { return dir + "/ledger.csv"; }
  std::string metrics() const { return dir + "/metrics.csv"; }
  std::string stats() const { return dir + "/stats.csv"; }
  std::string report_json() const { return dir + "/report.json"; }
  std::string report_txt() const { return dir + "/report.txt"; }
  std::string manifest() const { return dir + "/manifest.json"; }
};

// --- stages -----------------------------------------------------------------

void stage_corpus(const RunConfig& config, const StagePaths& paths) {
  if (config.rules_path.empty()) {
    CorpusSpec spec;
    spec.seed = config.seed;
    spec.rule_count = config.corpus_count;
    Corpus corpus = generate_corpus(spec);
    save_corpus(corpus, paths.dir);
  } else {
    // canonicalize the provided files into the run directory
    save_rules(load_rules(config.rules_path), paths.rules());
    save_schema(load_schema(config.schema_path), paths.schema());
    Schema schema = load_schema(paths.schema());
    save_json_file(record_to_json(record_from_json(
                       load_json_file(config.template_path), schema, false)),
                   paths.tmpl());
  }
  Schema schema = load_schema(paths.schema());
  FaultConfig faults;
  if (!config.faults_path.empty())
    faults = FaultConfig::load(config.faults_path, schema);
  save_json_file(faults.to_json(), paths.faults());
}

void stage_mutate(const RunConfig& config, const StagePaths& paths) {
  (void)config;
  auto rules = load_rules(paths.rules());
  auto mutants = mutate_all(rules);
  save_rules(mutants_to_rules(mutants), paths.mutants());
}

void stage_generate(const RunConfig& config, const StagePaths& paths) {
  auto rules = load_rules(paths.rules());
  auto mutants = load_rules(paths.mutants());
  Schema schema = load_schema(paths.schema());

  std::vector<Rule> all = rules;
  all.insert(all.end(), mutants.begin(), mutants.end());

  std::unique_ptr<CompletionProvider> provider;
  if (config.provider == "mock") {
    nlohmann::json scenario = nlohmann::json::object();
    if (!config.scenario_path.empty())
      scenario = load_json_file(config.scenario_path);
    provider = std::make_unique<MockProvider>(all, schema, scenario);
  } else if (config.provider == "http") {
    provider = HttpProvider::from_environment();
  } else {
    throw ConfigError("unknown provider '" + config.provider + "'");
  }

  GenerateOptions options;
  options.reps = config.reps;
  options.temperature = config.temperature;
  options.seed = config.seed;
  options.parallelism = config.parallelism;
  options.combined_prompt = config.combined_prompt;
  auto records = generate(all, *provider, options);
  save_generations(records, paths.generations());
}

void stage_diff(const RunConfig& config, const StagePaths& paths) {
  auto rules = load_rules(paths.rules());
  Schema schema = load_schema(paths.schema());
  Record baseline =
      full_record_from_json(load_json_file(paths.tmpl()), schema);
  FaultConfig faults = FaultConfig::load(paths.faults(), schema);
  auto generations = load_generations(paths.generations());

  std::unique_ptr<ServiceServer> embedded;
  std::string url = config.service_url;
  if (url.empty()) {
    embedded = std::make_unique<ServiceServer>(rules, schema, faults);
    embedded->start("127.0.0.1", 0);
    url = embedded->base_url();
  }

  ServiceClient client(url);
  auto result = run_differential(rules, generations, baseline, schema, client);
  if (embedded) embedded->stop();

  save_diff_records(result.records, paths.diff_records());
  DiffLedger ledger = build_ledger(result.records);
  nlohmann::json summary = ledger.to_json();
  summary["skippedNonExact"] = result.skipped_non_exact;
  summary["infrastructureFailures"] = result.infrastructure_failures;
  summary["inexecutableTests"] = result.inexecutable_tests;
  save_json_file(summary, paths.ledger_json());
  write_file(paths.ledger_csv(), ledger.to_csv());

  if (result.infrastructure_failures > 0)
    std::cerr << "diff: " << result.infrastructure_failures
              << " repetitions excluded after transport failures\n";
}

void stage_metrics(const RunConfig& config, const StagePaths& paths) {
  (void)config;
  auto rules = load_rules(paths.rules());
  auto mutants = load_rules(paths.mutants());
  Schema schema = load_schema(paths.schema());
  auto generations = load_generations(paths.generations());

  std::vector<Rule> all = rules;
  all.insert(all.end(), mutants.begin(), mutants.end());

  auto tallies = tally_generations(generations, all, schema);
  auto rows = compute_metrics(tallies);
  save_metrics(rows, paths.metrics());
}

void stage_stats(const RunConfig& config, const StagePaths& paths) {
  auto rows = load_metrics(paths.metrics());
  std::ostringstream csv;
  csv << "metric,model1,model2,comparison,p,A12,magnitude\n";
  for (const auto& metric : known_metric_names()) {
    auto groups = metric_groups(rows, metric);
    if (groups.size() < 2) continue;  // nothing to compare
    auto report = stats::compare_all(groups, config.alpha, true);
    std::string block = stats::report_to_csv(report, metric);
    // drop the per-report header
    auto newline = block.find('\n');
    csv << block.substr(newline + 1);
  }
  write_file(paths.stats(), csv.str());
}

void stage_report(const RunConfig& config, const StagePaths& paths) {
  nlohmann::json report;
  report["alpha"] = config.alpha;

  nlohmann::json ledger = load_json_file(paths.ledger_json());
  report["ledger"] = ledger;

  auto rows = load_metrics(paths.metrics());
  std::map<std::string, std::map<std::string, std::vector<double>>> by_provider;
  for (const auto& row : rows) {
    auto& per = by_provider[row.provider];
    per["CR"].push_back(row.cr * 100.0);
    per["SI_" + to_string(row.type)].push_back(row.si);
    if (row.ri) per["RI_" + to_string(row.type)].push_back(*row.ri * 100.0);
  }
  nlohmann::json metric_summary = nlohmann::json::object();
  for (const auto& [provider, metric_values] : by_provider) {
    nlohmann::json per = nlohmann::json::object();
    for (const auto& [metric, values] : metric_values) {
      double mean = 0.0;
      for (double v : values) mean += v;
      mean /= static_cast<double>(values.size());
      per[metric] = mean;
    }
    metric_summary[provider] = per;
  }
  report["metricMeans"] = metric_summary;

  std::string stats_csv = read_file(paths.stats());
  report["statsCsv"] = stats_csv;
  save_json_file(report, paths.report_json());

  // human-readable mirror
  std::ostringstream txt;
  txt << "Differential ledger ("
      << ledger["executedRules"].size() << " rules executed)\n";
  txt << "  category        match   mismatch  mismatched rules\n";
  for (auto category : kAllServiceResults) {
    const auto& cat = ledger["categories"][to_string(category)];
    txt << "  " << display_name(category);
    for (std::size_t i = display_name(category).size(); i < 16; ++i) txt << ' ';
    txt << cat["matchCount"].get<std::size_t>() << "       "
        << cat["mismatchCount"].get<std::size_t>() << "        ";
    bool first = true;
    for (const auto& rule : cat["mismatchedRules"]) {
      if (!first) txt << ", ";
      txt << rule.get<std::string>();
      first = false;
    }
    txt << "\n";
  }
  txt << "\nMetric means per provider\n";
  for (const auto& [provider, per] : metric_summary.items()) {
    txt << "  " << provider << ":";
    for (const auto& [metric, value] : per.items()) {
      char buf[64];
      std::snprintf(buf, sizeof(buf), " %s=%.3f", metric.c_str(),
                    value.get<double>());
      txt << buf;
    }
    txt << "\n";
  }
  txt << "\nStatistical comparisons\n";
  std::istringstream stats_lines(stats_csv);
  std::string line;
  bool any = false;
  std::getline(stats_lines, line);  // header
  while (std::getline(stats_lines, line)) {
    if (line.empty()) continue;
    txt << "  " << line << "\n";
    any = true;
  }
  if (!any) txt << "  (fewer than two provider groups; tests skipped)\n";
  write_file(paths.report_txt(), txt.str());
}

void write_manifest(const RunConfig& config, const StagePaths& paths) {
  nlohmann::json manifest;
  manifest["config"] = config.to_manifest_json();
  manifest["seed"] = config.seed;
  nlohmann::json artifacts = nlohmann::json::object();
  for (const auto& entry : fs::directory_iterator(paths.dir)) {
    if (!entry.is_regular_file()) continue;
    std::string name = entry.path().filename().string();
    if (name == "manifest.json") continue;
    artifacts[name] = sha256_file(entry.path().string());
  }
  manifest["artifacts"] = artifacts;
  save_json_file(manifest, paths.manifest());
}

}  // namespace

RunConfig RunConfig::from_json(const nlohmann::json& j) {
  RunConfig config;
  config.rules_path = j.value("rules", "");
  config.schema_path = j.value("schema", "");
  config.template_path = j.value("template", "");
  config.faults_path = j.value("faults", "");
  config.out_dir = j.value("out", "");
  config.provider = j.value("provider", "mock");
  config.scenario_path = j.value("scenario", "");
  config.reps = j.value("reps", 30);
  config.temperature = j.value("temperature", 0.7);
  config.alpha = j.value("alpha", 0.01);
  config.seed = j.value("seed", std::uint64_t{42});
  config.corpus_count = j.value("corpusCount", 10);
  config.service_url = j.value("service", "");
  config.parallelism = j.value("parallelism", 1);
  config.combined_prompt = j.value("combinedPrompt", false);
  if (j.contains("stages"))
    for (const auto& s : j.at("stages"))
      config.stages.push_back(s.get<std::string>());
  return config;
}

nlohmann::json RunConfig::to_manifest_json() const {
  return {{"rules", rules_path},
          {"schema", schema_path},
          {"template", template_path},
          {"faults", faults_path},
          {"provider", provider},
          {"scenario", scenario_path},
          {"reps", reps},
          {"temperature", temperature},
          {"alpha", alpha},
          {"seed", seed},
          {"corpusCount", corpus_count},
          {"service", service_url},
          {"parallelism", parallelism},
          {"combinedPrompt", combined_prompt}};
}

void run_pipeline(const RunConfig& config) {
  if (config.out_dir.empty()) throw ConfigError("output directory is required");
  if (!config.rules_path.empty()) {
    for (const std::string& path :
         {config.rules_path, config.schema_path, config.template_path}) {
      if (path.empty())
        throw ConfigError("rules, schema, and template must be given together");
      if (!fs::exists(path)) throw ConfigError("missing input file " + path);
    }
  }
  if (!config.faults_path.empty() && !fs::exists(config.faults_path))
    throw ConfigError("missing fault config " + config.faults_path);
  if (!config.scenario_path.empty() && !fs::exists(config.scenario_path))
    throw ConfigError("missing scenario file " + config.scenario_path);

  std::vector<std::string> stages = config.stages;
  bool full_run = stages.empty();
  if (full_run) stages = pipeline_stage_names();
  for (const auto& stage : stages) {
    if (std::find(pipeline_stage_names().begin(), pipeline_stage_names().end(),
                  stage) == pipeline_stage_names().end())
      throw ConfigError("unknown stage '" + stage + "'");
  }

  StagePaths paths{config.out_dir};
  if (full_run && fs::exists(config.out_dir) && !fs::is_empty(config.out_dir))
    throw ConfigError("output directory " + config.out_dir +
                      " is not empty; completed runs are immutable");
  fs::create_directories(config.out_dir);

  // keep pipeline order regardless of the order given
  for (const auto& stage : pipeline_stage_names()) {
    if (std::find(stages.begin(), stages.end(), stage) == stages.end()) continue;
    if (config.verbose) std::cerr << "stage " << stage << "...\n";
    try {
      if (stage == "corpus") stage_corpus(config, paths);
      else if (stage == "mutate") stage_mutate(config, paths);
      else if (stage == "generate") stage_generate(config, paths);
      else if (stage == "diff") stage_diff(config, paths);
      else if (stage == "metrics") stage_metrics(config, paths);
      else if (stage == "stats") stage_stats(config, paths);
      else if (stage == "report") stage_report(config, paths);
    } catch (const StageError&) {
      throw;
    } catch (const std::exception& e) {
      throw StageError(stage, e.what());
    }
  }
  write_manifest(config, paths);
}

}  // namespace rulediff
