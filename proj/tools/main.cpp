#include <filesystem>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"
#include "rulediff/corpus.hpp"
#include "rulediff/difftest.hpp"
#include "rulediff/http_service.hpp"
#include "rulediff/metrics.hpp"
#include "rulediff/mutation.hpp"
#include "rulediff/pipeline.hpp"
#include "rulediff/refengine.hpp"
#include "rulediff/stats.hpp"
#include "rulediff/testgen.hpp"

namespace fs = std::filesystem;
using namespace rulediff;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitStage = 2;

int cmd_corpus(std::uint64_t seed, int count, const std::string& out) {
  CorpusSpec spec;
  spec.seed = seed;
  spec.rule_count = count;
  Corpus corpus = generate_corpus(spec);
  save_corpus(corpus, out);
  std::cout << "wrote " << corpus.rules.size() << " rules to " << out << "\n";
  return kExitOk;
}

int cmd_mutate(const std::string& rules_path, const std::string& out) {
  auto rules = load_rules(rules_path);
  auto mutants = mutate_all(rules);
  save_rules(mutants_to_rules(mutants), out);
  std::cout << "wrote " << mutants.size() << " mutants from " << rules.size()
            << " rules to " << out << "\n";
  return kExitOk;
}

int cmd_generate(const std::string& rules_path, const std::string& mutants_path,
                 const std::string& schema_path, const std::string& provider_name,
                 const std::string& scenario_path, const GenerateOptions& options,
                 const std::string& out) {
  auto rules = load_rules(rules_path);
  if (!mutants_path.empty()) {
    auto mutants = load_rules(mutants_path);
    rules.insert(rules.end(), mutants.begin(), mutants.end());
  }
  Schema schema = load_schema(schema_path);

  std::unique_ptr<CompletionProvider> provider;
  if (provider_name == "mock") {
    nlohmann::json scenario = nlohmann::json::object();
    if (!scenario_path.empty()) scenario = load_json_file(scenario_path);
    provider = std::make_unique<MockProvider>(rules, schema, scenario);
  } else if (provider_name == "http") {
    provider = HttpProvider::from_environment();
  } else {
    throw ConfigError("unknown provider '" + provider_name + "'");
  }

  auto records = generate(rules, *provider, options);
  save_generations(records, out);
  int exact = 0;
  for (const auto& r : records) exact += r.exact_match() ? 1 : 0;
  std::cout << "wrote " << records.size() << " generation records (" << exact
            << " exact matches) to " << out << "\n";
  return kExitOk;
}

int cmd_diff(const std::string& tests_path, const std::string& rules_path,
             const std::string& schema_path, const std::string& template_path,
             const std::string& faults_path, const std::string& service_url,
             bool serve_embedded, const std::string& out_dir) {
  auto rules = load_rules(rules_path);
  Schema schema = load_schema(schema_path);
  Record baseline =
      full_record_from_json(load_json_file(template_path), schema);
  FaultConfig faults;
  if (!faults_path.empty()) faults = FaultConfig::load(faults_path, schema);
  auto generations = load_generations(tests_path);

  std::unique_ptr<ServiceServer> embedded;
  std::string url = service_url;
  if (serve_embedded || url.empty()) {
    embedded = std::make_unique<ServiceServer>(rules, schema, faults);
    embedded->start("127.0.0.1", 0);
    url = embedded->base_url();
  }

  ServiceClient client(url);
  auto result = run_differential(rules, generations, baseline, schema, client);
  if (embedded) embedded->stop();

  fs::create_directories(out_dir);
  save_diff_records(result.records, out_dir + "/diff_records.jsonl");
  DiffLedger ledger = build_ledger(result.records);
  nlohmann::json summary = ledger.to_json();
  summary["skippedNonExact"] = result.skipped_non_exact;
  summary["infrastructureFailures"] = result.infrastructure_failures;
  summary["inexecutableTests"] = result.inexecutable_tests;
  save_json_file(summary, out_dir + "/ledger.json");
  std::ofstream csv(out_dir + "/ledger.csv");
  csv << ledger.to_csv();

  std::size_t mismatches = 0;
  for (const auto& [_, rules_in_category] : ledger.mismatched)
    mismatches += rules_in_category.size();
  std::cout << result.records.size() << " comparisons over "
            << ledger.executed.size() << " rules; " << mismatches
            << " per-category rule mismatches; results in " << out_dir << "\n";
  if (result.infrastructure_failures > 0)
    std::cerr << result.infrastructure_failures
              << " repetitions excluded after transport failures\n";
  return kExitOk;
}

int cmd_metrics(const std::string& generations_path, const std::string& rules_path,
                const std::string& mutants_path, const std::string& schema_path,
                const std::string& out) {
  auto rules = load_rules(rules_path);
  if (!mutants_path.empty()) {
    auto mutants = load_rules(mutants_path);
    rules.insert(rules.end(), mutants.begin(), mutants.end());
  }
  Schema schema = load_schema(schema_path);
  auto generations = load_generations(generations_path);
  auto tallies = tally_generations(generations, rules, schema);
  auto rows = compute_metrics(tallies);
  save_metrics(rows, out);
  std::cout << "wrote " << rows.size() << " metric rows to " << out << "\n";
  return kExitOk;
}

int cmd_stats(const std::string& metrics_path, const std::string& group_by,
              const std::string& metric, double alpha, bool lower_is_better,
              const std::string& out) {
  if (group_by != "provider")
    throw ConfigError("only --group-by provider is supported");
  auto rows = load_metrics(metrics_path);
  auto groups = metric_groups(rows, metric);
  auto report = stats::compare_all(groups, alpha, !lower_is_better);
  std::ofstream file(out);
  if (!file) throw ConfigError("cannot write " + out);
  file << stats::report_to_csv(report, metric);
  std::cout << "omnibus H=" << report.omnibus.h << " p=" << report.omnibus.p
            << (report.pairwise_run ? "" : " (pairwise tests skipped)") << "\n";
  return kExitOk;
}

int cmd_serve(const std::string& rules_path, const std::string& schema_path,
              const std::string& faults_path, const std::string& host, int port) {
  auto rules = load_rules(rules_path);
  Schema schema = load_schema(schema_path);
  FaultConfig faults;
  if (!faults_path.empty()) faults = FaultConfig::load(faults_path, schema);
  ServiceServer server(rules, schema, faults);
  std::cout << "serving " << rules.size() << " rules on " << host << ":" << port
            << "\n";
  server.run_blocking(host, port);
  return kExitOk;
}

int cmd_run_ref_engine(const std::string& rules_path, const std::string& schema_path,
                       const std::string& record_path) {
  auto rules = load_rules(rules_path);
  Schema schema = load_schema(schema_path);
  Record record = record_from_json(load_json_file(record_path), schema, false);
  for (const auto& rule : rules)
    std::cout << rule.key() << " " << to_string(ref_validate(rule, record))
              << "\n";
  return kExitOk;
}

int cmd_report(const std::string& dir) {
  RunConfig config;
  config.out_dir = dir;
  config.stages = {"report"};
  run_pipeline(config);
  std::cout << "wrote " << dir << "/report.json and report.txt\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Differential-testing workbench for tri-state validation rule engines"};
  app.require_subcommand(1);

  std::string config_path;
  bool verbose = false;
  app.add_option("--config", config_path, "JSON config file (run subcommand)");
  app.add_flag("--verbose", verbose, "log stage progress");

  // corpus
  auto* corpus_cmd = app.add_subcommand("corpus", "generate a synthetic rule corpus");
  std::uint64_t corpus_seed = 42;
  int corpus_count = 10;
  std::string corpus_out = "corpus";
  corpus_cmd->add_option("--seed", corpus_seed, "generation seed");
  corpus_cmd->add_option("--count", corpus_count, "number of rules");
  corpus_cmd->add_option("--out", corpus_out, "output directory")->required();

  // mutate
  auto* mutate_cmd = app.add_subcommand("mutate", "apply all mutation operators");
  std::string mutate_rules, mutate_out;
  mutate_cmd->add_option("--rules", mutate_rules, "rule registry")->required();
  mutate_cmd->add_option("--out", mutate_out, "mutant registry output")->required();

  // generate
  auto* gen_cmd = app.add_subcommand("generate", "generate tests with a provider");
  std::string gen_rules, gen_mutants, gen_schema, gen_provider = "mock";
  std::string gen_scenario, gen_out;
  GenerateOptions gen_options;
  gen_cmd->add_option("--rules", gen_rules, "rule registry")->required();
  gen_cmd->add_option("--mutants", gen_mutants, "mutant registry to include");
  gen_cmd->add_option("--schema", gen_schema, "schema file")->required();
  gen_cmd->add_option("--provider", gen_provider, "mock or http");
  gen_cmd->add_option("--scenario", gen_scenario, "mock scenario file");
  gen_cmd->add_option("--reps", gen_options.reps, "repetitions per rule");
  gen_cmd->add_option("--temperature", gen_options.temperature, "sampling temperature");
  gen_cmd->add_option("--seed", gen_options.seed, "run seed");
  gen_cmd->add_option("--parallel", gen_options.parallelism, "request parallelism");
  gen_cmd->add_flag("--combined", gen_options.combined_prompt,
                    "join system and user prompt parts");
  gen_cmd->add_option("--out", gen_out, "generation records output")->required();

  // diff
  auto* diff_cmd = app.add_subcommand("diff", "differential execution of generated tests");
  std::string diff_tests, diff_rules, diff_schema, diff_template, diff_faults;
  std::string diff_service, diff_out;
  bool diff_embedded = false;
  diff_cmd->add_option("--tests", diff_tests, "generation records")->required();
  diff_cmd->add_option("--rules", diff_rules, "rule registry")->required();
  diff_cmd->add_option("--schema", diff_schema, "schema file")->required();
  diff_cmd->add_option("--template", diff_template, "baseline template")->required();
  diff_cmd->add_option("--faults", diff_faults, "service fault config");
  diff_cmd->add_option("--service", diff_service, "service base URL");
  diff_cmd->add_flag("--serve-embedded", diff_embedded,
                     "run the simulated service in-process");
  diff_cmd->add_option("--out", diff_out, "output directory")->required();

  // metrics
  auto* metrics_cmd = app.add_subcommand("metrics", "completion/success/robustness metrics");
  std::string met_generations, met_rules, met_mutants, met_schema, met_diff, met_out;
  metrics_cmd->add_option("--generations", met_generations, "generation records")
      ->required();
  metrics_cmd->add_option("--rules", met_rules, "rule registry")->required();
  metrics_cmd->add_option("--mutant-map", met_mutants,
                          "mutant registry (robustness source map)");
  metrics_cmd->add_option("--schema", met_schema, "schema file")->required();
  metrics_cmd->add_option("--diff", met_diff,
                          "diff records (accepted for compatibility; metrics "
                          "recompute reference outcomes directly)");
  metrics_cmd->add_option("--out", met_out, "metrics CSV output")->required();

  // stats
  auto* stats_cmd = app.add_subcommand("stats", "nonparametric group comparisons");
  std::string stats_metrics, stats_group = "provider", stats_metric = "SI_Pass";
  std::string stats_out;
  double stats_alpha = 0.01;
  bool stats_lower = false;
  stats_cmd->add_option("--metrics", stats_metrics, "metrics CSV")->required();
  stats_cmd->add_option("--group-by", stats_group, "grouping column (provider)");
  stats_cmd->add_option("--metric", stats_metric, "metric name, e.g. SI_pass");
  stats_cmd->add_option("--alpha", stats_alpha, "significance level");
  stats_cmd->add_flag("--lower-is-better", stats_lower,
                      "treat smaller observations as better");
  stats_cmd->add_option("--out", stats_out, "comparison CSV output")->required();

  // report
  auto* report_cmd = app.add_subcommand("report", "summarize a run directory");
  std::string report_dir;
  report_cmd->add_option("--dir", report_dir, "run directory")->required();

  // serve
  auto* serve_cmd = app.add_subcommand("serve", "run the simulated rule service");
  std::string serve_rules, serve_schema, serve_faults, serve_host = "127.0.0.1";
  int serve_port = 8080;
  serve_cmd->add_option("--rules", serve_rules, "rule registry")->required();
  serve_cmd->add_option("--schema", serve_schema, "schema file")->required();
  serve_cmd->add_option("--faults", serve_faults, "fault config");
  serve_cmd->add_option("--host", serve_host, "bind address");
  serve_cmd->add_option("--port", serve_port, "port");

  // run
  auto* run_cmd = app.add_subcommand("run", "run the full pipeline");
  std::string run_out, run_rules, run_schema, run_template, run_faults;
  std::string run_provider, run_scenario, run_service, run_stages, run_engine;
  std::string run_record;
  std::uint64_t run_seed = 0;
  bool run_seed_set = false, run_embedded = false;
  int run_reps = 0, run_corpus_count = 0, run_parallel = 0;
  run_cmd->add_option("--out", run_out, "run directory");
  run_cmd->add_option("--rules", run_rules, "rule registry (skip corpus generation)");
  run_cmd->add_option("--schema", run_schema, "schema file");
  run_cmd->add_option("--template", run_template, "baseline template");
  run_cmd->add_option("--faults", run_faults, "service fault config");
  run_cmd->add_option("--provider", run_provider, "mock or http");
  run_cmd->add_option("--scenario", run_scenario, "mock scenario file");
  run_cmd->add_option("--service", run_service, "external service URL");
  run_cmd->add_flag("--serve-embedded", run_embedded,
                    "run the simulated service in-process (default)");
  run_cmd->add_option("--reps", run_reps, "repetitions per rule");
  run_cmd->add_option("--corpus-count", run_corpus_count, "synthetic corpus size");
  run_cmd->add_option("--parallel", run_parallel, "request parallelism");
  run_cmd
      ->add_option("--seed", [&](const CLI::results_t& values) {
        run_seed = std::stoull(values[0]);
        run_seed_set = true;
        return true;
      }, "run seed")
      ->expected(1);
  run_cmd->add_option("--stages", run_stages, "comma-separated stage subset");
  run_cmd->add_option("--engine", run_engine,
                      "debug mode: evaluate --record with the named engine (ref)");
  run_cmd->add_option("--record", run_record, "record file for --engine");

  try {
    app.parse(argc, argv);

    if (*corpus_cmd) return cmd_corpus(corpus_seed, corpus_count, corpus_out);
    if (*mutate_cmd) return cmd_mutate(mutate_rules, mutate_out);
    if (*gen_cmd)
      return cmd_generate(gen_rules, gen_mutants, gen_schema, gen_provider,
                          gen_scenario, gen_options, gen_out);
    if (*diff_cmd)
      return cmd_diff(diff_tests, diff_rules, diff_schema, diff_template,
                      diff_faults, diff_service, diff_embedded, diff_out);
    if (*metrics_cmd)
      return cmd_metrics(met_generations, met_rules, met_mutants, met_schema,
                         met_out);
    if (*stats_cmd)
      return cmd_stats(stats_metrics, stats_group, stats_metric, stats_alpha,
                       stats_lower, stats_out);
    if (*report_cmd) return cmd_report(report_dir);
    if (*serve_cmd)
      return cmd_serve(serve_rules, serve_schema, serve_faults, serve_host,
                       serve_port);
    if (*run_cmd) {
      if (!run_engine.empty()) {
        if (run_engine != "ref")
          throw ConfigError("unknown engine '" + run_engine + "'");
        if (run_rules.empty() || run_schema.empty() || run_record.empty())
          throw ConfigError("--engine ref requires --rules, --schema, --record");
        return cmd_run_ref_engine(run_rules, run_schema, run_record);
      }

      RunConfig config;
      if (!config_path.empty())
        config = RunConfig::from_json(load_json_file(config_path));
      if (!run_out.empty()) config.out_dir = run_out;
      if (!run_rules.empty()) config.rules_path = run_rules;
      if (!run_schema.empty()) config.schema_path = run_schema;
      if (!run_template.empty()) config.template_path = run_template;
      if (!run_faults.empty()) config.faults_path = run_faults;
      if (!run_provider.empty()) config.provider = run_provider;
      if (!run_scenario.empty()) config.scenario_path = run_scenario;
      if (!run_service.empty()) config.service_url = run_service;
      if (run_embedded) config.service_url.clear();
      if (run_reps > 0) config.reps = run_reps;
      if (run_corpus_count > 0) config.corpus_count = run_corpus_count;
      if (run_parallel > 0) config.parallelism = run_parallel;
      if (run_seed_set) config.seed = run_seed;
      if (!run_stages.empty()) {
        config.stages.clear();
        std::stringstream ss(run_stages);
        std::string stage;
        while (std::getline(ss, stage, ',')) config.stages.push_back(stage);
      }
      config.verbose = verbose;
      run_pipeline(config);
      std::cout << "run complete: " << config.out_dir << "\n";
      return kExitOk;
    }
    return kExitConfig;
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const StageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitStage;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
}
