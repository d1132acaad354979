#include "rulediff/metrics.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "rulediff/mutation.hpp"
#include "rulediff/refengine.hpp"

namespace rulediff {

double completion_rate(int em, int t_expected) {
  if (t_expected < 1) throw ConfigError("T_expected must be at least 1");
  return static_cast<double>(em) / static_cast<double>(t_expected);
}

double success_index(int observed, int true_count, int t_expected) {
  if (t_expected < 1) throw ConfigError("T_expected must be at least 1");
  double t = static_cast<double>(t_expected);
  double d_observed = t - static_cast<double>(observed);
  double d_true = t - static_cast<double>(true_count);
  double distance = std::sqrt(d_observed * d_observed + d_true * d_true);
  double max_distance = t * std::sqrt(2.0);
  return (1.0 - distance / max_distance) * 100.0;
}

double robustness_index(double si_original,
                        const std::vector<double>& si_mutated) {
  if (si_mutated.empty())
    throw ConfigError("robustness index needs at least one mutated SI");
  double sum = 0.0;
  for (double si : si_mutated) sum += std::abs(si_original - si);
  return 1.0 - sum / static_cast<double>(si_mutated.size());
}

std::vector<GenerationTally> tally_generations(
    const std::vector<GenerationRecord>& records,
    const std::vector<Rule>& registry, const Schema& schema) {
  std::map<std::string, const Rule*> by_key;
  for (const auto& rule : registry) by_key[rule.key()] = &rule;

  // (provider, rule_key, type) -> tally, in deterministic order
  std::map<std::tuple<std::string, std::string, int>, GenerationTally> tallies;
  for (const auto& rec : records) {
    std::string key = rec.rule_id + "/" + std::to_string(rec.rule_version);
    const Rule* rule = nullptr;
    if (auto it = by_key.find(key); it != by_key.end()) rule = it->second;
    for (auto type : {TriState::Pass, TriState::Fail, TriState::NotApplied}) {
      auto& tally = tallies[{rec.provider, key, static_cast<int>(type)}];
      if (tally.t_expected == 0) {
        tally.provider = rec.provider;
        tally.rule_key = key;
        tally.type = type;
      }
      ++tally.t_expected;
      if (!rec.exact_match()) continue;
      ++tally.em;
      ++tally.observed;
      if (rule) {
        Record test = record_from_json(rec.tests->case_for(type), schema, true);
        RefOutcome outcome = ref_validate(*rule, test);
        if (!outcome.is_error() && outcome.result() == type) ++tally.true_count;
      }
    }
  }

  std::vector<GenerationTally> out;
  out.reserve(tallies.size());
  for (auto& [_, tally] : tallies) out.push_back(std::move(tally));
  return out;
}

std::vector<MetricsRow> compute_metrics(const std::vector<GenerationTally>& tallies) {
  auto source_key = [](const std::string& rule_key) {
    auto slash = rule_key.rfind('/');
    std::string id = rule_key.substr(0, slash);
    return mutant_source_id(id) + rule_key.substr(slash);
  };
  auto is_mutant = [](const std::string& rule_key) {
    return rule_key.find('#') != std::string::npos;
  };

  // mutated SI values per (provider, source rule, type), fractional scale
  std::map<std::tuple<std::string, std::string, int>, std::vector<double>> mutated;
  for (const auto& tally : tallies) {
    if (!is_mutant(tally.rule_key)) continue;
    double si = success_index(tally.observed, tally.true_count, tally.t_expected);
    mutated[{tally.provider, source_key(tally.rule_key), static_cast<int>(tally.type)}]
        .push_back(si / 100.0);
  }

  std::vector<MetricsRow> rows;
  for (const auto& tally : tallies) {
    if (is_mutant(tally.rule_key)) continue;
    MetricsRow row;
    row.provider = tally.provider;
    row.rule_key = tally.rule_key;
    row.type = tally.type;
    row.cr = completion_rate(tally.em, tally.t_expected);
    row.si = success_index(tally.observed, tally.true_count, tally.t_expected);
    auto it = mutated.find({tally.provider, tally.rule_key, static_cast<int>(tally.type)});
    if (it != mutated.end() && !it->second.empty()) {
      row.n_rt = static_cast<int>(it->second.size());
      row.ri = robustness_index(row.si / 100.0, it->second);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string metrics_to_csv(const std::vector<MetricsRow>& rows) {
  std::ostringstream out;
  out << "provider,rule,testType,CR,SI,RI,n_rt\n";
  char buf[64];
  for (const auto& row : rows) {
    out << row.provider << "," << row.rule_key << "," << to_string(row.type) << ",";
    std::snprintf(buf, sizeof(buf), "%.6f", row.cr);
    out << buf << ",";
    std::snprintf(buf, sizeof(buf), "%.6f", row.si);
    out << buf << ",";
    if (row.ri) {
      std::snprintf(buf, sizeof(buf), "%.6f", *row.ri * 100.0);
      out << buf;
    }
    out << "," << row.n_rt << "\n";
  }
  return out.str();
}

std::vector<MetricsRow> metrics_from_csv(const std::string& csv) {
  std::vector<MetricsRow> rows;
  std::istringstream in(csv);
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (header) {
      header = false;
      continue;
    }
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ls(line);
    while (std::getline(ls, field, ',')) fields.push_back(field);
    if (fields.size() < 7) fields.resize(7);
    MetricsRow row;
    row.provider = fields[0];
    row.rule_key = fields[1];
    for (auto t : {TriState::Pass, TriState::Fail, TriState::NotApplied})
      if (to_string(t) == fields[2]) row.type = t;
    row.cr = std::stod(fields[3]);
    row.si = std::stod(fields[4]);
    if (!fields[5].empty()) row.ri = std::stod(fields[5]) / 100.0;
    if (!fields[6].empty()) row.n_rt = std::stoi(fields[6]);
    rows.push_back(std::move(row));
  }
  return rows;
}

void save_metrics(const std::vector<MetricsRow>& rows, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  out << metrics_to_csv(rows);
}

const std::vector<std::string>& known_metric_names() {
  static const std::vector<std::string> kNames = {
      "CR",      "SI_Pass", "SI_Fail", "SI_NotApplied",
      "RI_Pass", "RI_Fail", "RI_NotApplied"};
  return kNames;
}

std::vector<stats::SampleGroup> metric_groups(const std::vector<MetricsRow>& rows,
                                              const std::string& metric) {
  auto lower = [](std::string s) {
    for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
  };
  std::string wanted = lower(metric);
  std::string canonical;
  for (const auto& name : known_metric_names())
    if (lower(name) == wanted) canonical = name;
  if (canonical.empty())
    throw ConfigError("unknown metric '" + metric + "'");

  TriState type = TriState::Pass;
  if (canonical.find("Fail") != std::string::npos) type = TriState::Fail;
  if (canonical.find("NotApplied") != std::string::npos) type = TriState::NotApplied;
  bool use_cr = canonical == "CR";
  bool use_ri = canonical.rfind("RI_", 0) == 0;

  std::map<std::string, std::vector<double>> by_provider;
  for (const auto& row : rows) {
    if (row.type != type) continue;
    if (use_cr) {
      by_provider[row.provider].push_back(row.cr);
    } else if (use_ri) {
      if (row.ri) by_provider[row.provider].push_back(*row.ri * 100.0);
    } else {
      by_provider[row.provider].push_back(row.si);
    }
  }
  std::vector<stats::SampleGroup> groups;
  for (auto& [label, values] : by_provider)
    if (!values.empty()) groups.push_back({label, std::move(values)});
  return groups;
}

std::vector<MetricsRow> load_metrics(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return metrics_from_csv(buffer.str());
}

}  // namespace rulediff
