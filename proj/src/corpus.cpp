#include "rulediff/corpus.hpp"

#include <algorithm>
#include <filesystem>
#include <random>
#include <set>

#include "rulediff/eval.hpp"
#include "rulediff/parse.hpp"
#include "rulediff/typecheck.hpp"

namespace rulediff {

namespace {

// --- witness search -------------------------------------------------------

void collect_variables(const Expr& e, std::set<std::string>& out) {
  if (e.kind == ExprKind::Variable || e.kind == ExprKind::Substring)
    out.insert(e.var);
  for (const auto& c : e.children) collect_variables(c, out);
}

void collect_literals(const Expr& e, std::vector<Value>& out) {
  if (e.kind == ExprKind::Literal) out.push_back(e.lit);
  for (const auto& c : e.children) collect_literals(c, out);
}

std::int64_t max_substring_end(const Expr& e, const std::string& var) {
  std::int64_t best = 0;
  visit_preorder(e, [&](const Expr& node, const Path&) {
    if (node.kind == ExprKind::Substring && node.var == var)
      best = std::max(best, node.to);
  });
  return best;
}

bool compatible_with(const Value& v, ValueType declared) {
  auto t = type_of(v);
  return t && types_comparable(*t, declared);
}

void push_unique(std::vector<Value>& domain, Value v) {
  if (std::find(domain.begin(), domain.end(), v) == domain.end())
    domain.push_back(std::move(v));
}

}  // namespace

std::map<std::string, std::vector<Value>> witness_domains(const Rule& rule,
                                                          const Schema& schema) {
  std::set<std::string> vars;
  collect_variables(rule.expression, vars);
  std::vector<Value> literals;
  collect_literals(rule.expression, literals);

  std::map<std::string, std::vector<Value>> domains;
  for (const auto& var : vars) {
    auto it = schema.find(var);
    ValueType declared = it != schema.end() ? it->second : ValueType::Text;
    std::vector<Value> domain;
    for (const auto& lit : literals) {
      if (!compatible_with(lit, declared)) continue;
      push_unique(domain, lit);
      if (const auto* i = std::get_if<std::int64_t>(&lit)) {
        push_unique(domain, *i + 1);
        push_unique(domain, *i - 1);
      } else if (const auto* d = std::get_if<double>(&lit)) {
        push_unique(domain, *d + 1.0);
        push_unique(domain, *d - 1.0);
      } else if (const auto* dt = std::get_if<Date>(&lit)) {
        push_unique(domain, add_days(*dt, 1));
        push_unique(domain, add_days(*dt, -1));
      }
    }
    if (declared == ValueType::Text) {
      // fresh text long enough for any substring site on this variable
      auto len = std::max<std::int64_t>(4, max_substring_end(rule.expression, var));
      std::string fresh(static_cast<std::size_t>(len), 'Z');
      while (std::find(domain.begin(), domain.end(), Value{fresh}) != domain.end())
        fresh.push_back('Z');
      domain.push_back(fresh);
    }
    domain.push_back(Null{});
    domains[var] = std::move(domain);
  }
  return domains;
}

IntentWitnesses oracle_tests(const Rule& rule, const Schema& schema) {
  auto domains = witness_domains(rule, schema);
  std::vector<std::string> names;
  for (const auto& [name, _] : domains) names.push_back(name);

  IntentWitnesses found;
  std::vector<std::size_t> index(names.size(), 0);
  while (true) {
    Record record;
    for (std::size_t i = 0; i < names.size(); ++i)
      record[names[i]] = domains[names[i]][index[i]];
    try {
      switch (categorize(rule.expression, record)) {
        case TriState::Pass:
          if (!found.satisfying) found.satisfying = record;
          break;
        case TriState::Fail:
          if (!found.violating) found.violating = record;
          break;
        case TriState::NotApplied:
          if (!found.invalid) found.invalid = record;
          break;
      }
    } catch (const EvalError&) {
      // not a usable witness
    }
    if (found.complete()) return found;

    // advance the mixed-radix counter
    std::size_t pos = 0;
    while (pos < names.size()) {
      if (++index[pos] < domains[names[pos]].size()) break;
      index[pos] = 0;
      ++pos;
    }
    if (pos == names.size() || names.empty()) return found;  // exhausted
  }
}

// --- corpus generation ----------------------------------------------------

namespace {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // raw engine output is fully specified by the standard; skipping
  // std::uniform_int_distribution keeps the stream portable
  int below(int n) { return static_cast<int>(engine_() % static_cast<std::uint64_t>(n)); }
  int between(int lo, int hi) { return lo + below(hi - lo + 1); }

 private:
  std::mt19937_64 engine_;
};

Schema builtin_schema() {
  return {
      {"ds", ValueType::Integer},  // pre-aggregation variable
      {"topo", ValueType::Text},
      {"morf", ValueType::Text},
      {"basis", ValueType::Integer},
      {"age", ValueType::Integer},
      {"labCode", ValueType::Text},
      {"stage", ValueType::Text},
      {"diagnosisDate", ValueType::Date},
      {"treatmentDate", ValueType::Date},
      {"tumorSize", ValueType::Decimal},
  };
}

Record builtin_template() {
  // valid mid-range values; dates deliberately in 2021 while rule literals
  // stay in 2020
  return {
      {"ds", std::int64_t{9}},
      {"topo", std::string("C509")},
      {"morf", std::string("8140")},
      {"basis", std::int64_t{7}},
      {"age", std::int64_t{55}},
      {"labCode", std::string("LAB")},
      {"stage", std::string("II")},
      {"diagnosisDate", Date{2021, 7, 15}},
      {"treatmentDate", Date{2021, 8, 20}},
      {"tumorSize", 12.5},
  };
}

enum class Feature { Inclusion, StringPred, Substring, DateCmp };

std::string topo_code(Rng& rng) { return "C" + std::to_string(rng.between(50, 69)); }
std::string morf_code(Rng& rng) { return std::to_string(rng.between(8000, 8999)); }

Date rule_date(Rng& rng) {
  // away from month edges so +/-1 day mutants remain inside 2020
  return Date{2020, rng.between(2, 11), rng.between(5, 25)};
}

Expr make_left(const std::string& atom, Rng& rng) {
  if (atom == "ds_eq")
    return Expr::comparison(CmpOp::Eq, Expr::variable("ds"),
                            Expr::literal(std::int64_t{rng.between(1, 9)}));
  if (atom == "topo_in") {
    std::vector<Value> codes;
    int n = rng.between(2, 3);
    for (int i = 0; i < n; ++i) codes.emplace_back(topo_code(rng));
    return Expr::inclusion(IncOp::In, Expr::variable("topo"), std::move(codes));
  }
  if (atom == "startswith_topo")
    return Expr::string_pred(StrOp::StartsWith, "topo", "C5");
  if (atom == "age_gt")
    return Expr::comparison(CmpOp::Gt, Expr::variable("age"),
                            Expr::literal(std::int64_t{rng.between(30, 80)}));
  if (atom == "diagdate_ge")
    return Expr::comparison(CmpOp::Ge, Expr::variable("diagnosisDate"),
                            Expr::literal(rule_date(rng)));
  // basis_eq
  return Expr::comparison(CmpOp::Eq, Expr::variable("basis"),
                          Expr::literal(std::int64_t{rng.between(1, 9)}));
}

Expr make_right(const std::string& atom, Rng& rng) {
  if (atom == "morf_in") {
    std::vector<Value> codes;
    int n = rng.between(2, 3);
    for (int i = 0; i < n; ++i) codes.emplace_back(morf_code(rng));
    return Expr::inclusion(IncOp::In, Expr::variable("morf"), std::move(codes));
  }
  if (atom == "substring_morf")
    return Expr::comparison(
        CmpOp::Eq, Expr::substring("morf", 1, 2),
        Expr::literal(std::string("8") + std::to_string(rng.between(0, 9))));
  if (atom == "treatdate_gt")
    return Expr::comparison(CmpOp::Gt, Expr::variable("treatmentDate"),
                            Expr::literal(rule_date(rng)));
  if (atom == "endswith_lab")
    return Expr::string_pred(StrOp::EndsWith, "labCode",
                             std::string(1, static_cast<char>('A' + rng.below(6))));
  if (atom == "basis_in") {
    int base = rng.between(1, 6);
    return Expr::inclusion(IncOp::In, Expr::variable("basis"),
                           {std::int64_t{base}, std::int64_t{base + 1},
                            std::int64_t{base + 2}});
  }
  if (atom == "stage_notin")
    return Expr::inclusion(IncOp::NotIn, Expr::variable("stage"),
                           {std::string("IX"), std::string("XX")});
  // tumorsize_lt
  double bound = rng.between(10, 60) + 0.5;
  return Expr::comparison(CmpOp::Lt, Expr::variable("tumorSize"),
                          Expr::literal(bound));
}

struct AtomInfo {
  std::string name;
  std::vector<Feature> features;
  std::string variable;
};

const std::vector<AtomInfo>& left_atoms() {
  static const std::vector<AtomInfo> kAtoms = {
      {"topo_in", {Feature::Inclusion}, "topo"},
      {"startswith_topo", {Feature::StringPred}, "topo"},
      {"diagdate_ge", {Feature::DateCmp}, "diagnosisDate"},
      {"ds_eq", {}, "ds"},
      {"age_gt", {}, "age"},
      {"basis_eq", {}, "basis"},
  };
  return kAtoms;
}

const std::vector<AtomInfo>& right_atoms() {
  static const std::vector<AtomInfo> kAtoms = {
      {"substring_morf", {Feature::Substring}, "morf"},
      {"morf_in", {Feature::Inclusion}, "morf"},
      {"treatdate_gt", {Feature::DateCmp}, "treatmentDate"},
      {"endswith_lab", {Feature::StringPred}, "labCode"},
      {"basis_in", {Feature::Inclusion}, "basis"},
      {"stage_notin", {Feature::Inclusion}, "stage"},
      {"tumorsize_lt", {}, "tumorSize"},
  };
  return kAtoms;
}

int unmet_gain(const AtomInfo& atom, const std::map<Feature, int>& needs) {
  int gain = 0;
  for (auto f : atom.features) {
    auto it = needs.find(f);
    if (it != needs.end() && it->second > 0) ++gain;
  }
  return gain;
}

}  // namespace

Corpus generate_corpus(const CorpusSpec& spec) {
  Corpus corpus;
  corpus.schema = builtin_schema();
  corpus.baseline_template = builtin_template();
  if (spec.rule_count == 0) return corpus;
  if (spec.rule_count < 0)
    throw InfeasibleCorpusError("rule count must be non-negative");

  int need = spec.min_feature_rules;
  // multi-version members come in pairs, so an odd quota rounds up
  int pair_members = need + (need % 2);
  int pairs = pair_members / 2;
  if (spec.rule_count < pair_members)
    throw InfeasibleCorpusError(
        "rule count " + std::to_string(spec.rule_count) +
        " cannot satisfy the multi-version quota of " + std::to_string(need) +
        " rules");

  Rng rng(spec.seed);
  std::map<Feature, int> needs = {{Feature::Inclusion, need},
                                  {Feature::StringPred, need},
                                  {Feature::Substring, need},
                                  {Feature::DateCmp, need}};

  auto pick = [&](const std::vector<AtomInfo>& atoms, int slot,
                  const std::string& avoid_var) -> const AtomInfo& {
    const AtomInfo* best = nullptr;
    int best_gain = -1;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      // rotate the starting point for variety across slots
      const AtomInfo& a = atoms[(i + static_cast<std::size_t>(slot)) % atoms.size()];
      if (a.variable == avoid_var) continue;
      int gain = unmet_gain(a, needs);
      if (gain > best_gain) {
        best = &a;
        best_gain = gain;
      }
    }
    return *best;
  };

  int rule_number = 0;
  int emitted = 0;
  int pairs_left = pairs;
  int attempts = 0;
  while (emitted < spec.rule_count) {
    if (++attempts > spec.rule_count * 20)
      throw InfeasibleCorpusError("could not generate satisfiable rules");
    ++rule_number;
    char id[8];
    std::snprintf(id, sizeof(id), "V%02d", rule_number);

    const AtomInfo& left_info = pick(left_atoms(), emitted, "");
    const AtomInfo& right_info = pick(right_atoms(), emitted, left_info.variable);

    Expr left = make_left(left_info.name, rng);
    Expr right = make_right(right_info.name, rng);
    std::vector<Feature> extra_features;

    // every third rule gets a conjunctive condition, every fourth a
    // disjunctive consequence, so the logical operators are represented
    if (emitted % 3 == 2) {
      const AtomInfo* second = nullptr;
      for (std::size_t i = 0; i < left_atoms().size(); ++i) {
        const AtomInfo& a = left_atoms()[(i + static_cast<std::size_t>(emitted)) %
                                         left_atoms().size()];
        if (a.variable != left_info.variable && a.variable != right_info.variable) {
          second = &a;
          break;
        }
      }
      if (second) {
        left = Expr::and_of(std::move(left), make_left(second->name, rng));
        extra_features.insert(extra_features.end(), second->features.begin(),
                              second->features.end());
      }
    } else if (emitted % 4 == 3) {
      const AtomInfo* second = nullptr;
      for (std::size_t i = 0; i < right_atoms().size(); ++i) {
        const AtomInfo& a = right_atoms()[(i + static_cast<std::size_t>(emitted)) %
                                          right_atoms().size()];
        if (a.variable != left_info.variable && a.variable != right_info.variable) {
          second = &a;
          break;
        }
      }
      if (second) {
        right = Expr::or_of(std::move(right), make_right(second->name, rng));
        extra_features.insert(extra_features.end(), second->features.begin(),
                              second->features.end());
      }
    }

    Rule rule;
    rule.id = id;
    rule.version = 1;
    rule.active = true;
    rule.expression = Expr::implies(std::move(left), std::move(right));

    if (!oracle_tests(rule, corpus.schema).complete() ||
        !typecheck(rule.expression, corpus.schema).empty()) {
      --rule_number;
      continue;  // redraw with fresh literals
    }
    for (auto f : left_info.features) --needs[f];
    for (auto f : right_info.features) --needs[f];
    for (auto f : extra_features) --needs[f];
    corpus.rules.push_back(rule);
    ++emitted;

    // second version: same condition, alternative consequence
    if (pairs_left > 0 && emitted < spec.rule_count) {
      const AtomInfo& alt_info = pick(right_atoms(), emitted + 1, left_info.variable);
      Rule v2 = rule;
      v2.version = 2;
      v2.expression = Expr::implies(rule.expression.children[0],
                                    make_right(alt_info.name, rng));
      if (oracle_tests(v2, corpus.schema).complete() &&
          typecheck(v2.expression, corpus.schema).empty()) {
        for (auto f : alt_info.features) --needs[f];
        corpus.rules.push_back(v2);
        ++emitted;
        --pairs_left;
      }
    }
  }

  for (const auto& [feature, remaining] : needs) {
    if (remaining > 0) {
      const char* names[] = {"inclusion list", "string predicate", "substring",
                             "date comparison"};
      throw InfeasibleCorpusError(
          std::string("quota not satisfiable: ") +
          names[static_cast<int>(feature)] + " short by " +
          std::to_string(remaining) + " rules");
    }
  }
  if (pairs_left > 0)
    throw InfeasibleCorpusError("quota not satisfiable: multi-version pairs");
  return corpus;
}

void save_corpus(const Corpus& corpus, const std::string& dir) {
  std::filesystem::create_directories(dir);
  save_rules(corpus.rules, dir + "/rules.json");
  save_schema(corpus.schema, dir + "/schema.json");
  save_json_file(record_to_json(corpus.baseline_template), dir + "/template.json");
}

Corpus load_corpus(const std::string& dir) {
  Corpus corpus;
  corpus.rules = load_rules(dir + "/rules.json");
  corpus.schema = load_schema(dir + "/schema.json");
  corpus.baseline_template = full_record_from_json(
      load_json_file(dir + "/template.json"), corpus.schema);
  return corpus;
}

}  // namespace rulediff
