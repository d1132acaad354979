#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "rulediff/corpus.hpp"
#include "rulediff/difftest.hpp"
#include "rulediff/eval.hpp"
#include "rulediff/metrics.hpp"
#include "rulediff/mutation.hpp"
#include "rulediff/parse.hpp"
#include "rulediff/refengine.hpp"
#include "rulediff/registry.hpp"
#include "rulediff/stats.hpp"
#include "rulediff/testgen.hpp"
#include "rulediff/typecheck.hpp"

namespace py = pybind11;
using namespace rulediff;

namespace {

// JSON strings cross the boundary; Python callers use dicts via json.dumps.
nlohmann::json from_json_str(const std::string& s) {
  return nlohmann::json::parse(s);
}

Schema schema_from_str(const std::string& s) {
  return schema_from_json(from_json_str(s));
}

Rule make_rule(const std::string& id, int version, const std::string& expression) {
  Rule r;
  r.id = id;
  r.version = version;
  r.expression = parse(expression);
  return r;
}

Record record_from_str(const std::string& record_json, const std::string& schema_json) {
  return record_from_json(from_json_str(record_json), schema_from_str(schema_json),
                          false);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Differential-testing workbench for tri-state validation rules";

  m.def(
      "parse_rule",
      [](const std::string& text) { return unparse(parse(text)); },
      py::arg("text"),
      "Parse a rule expression and return its canonical form.");

  m.def(
      "typecheck_rule",
      [](const std::string& text, const std::string& schema_json) {
        std::vector<std::string> out;
        for (const auto& d : typecheck(parse(text), schema_from_str(schema_json)))
          out.push_back(d.message);
        return out;
      },
      py::arg("text"), py::arg("schema_json"),
      "Type diagnostics for a rule against a schema; empty means well-typed.");

  m.def(
      "evaluate_rule",
      [](const std::string& text, const std::string& record_json,
         const std::string& schema_json) {
        return evaluate(parse(text), record_from_str(record_json, schema_json));
      },
      py::arg("text"), py::arg("record_json"), py::arg("schema_json"),
      "Two-valued evaluation of a rule on a record.");

  m.def(
      "categorize_rule",
      [](const std::string& text, const std::string& record_json,
         const std::string& schema_json) {
        return to_string(
            categorize(parse(text), record_from_str(record_json, schema_json)));
      },
      py::arg("text"), py::arg("record_json"), py::arg("schema_json"),
      "Tri-state result (Pass, Fail, NotApplied) of a rule on a record.");

  m.def(
      "mutation_sites",
      [](const std::string& text, const std::string& op) {
        auto parsed_op = parse_mutation_operator(op);
        if (!parsed_op) throw py::value_error("unknown mutation operator " + op);
        std::vector<std::string> out;
        for (const auto& site : sites(parse(text), *parsed_op))
          out.push_back(to_string(site));
        return out;
      },
      py::arg("text"), py::arg("op"),
      "Applicable site paths for a mutation operator, in pre-order.");

  m.def(
      "mutate_rule",
      [](const std::string& text, const std::string& op, int site_index,
         const std::string& variant) {
        auto parsed_op = parse_mutation_operator(op);
        if (!parsed_op) throw py::value_error("unknown mutation operator " + op);
        Rule rule = make_rule("R", 1, text);
        auto locations = sites(rule.expression, *parsed_op);
        if (site_index < 0 ||
            static_cast<std::size_t>(site_index) >= locations.size())
          throw py::value_error("site index out of range");
        Mutant m = apply_mutation(rule, *parsed_op,
                                  locations[static_cast<std::size_t>(site_index)],
                                  variant);
        return unparse(m.expression);
      },
      py::arg("text"), py::arg("op"), py::arg("site_index") = 0,
      py::arg("variant") = "",
      "Apply one mutation operator at one site and return the mutated rule.");

  m.def(
      "mutate_all_rules",
      [](const std::string& registry_json) {
        auto rules = rules_from_json(from_json_str(registry_json));
        return rules_to_json(mutants_to_rules(mutate_all(rules))).dump();
      },
      py::arg("registry_json"),
      "All mutants of a rule registry, as a registry JSON string.");

  m.def(
      "oracle_tests",
      [](const std::string& text, const std::string& schema_json) {
        Rule rule = make_rule("R", 1, text);
        auto witnesses = oracle_tests(rule, schema_from_str(schema_json));
        nlohmann::json out;
        out["satisfying_case"] =
            witnesses.satisfying ? record_to_json(*witnesses.satisfying) : nullptr;
        out["violating_case"] =
            witnesses.violating ? record_to_json(*witnesses.violating) : nullptr;
        out["invalid_case"] =
            witnesses.invalid ? record_to_json(*witnesses.invalid) : nullptr;
        return out.dump();
      },
      py::arg("text"), py::arg("schema_json"),
      "Brute-force witnesses per test intent (null when unsatisfiable).");

  m.def(
      "ref_validate",
      [](const std::string& text, const std::string& record_json,
         const std::string& schema_json) {
        return to_string(ref_validate(make_rule("R", 1, text),
                                      record_from_str(record_json, schema_json)));
      },
      py::arg("text"), py::arg("record_json"), py::arg("schema_json"),
      "Reference-engine outcome, including evaluation errors.");

  m.def(
      "parse_llm_response",
      [](const std::string& text) {
        auto outcome = parse_response(text);
        if (auto* tests = std::get_if<GeneratedTestSet>(&outcome))
          return std::pair<std::string, std::string>("tests",
                                                     tests->to_json().dump());
        const auto& report = std::get<HallucinationReport>(outcome);
        return std::pair<std::string, std::string>("hallucination", report.label());
      },
      py::arg("text"),
      "Classify one completion: ('tests', json) or ('hallucination', label).");

  m.def(
      "build_prompt",
      [](const std::string& text, bool combined) {
        Prompt p = build_prompt(make_rule("R", 1, text), combined);
        if (combined) return p.combined_text();
        return p.system + "\n---\n" + p.user;
      },
      py::arg("text"), py::arg("combined") = false);

  m.def("completion_rate", &completion_rate, py::arg("em"), py::arg("t_expected"));
  m.def("success_index", &success_index, py::arg("observed"),
        py::arg("true_count"), py::arg("t_expected"));
  m.def("robustness_index", &robustness_index, py::arg("si_original"),
        py::arg("si_mutated"));

  m.def(
      "kruskal_wallis",
      [](const std::vector<std::vector<double>>& groups) {
        std::vector<stats::SampleGroup> g;
        for (std::size_t i = 0; i < groups.size(); ++i)
          g.push_back({"g" + std::to_string(i), groups[i]});
        auto result = stats::kruskal_wallis(g);
        return std::make_pair(result.h, result.p);
      },
      py::arg("groups"), "Kruskal-Wallis H and p-value for observation groups.");

  m.def(
      "vda",
      [](const std::vector<double>& a, const std::vector<double>& b) {
        auto result = stats::vda(a, b);
        return std::make_tuple(result.a12, result.scaled,
                               stats::to_string(result.magnitude));
      },
      py::arg("a"), py::arg("b"),
      "Vargha-Delaney A12, its scaled value, and the magnitude band.");

  m.attr("__version__") = "0.1.0";
}
