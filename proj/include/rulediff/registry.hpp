#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "rulediff/ast.hpp"
#include "rulediff/value.hpp"

namespace rulediff {

// A registered validation rule. (id, version) pairs are unique within a
// registry; the same id may carry several versions.
struct Rule {
  std::string id;
  int version = 1;
  bool active = true;
  Expr expression;

  std::string key() const { return id + "/" + std::to_string(version); }
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Registry file: JSON array of {"id", "version", "active", "expression"}.
std::vector<Rule> rules_from_json(const nlohmann::json& j);
nlohmann::json rules_to_json(const std::vector<Rule>& rules);
std::vector<Rule> load_rules(const std::string& path);
void save_rules(const std::vector<Rule>& rules, const std::string& path);

// Schema file: JSON object {variableName: "text"|"integer"|"decimal"|"date"}.
Schema schema_from_json(const nlohmann::json& j);
nlohmann::json schema_to_json(const Schema& schema);
Schema load_schema(const std::string& path);
void save_schema(const Schema& schema, const std::string& path);

// Wire form of a Value: Text -> string, Integer/Decimal -> number,
// Date -> "YYYY-MM-DD" string, Null -> null.
nlohmann::json value_to_json(const Value& v);

// Schema-directed conversion of one wire value. Lenient: anything that does
// not convert to the declared type reads as Null, so both engines see the
// same assignment for the same message.
Value value_from_json(const nlohmann::json& j, ValueType declared);

// Converts a flat JSON object to a Record, restricted to schema variables.
// Unknown variables are ignored when `ignore_unknown`, otherwise rejected.
Record record_from_json(const nlohmann::json& j, const Schema& schema,
                        bool ignore_unknown = true);
nlohmann::json record_to_json(const Record& r);

// As record_from_json with ignore_unknown = false, and additionally every
// schema variable must be assigned. For baseline templates and full
// messages.
Record full_record_from_json(const nlohmann::json& j, const Schema& schema);

nlohmann::json load_json_file(const std::string& path);
void save_json_file(const nlohmann::json& j, const std::string& path);

}  // namespace rulediff
