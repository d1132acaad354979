#include "rulediff/registry.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <utility>

#include "rulediff/parse.hpp"

namespace rulediff {

std::vector<Rule> rules_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw ConfigError("rule registry must be a JSON array");
  std::vector<Rule> rules;
  std::set<std::pair<std::string, int>> seen;
  for (const auto& item : j) {
    Rule r;
    r.id = item.at("id").get<std::string>();
    r.version = item.at("version").get<int>();
    r.active = item.value("active", true);
    if (r.version < 1)
      throw ConfigError("rule " + r.id + ": version must be positive");
    if (!seen.insert({r.id, r.version}).second)
      throw ConfigError("duplicate rule " + r.key());
    try {
      r.expression = parse(item.at("expression").get<std::string>());
    } catch (const ParseError& e) {
      throw ConfigError("rule " + r.key() + ": " + e.what());
    }
    rules.push_back(std::move(r));
  }
  return rules;
}

nlohmann::json rules_to_json(const std::vector<Rule>& rules) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : rules) {
    arr.push_back({{"id", r.id},
                   {"version", r.version},
                   {"active", r.active},
                   {"expression", unparse(r.expression)}});
  }
  return arr;
}

Schema schema_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("schema must be a JSON object");
  Schema schema;
  for (const auto& [name, type] : j.items()) {
    if (name.empty()) throw ConfigError("schema variable name must not be empty");
    auto t = parse_value_type(type.get<std::string>());
    if (!t)
      throw ConfigError("schema variable '" + name + "' has unknown type '" +
                        type.get<std::string>() + "'");
    schema[name] = *t;
  }
  return schema;
}

nlohmann::json schema_to_json(const Schema& schema) {
  nlohmann::json obj = nlohmann::json::object();
  for (const auto& [name, type] : schema) obj[name] = to_string(type);
  return obj;
}

nlohmann::json value_to_json(const Value& v) {
  if (std::holds_alternative<Null>(v)) return nullptr;
  if (const auto* i = std::get_if<std::int64_t>(&v)) return *i;
  if (const auto* d = std::get_if<double>(&v)) return *d;
  if (const auto* s = std::get_if<std::string>(&v)) return *s;
  return to_string(std::get<Date>(v));
}

Value value_from_json(const nlohmann::json& j, ValueType declared) {
  if (j.is_null()) return Null{};
  switch (declared) {
    case ValueType::Text:
      if (j.is_string()) return j.get<std::string>();
      return Null{};
    case ValueType::Integer: {
      if (j.is_number_integer()) return j.get<std::int64_t>();
      if (j.is_number_float()) {
        double d = j.get<double>();
        if (d == std::floor(d)) return static_cast<std::int64_t>(d);
      }
      if (j.is_string()) {
        try {
          std::size_t pos = 0;
          long long v = std::stoll(j.get<std::string>(), &pos);
          if (pos == j.get<std::string>().size()) return static_cast<std::int64_t>(v);
        } catch (...) {
        }
      }
      return Null{};
    }
    case ValueType::Decimal: {
      if (j.is_number()) return j.get<double>();
      if (j.is_string()) {
        try {
          std::size_t pos = 0;
          double v = std::stod(j.get<std::string>(), &pos);
          if (pos == j.get<std::string>().size()) return v;
        } catch (...) {
        }
      }
      return Null{};
    }
    case ValueType::Date: {
      if (j.is_string()) {
        if (auto d = parse_date(j.get<std::string>())) return *d;
      }
      return Null{};
    }
  }
  return Null{};
}

Record record_from_json(const nlohmann::json& j, const Schema& schema,
                        bool ignore_unknown) {
  if (!j.is_object()) throw ConfigError("record must be a JSON object");
  Record r;
  for (const auto& [name, value] : j.items()) {
    auto it = schema.find(name);
    if (it == schema.end()) {
      if (ignore_unknown) continue;
      throw ConfigError("unknown variable '" + name + "'");
    }
    r[name] = value_from_json(value, it->second);
  }
  return r;
}

nlohmann::json record_to_json(const Record& r) {
  nlohmann::json obj = nlohmann::json::object();
  for (const auto& [name, value] : r) obj[name] = value_to_json(value);
  return obj;
}

Record full_record_from_json(const nlohmann::json& j, const Schema& schema) {
  Record r = record_from_json(j, schema, false);
  for (const auto& [name, _] : schema) {
    if (r.find(name) == r.end())
      throw ConfigError("record is missing schema variable '" + name + "'");
  }
  return r;
}

nlohmann::json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

void save_json_file(const nlohmann::json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  out << j.dump(2) << "\n";
}

std::vector<Rule> load_rules(const std::string& path) {
  return rules_from_json(load_json_file(path));
}

void save_rules(const std::vector<Rule>& rules, const std::string& path) {
  save_json_file(rules_to_json(rules), path);
}

Schema load_schema(const std::string& path) {
  return schema_from_json(load_json_file(path));
}

void save_schema(const Schema& schema, const std::string& path) {
  save_json_file(schema_to_json(schema), path);
}

}  // namespace rulediff
