#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>

namespace rulediff {

// Calendar date, proleptic Gregorian, no time zone.
struct Date {
  int year = 1970;
  int month = 1;  // 1..12
  int day = 1;    // 1..days_in_month

  bool operator==(const Date&) const = default;
  auto operator<=>(const Date&) const = default;
};

bool is_leap_year(int year);
int days_in_month(int year, int month);
bool is_valid_date(const Date& d);

// "YYYY-MM-DD". Returns nullopt for anything else (wrong shape or not a
// real calendar date).
std::optional<Date> parse_date(const std::string& text);
std::string to_string(const Date& d);

// Shifts with day-of-month clamping: Jan 31 + 1 month = Feb 28/29,
// Feb 29 +/- 1 year = Feb 28.
Date add_days(const Date& d, int delta);
Date add_months(const Date& d, int delta);
Date add_years(const Date& d, int delta);

struct Null {
  bool operator==(const Null&) const = default;
};

// Runtime value of a rule variable or literal.
using Value = std::variant<Null, std::int64_t, double, std::string, Date>;

inline bool is_null(const Value& v) { return std::holds_alternative<Null>(v); }

enum class ValueType { Text, Integer, Decimal, Date };

std::string to_string(ValueType t);
std::optional<ValueType> parse_value_type(const std::string& text);

// Declared type of a value; Null has no type.
std::optional<ValueType> type_of(const Value& v);

// Source-literal form: 'abc', 42, 1.5, date('2020-01-31'), null.
std::string to_literal(const Value& v);

// Declared variable types; every variable referenced by a registered rule
// must appear here.
using Schema = std::map<std::string, ValueType>;

// Flat variable assignment. Absent variables read as Null.
using Record = std::map<std::string, Value>;

// Integer and Decimal are mutually comparable; otherwise types must match.
bool types_comparable(ValueType a, ValueType b);

// Three-way comparison of two non-null values. Returns nullopt when the
// runtime types are not comparable (e.g. Text vs Integer).
std::optional<int> compare_values(const Value& a, const Value& b);

}  // namespace rulediff
