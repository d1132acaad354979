#include "rulediff/value.hpp"

#include <array>
#include <charconv>
#include <cstdio>

namespace rulediff {

bool is_leap_year(int year) {
  return (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
}

int days_in_month(int year, int month) {
  static constexpr std::array<int, 12> kDays = {31, 28, 31, 30, 31, 30,
                                                31, 31, 30, 31, 30, 31};
  if (month < 1 || month > 12) return 0;
  if (month == 2 && is_leap_year(year)) return 29;
  return kDays[static_cast<std::size_t>(month - 1)];
}

bool is_valid_date(const Date& d) {
  return d.month >= 1 && d.month <= 12 && d.day >= 1 &&
         d.day <= days_in_month(d.year, d.month);
}

std::optional<Date> parse_date(const std::string& text) {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
  auto digits = [&](int from, int to, int& out) {
    out = 0;
    for (int i = from; i < to; ++i) {
      char c = text[static_cast<std::size_t>(i)];
      if (c < '0' || c > '9') return false;
      out = out * 10 + (c - '0');
    }
    return true;
  };
  Date d;
  if (!digits(0, 4, d.year) || !digits(5, 7, d.month) || !digits(8, 10, d.day))
    return std::nullopt;
  if (!is_valid_date(d)) return std::nullopt;
  return d;
}

std::string to_string(const Date& d) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", d.year, d.month, d.day);
  return buf;
}

Date add_days(const Date& d, int delta) {
  Date r = d;
  while (delta > 0) {
    --delta;
    if (++r.day > days_in_month(r.year, r.month)) {
      r.day = 1;
      if (++r.month > 12) {
        r.month = 1;
        ++r.year;
      }
    }
  }
  while (delta < 0) {
    ++delta;
    if (--r.day < 1) {
      if (--r.month < 1) {
        r.month = 12;
        --r.year;
      }
      r.day = days_in_month(r.year, r.month);
    }
  }
  return r;
}

Date add_months(const Date& d, int delta) {
  int m0 = d.year * 12 + (d.month - 1) + delta;
  Date r;
  r.year = m0 / 12;
  r.month = m0 % 12 + 1;
  if (r.month < 1) {  // negative rounding
    r.month += 12;
    --r.year;
  }
  r.day = std::min(d.day, days_in_month(r.year, r.month));
  return r;
}

Date add_years(const Date& d, int delta) {
  Date r = d;
  r.year += delta;
  r.day = std::min(r.day, days_in_month(r.year, r.month));
  return r;
}

std::string to_string(ValueType t) {
  switch (t) {
    case ValueType::Text: return "text";
    case ValueType::Integer: return "integer";
    case ValueType::Decimal: return "decimal";
    case ValueType::Date: return "date";
  }
  return "?";
}

std::optional<ValueType> parse_value_type(const std::string& text) {
  if (text == "text") return ValueType::Text;
  if (text == "integer") return ValueType::Integer;
  if (text == "decimal") return ValueType::Decimal;
  if (text == "date") return ValueType::Date;
  return std::nullopt;
}

std::optional<ValueType> type_of(const Value& v) {
  if (std::holds_alternative<Null>(v)) return std::nullopt;
  if (std::holds_alternative<std::int64_t>(v)) return ValueType::Integer;
  if (std::holds_alternative<double>(v)) return ValueType::Decimal;
  if (std::holds_alternative<std::string>(v)) return ValueType::Text;
  return ValueType::Date;
}

static std::string quote_text(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\\' || c == '\'') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('\'');
  return out;
}

static std::string decimal_to_string(double d) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), d);
  std::string s(buf, end);
  // keep the decimal literal shape distinct from integers
  if (s.find('.') == std::string::npos && s.find('e') == std::string::npos &&
      s.find("inf") == std::string::npos && s.find("nan") == std::string::npos)
    s += ".0";
  return s;
}

std::string to_literal(const Value& v) {
  if (std::holds_alternative<Null>(v)) return "null";
  if (const auto* i = std::get_if<std::int64_t>(&v)) return std::to_string(*i);
  if (const auto* d = std::get_if<double>(&v)) return decimal_to_string(*d);
  if (const auto* s = std::get_if<std::string>(&v)) return quote_text(*s);
  return "date(" + quote_text(to_string(std::get<Date>(v))) + ")";
}

bool types_comparable(ValueType a, ValueType b) {
  auto numeric = [](ValueType t) {
    return t == ValueType::Integer || t == ValueType::Decimal;
  };
  if (numeric(a) && numeric(b)) return true;
  return a == b;
}

std::optional<int> compare_values(const Value& a, const Value& b) {
  auto ta = type_of(a);
  auto tb = type_of(b);
  if (!ta || !tb || !types_comparable(*ta, *tb)) return std::nullopt;
  auto sign = [](auto lhs, auto rhs) { return lhs < rhs ? -1 : (rhs < lhs ? 1 : 0); };
  if (*ta == ValueType::Text) return sign(std::get<std::string>(a), std::get<std::string>(b));
  if (*ta == ValueType::Date) return sign(std::get<Date>(a), std::get<Date>(b));
  auto num = [](const Value& v) {
    if (const auto* i = std::get_if<std::int64_t>(&v)) return static_cast<double>(*i);
    return std::get<double>(v);
  };
  return sign(num(a), num(b));
}

}  // namespace rulediff
