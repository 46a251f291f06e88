#pragma once

#include <cstdio>
#include <cstdlib>
#include <map>
#include <string>
#include <vector>

#include "asda/core/error.hpp"

namespace asda {

// Dynamically typed parameter value: number, string, bool or list.
// Shared by the prompt DSL and the pipeline parameter maps.
struct Value {
  enum class Kind { Number, String, Bool, List };

  Kind kind = Kind::Number;
  double num = 0.0;
  std::string str;
  bool boolean = false;
  std::vector<Value> list;

  Value() = default;
  Value(double v) : kind(Kind::Number), num(v) {}
  Value(int v) : kind(Kind::Number), num(v) {}
  Value(const char* s) : kind(Kind::String), str(s) {}
  Value(std::string s) : kind(Kind::String), str(std::move(s)) {}
  Value(bool b) : kind(Kind::Bool), boolean(b) {}
  Value(std::vector<Value> l) : kind(Kind::List), list(std::move(l)) {}

  bool is_number() const { return kind == Kind::Number; }
  bool is_string() const { return kind == Kind::String; }
  bool is_list() const { return kind == Kind::List; }
  bool is_bool() const { return kind == Kind::Bool; }

  double as_number() const {
    if (kind != Kind::Number)
      throw Error(Errc::InvalidParams, "expected a number");
    return num;
  }
  const std::string& as_string() const {
    if (kind != Kind::String)
      throw Error(Errc::InvalidParams, "expected a string");
    return str;
  }
  const std::vector<Value>& as_list() const {
    if (kind != Kind::List)
      throw Error(Errc::InvalidParams, "expected a list");
    return list;
  }

  std::vector<double> as_number_list() const {
    std::vector<double> out;
    for (const Value& v : as_list()) out.push_back(v.as_number());
    return out;
  }
  std::vector<std::string> as_string_list() const {
    std::vector<std::string> out;
    for (const Value& v : as_list()) out.push_back(v.as_string());
    return out;
  }

  bool operator==(const Value& o) const {
    if (kind != o.kind) return false;
    switch (kind) {
      case Kind::Number: return num == o.num;
      case Kind::String: return str == o.str;
      case Kind::Bool: return boolean == o.boolean;
      case Kind::List: return list == o.list;
    }
    return false;
  }
};

using ParamMap = std::map<std::string, Value>;
// Attribute values are open-ended: height, type, name, address, ...
using AttrMap = std::map<std::string, Value>;

// Shortest decimal form that parses back to the same double.
inline std::string format_number(double v) {
  char buf[40];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

inline std::string to_text(const Value& v) {
  switch (v.kind) {
    case Value::Kind::Number: return format_number(v.num);
    case Value::Kind::String: return "\"" + v.str + "\"";
    case Value::Kind::Bool: return v.boolean ? "true" : "false";
    case Value::Kind::List: {
      std::string s = "[";
      for (std::size_t i = 0; i < v.list.size(); ++i) {
        if (i) s += ", ";
        s += to_text(v.list[i]);
      }
      return s + "]";
    }
  }
  return "";
}

// Distances accept an optional unit suffix; bare numbers are meters.
inline double parse_distance_m(const std::string& s) {
  std::size_t pos = 0;
  double v;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw Error(Errc::InvalidParams, "not a distance: '" + s + "'");
  }
  std::string unit = s.substr(pos);
  while (!unit.empty() && unit.front() == ' ') unit.erase(unit.begin());
  if (unit.empty() || unit == "m") return v;
  if (unit == "km") return v * 1000.0;
  if (unit == "mi") return v * 1609.344;
  if (unit == "ft") return v * 0.3048;
  throw Error(Errc::InvalidParams, "unknown distance unit '" + unit + "'");
}

// Numeric parameter that may arrive as a number or a quoted "200m"/"12mi" string.
inline double distance_value_m(const Value& v) {
  if (v.is_number()) return v.num;
  return parse_distance_m(v.as_string());
}

}  // namespace asda
