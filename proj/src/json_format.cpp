#include "plyplan/json_format.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace plyplan {

std::string format_number(double value) {
  if (!std::isfinite(value)) throw std::invalid_argument("non-finite number in output");
  if (value == 0.0) return "0";
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.9g", value);
  return buffer;
}

namespace {

bool is_scalar(const Json& v) { return !v.is_object() && !v.is_array(); }

void dump_scalar(const Json& v, std::string& out) {
  if (v.is_number_float()) {
    out += format_number(v.get<double>());
  } else {
    out += v.dump();
  }
}

void dump(const Json& v, int indent, std::string& out) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
  if (v.is_object()) {
    if (v.empty()) {
      out += "{}";
      return;
    }
    out += "{\n";
    bool first = true;
    for (auto it = v.begin(); it != v.end(); ++it) {
      if (!first) out += ",\n";
      first = false;
      out += inner;
      out += Json(it.key()).dump();
      out += ": ";
      dump(it.value(), indent + 1, out);
    }
    out += "\n" + pad + "}";
  } else if (v.is_array()) {
    if (v.empty()) {
      out += "[]";
      return;
    }
    bool flat = true;
    for (const auto& e : v) flat = flat && is_scalar(e);
    if (flat) {
      out += "[";
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ", ";
        dump_scalar(v[i], out);
      }
      out += "]";
      return;
    }
    out += "[\n";
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) out += ",\n";
      out += inner;
      dump(v[i], indent + 1, out);
    }
    out += "\n" + pad + "]";
  } else {
    dump_scalar(v, out);
  }
}

}  // namespace

std::string canonical_dump(const Json& value) {
  std::string out;
  dump(value, 0, out);
  out += "\n";
  return out;
}

}  // namespace plyplan
