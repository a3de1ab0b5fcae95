#include "schema.hpp"

#include <cmath>

namespace asw::schema {

namespace {

using nlohmann::json;

bool has_type(const json& v, const std::string& t) {
  if (t == "object") return v.is_object();
  if (t == "array") return v.is_array();
  if (t == "string") return v.is_string();
  if (t == "boolean") return v.is_boolean();
  if (t == "null") return v.is_null();
  if (t == "number") return v.is_number();
  if (t == "integer") {
    if (v.is_number_integer()) return true;
    if (v.is_number_float()) {
      double d = v.get<double>();
      return std::isfinite(d) && d == std::floor(d);
    }
  }
  return false;
}

class Validator {
 public:
  explicit Validator(const json& root) : root_(root) {}

  std::string check(const json& s, const json& v, const std::string& path) const {
    if (s.contains("$ref")) {
      const auto ref = s["$ref"].get<std::string>();
      if (ref.rfind("#/", 0) != 0) return path + ": unsupported $ref " + ref;
      return check(root_.at(json::json_pointer(ref.substr(1))), v, path);
    }
    if (s.contains("type")) {
      bool ok = false;
      if (s["type"].is_array()) {
        for (const auto& t : s["type"]) ok = ok || has_type(v, t.get<std::string>());
      } else {
        ok = has_type(v, s["type"].get<std::string>());
      }
      if (!ok) return where(path) + ": expected type " + s["type"].dump();
    }
    if (s.contains("enum")) {
      bool ok = false;
      for (const auto& e : s["enum"]) ok = ok || e == v;
      if (!ok) return where(path) + ": value " + v.dump() + " not in " + s["enum"].dump();
    }
    if (v.is_number()) {
      double d = v.get<double>();
      if (s.contains("minimum") && d < s["minimum"].get<double>())
        return where(path) + ": below minimum " + s["minimum"].dump();
      if (s.contains("maximum") && d > s["maximum"].get<double>())
        return where(path) + ": above maximum " + s["maximum"].dump();
    }
    if (v.is_array()) {
      if (s.contains("minItems") && v.size() < s["minItems"].get<size_t>())
        return where(path) + ": fewer than " + s["minItems"].dump() + " items";
      if (s.contains("maxItems") && v.size() > s["maxItems"].get<size_t>())
        return where(path) + ": more than " + s["maxItems"].dump() + " items";
      if (s.contains("items"))
        for (size_t i = 0; i < v.size(); ++i) {
          auto e = check(s["items"], v[i], path + "/" + std::to_string(i));
          if (!e.empty()) return e;
        }
    }
    if (v.is_object()) {
      if (s.contains("required"))
        for (const auto& r : s["required"])
          if (!v.contains(r.get<std::string>())) return where(path) + ": missing required key " + r.dump();
      const json empty = json::object();
      const json& props = s.contains("properties") ? s["properties"] : empty;
      for (auto it = v.begin(); it != v.end(); ++it) {
        if (props.contains(it.key())) {
          auto e = check(props[it.key()], it.value(), path + "/" + it.key());
          if (!e.empty()) return e;
        } else if (s.contains("additionalProperties") && s["additionalProperties"] == false) {
          return where(path) + ": unknown key \"" + it.key() + "\"";
        }
      }
    }
    return "";
  }

 private:
  static std::string where(const std::string& path) { return path.empty() ? "/" : path; }
  const json& root_;
};

}  // namespace

std::string validate(const nlohmann::json& schema, const nlohmann::json& doc) {
  return Validator(schema).check(schema, doc, "");
}

}  // namespace asw::schema
