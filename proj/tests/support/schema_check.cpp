#include "schema_check.hpp"

#include <algorithm>
#include <fstream>
#include <regex>
#include <stdexcept>

namespace wxtest {
namespace {

bool has_type(const nlohmann::json& v, const std::string& t) {
  if (t == "object") return v.is_object();
  if (t == "array") return v.is_array();
  if (t == "string") return v.is_string();
  if (t == "number") return v.is_number();
  if (t == "integer") return v.is_number_integer() || v.is_number_unsigned();
  if (t == "boolean") return v.is_boolean();
  if (t == "null") return v.is_null();
  throw std::invalid_argument("unsupported schema type " + t);
}

void check(const nlohmann::json& root, const nlohmann::json& s, const nlohmann::json& v, const std::string& at,
           std::vector<std::string>& errs) {
  if (s.contains("$ref")) {
    const std::string ref = s["$ref"];
    const std::string prefix = "#/$defs/";
    if (ref.rfind(prefix, 0) != 0) throw std::invalid_argument("unsupported $ref " + ref);
    check(root, root["$defs"].at(ref.substr(prefix.size())), v, at, errs);
    return;
  }
  if (s.contains("oneOf")) {
    int ok = 0;
    for (const auto& alt : s["oneOf"]) {
      std::vector<std::string> sub;
      check(root, alt, v, at, sub);
      ok += sub.empty() ? 1 : 0;
    }
    if (ok != 1) errs.push_back(at + ": matches " + std::to_string(ok) + " oneOf branches");
    return;
  }
  if (s.contains("type")) {
    bool match = false;
    if (s["type"].is_array()) {
      for (const auto& t : s["type"]) match = match || has_type(v, t.get<std::string>());
    } else {
      match = has_type(v, s["type"].get<std::string>());
    }
    if (!match) {
      errs.push_back(at + ": expected type " + s["type"].dump() + ", got " + v.dump());
      return;
    }
  }
  if (s.contains("enum") && std::find(s["enum"].begin(), s["enum"].end(), v) == s["enum"].end()) {
    errs.push_back(at + ": " + v.dump() + " not in enum");
  }
  if (s.contains("pattern") && v.is_string() &&
      !std::regex_search(v.get<std::string>(), std::regex(s["pattern"].get<std::string>()))) {
    errs.push_back(at + ": " + v.dump() + " does not match pattern");
  }
  if (s.contains("exclusiveMinimum") && v.is_number() && !(v.get<double>() > s["exclusiveMinimum"].get<double>())) {
    errs.push_back(at + ": " + v.dump() + " not above minimum");
  }
  if (v.is_object()) {
    if (s.contains("required")) {
      for (const auto& k : s["required"]) {
        if (!v.contains(k.get<std::string>())) errs.push_back(at + ": missing " + k.get<std::string>());
      }
    }
    const auto props = s.value("properties", nlohmann::json::object());
    for (const auto& [k, sub] : v.items()) {
      if (props.contains(k)) {
        check(root, props[k], sub, at + "." + k, errs);
      } else if (s.contains("additionalProperties") && s["additionalProperties"] == false) {
        errs.push_back(at + ": unexpected property " + k);
      }
    }
  }
  if (v.is_array() && s.contains("items")) {
    for (std::size_t i = 0; i < v.size(); ++i) check(root, s["items"], v[i], at + "[" + std::to_string(i) + "]", errs);
  }
}

}  // namespace

std::vector<std::string> schema_errors(const nlohmann::json& schema, const std::string& def,
                                       const nlohmann::json& doc) {
  std::vector<std::string> errs;
  check(schema, schema["$defs"].at(def), doc, def, errs);
  return errs;
}

nlohmann::json load_api_schema() {
  std::ifstream in(std::string(WEXTRACTOR_SOURCE_DIR) + "/schema/api.schema.json");
  if (!in) throw std::runtime_error("api schema not found");
  return nlohmann::json::parse(in);
}

}  // namespace wxtest
