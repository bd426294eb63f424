#include "wextractor/json_io.hpp"

#include <cmath>
#include <stdexcept>

namespace wextractor {
namespace {

nlohmann::json money_json(Money m) { return static_cast<double>(m.cents()) / 100.0; }

Money money_from(const nlohmann::json& j) {
  if (j.is_string()) return Money::from_decimal(j.get<std::string>());
  return Money::from_cents(std::llround(j.get<double>() * 100.0));
}

}  // namespace

nlohmann::json price_to_json(const PriceValue& v) {
  nlohmann::json j{{"amount", money_json(v.amount)}, {"currency", v.currency_code}};
  if (v.range) j["range"] = {{"min", money_json(v.range->first)}, {"max", money_json(v.range->second)}};
  return j;
}

PriceValue price_from_json(const nlohmann::json& j) {
  std::string currency = j.at("currency").get<std::string>();
  if (j.contains("range") && !j["range"].is_null()) {
    return PriceValue::between(money_from(j["range"].at("min")), money_from(j["range"].at("max")), currency);
  }
  return PriceValue::single(money_from(j.at("amount")), currency);
}

nlohmann::json pattern_to_json(const PointingPattern& pp) {
  return {{"expression", pp.expression},
          {"currency", pp.currency_code},
          {"created_at", format_iso8601(pp.created_at)},
          {"source_url", pp.source_url}};
}

PointingPattern pattern_from_json(const nlohmann::json& j) {
  PointingPattern pp;
  pp.expression = j.at("expression").get<std::string>();
  pp.currency_code = j.value("currency", "");
  pp.created_at = parse_iso8601(j.at("created_at").get<std::string>());
  pp.source_url = j.value("source_url", "");
  return pp;
}

nlohmann::json outcome_to_json(const ExtractionOutcome& o) {
  nlohmann::json j{{"code", std::string(to_string(o.code))}, {"from_scratch", o.from_scratch}};
  if (o.value) j["value"] = price_to_json(*o.value);
  if (!o.candidates.empty()) {
    j["candidates"] = nlohmann::json::array();
    for (const auto& c : o.candidates) j["candidates"].push_back(price_to_json(c));
  }
  if (o.used_pattern) j["used_pattern"] = pattern_to_json(*o.used_pattern);
  if (o.new_pattern) j["new_pattern"] = pattern_to_json(*o.new_pattern);
  return j;
}

ExtractionOutcome outcome_from_json(const nlohmann::json& j) {
  ExtractionOutcome o;
  auto code = outcome_code_from_string(j.at("code").get<std::string>());
  if (!code) throw std::invalid_argument("unknown outcome code " + j.at("code").dump());
  o.code = *code;
  o.from_scratch = j.value("from_scratch", false);
  if (j.contains("value")) o.value = price_from_json(j["value"]);
  if (j.contains("candidates")) {
    for (const auto& c : j["candidates"]) o.candidates.push_back(price_from_json(c));
  }
  if (j.contains("used_pattern")) o.used_pattern = pattern_from_json(j["used_pattern"]);
  if (j.contains("new_pattern")) o.new_pattern = pattern_from_json(j["new_pattern"]);
  return o;
}

}  // namespace wextractor
