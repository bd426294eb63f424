#pragma once

#include <json.hpp>

#include "wextractor/engine.hpp"

namespace wextractor {

/// {amount, currency, range?: {min, max}}
nlohmann::json price_to_json(const PriceValue& v);
PriceValue price_from_json(const nlohmann::json& j);

/// {expression, currency, created_at, source_url}
nlohmann::json pattern_to_json(const PointingPattern& pp);
PointingPattern pattern_from_json(const nlohmann::json& j);

/// {code, value?, candidates?, from_scratch, used_pattern?, new_pattern?}
nlohmann::json outcome_to_json(const ExtractionOutcome& o);
ExtractionOutcome outcome_from_json(const nlohmann::json& j);

}  // namespace wextractor
