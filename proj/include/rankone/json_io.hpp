#pragma once

#include <json.hpp>
#include <string>

#include "rankone/certified.hpp"
#include "rankone/interval_set.hpp"

namespace rankone {

using Json = nlohmann::ordered_json;

Json scalar_to_json(const Scalar& v);
Scalar scalar_from_json(const Json& j);

/// [["a/b","c/d"], ...] in canonical order.
Json interval_set_to_json(const IntervalSet& s);
/// Accepts only canonical input; throws ValidationError otherwise.
IntervalSet interval_set_from_json(const Json& j);

Json certified_to_json(const CertifiedValue& v);

/// Compact single-line text form of interval_set_to_json.
std::string serialize_interval_set(const IntervalSet& s);
IntervalSet parse_interval_set(const std::string& text);

}  // namespace rankone
