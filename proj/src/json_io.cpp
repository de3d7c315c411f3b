#include "rankone/json_io.hpp"

#include "rankone/errors.hpp"

namespace rankone {

Json scalar_to_json(const Scalar& v) { return to_string(v); }

Scalar scalar_from_json(const Json& j) {
  if (!j.is_string()) throw ValidationError("rational must be a \"p/q\" string");
  return parse_rational(j.get<std::string>());
}

Json interval_set_to_json(const IntervalSet& s) {
  Json arr = Json::array();
  for (const auto& iv : s.intervals()) arr.push_back(Json::array({to_string(iv.lo), to_string(iv.hi)}));
  return arr;
}

IntervalSet interval_set_from_json(const Json& j) {
  if (!j.is_array()) throw ValidationError("interval set must be a JSON array");
  std::vector<Interval> ivs;
  for (const auto& pair : j) {
    if (!pair.is_array() || pair.size() != 2) throw ValidationError("interval must be a [lo, hi] pair");
    ivs.push_back({scalar_from_json(pair[0]), scalar_from_json(pair[1])});
  }
  return IntervalSet::from_canonical(std::move(ivs));
}

Json certified_to_json(const CertifiedValue& v) {
  return Json{{"lo", to_string(v.lo)}, {"hi", to_string(v.hi)}};
}

std::string serialize_interval_set(const IntervalSet& s) { return interval_set_to_json(s).dump(); }

IntervalSet parse_interval_set(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string("invalid interval set JSON: ") + e.what());
  }
  return interval_set_from_json(j);
}

}  // namespace rankone
