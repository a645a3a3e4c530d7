#pragma once

#include <string>

#include "json.hpp"
#include "levy/measure.hpp"

namespace levy {

inline constexpr const char* kTripletSchema = "levy-triplet/1";

// Lossless JSON form: doubles print as shortest round-trip decimals, keys are
// emitted in sorted order, so equal triplets serialize to identical bytes.
nlohmann::json triplet_to_json(const LevyTriplet& t);

// Strict parse: schema tag must match, unknown keys are rejected. Structural
// problems throw std::invalid_argument; semantic checks stay with
// validate_triplet so callers can report violation lists.
LevyTriplet triplet_from_json(const nlohmann::json& j);

std::string triplet_to_string(const LevyTriplet& t, int indent = 2);
LevyTriplet triplet_from_string(const std::string& text);

}  // namespace levy
