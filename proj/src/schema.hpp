#pragma once

#include <map>
#include <string>

#include "json.hpp"

namespace asw::schema {

// Request schemas keyed by command, generated from schemas/*.json at build time.
const std::map<std::string, std::string>& embedded();

// Checks `doc` against the subset of JSON Schema the request schemas use:
// type, enum, required, properties, additionalProperties, items, minItems,
// maxItems, minimum, maximum and local $ref. Returns "" when valid, else the
// first violation with its JSON pointer.
std::string validate(const nlohmann::json& schema, const nlohmann::json& doc);

}  // namespace asw::schema
