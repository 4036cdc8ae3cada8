#pragma once

#include <string>
#include <vector>

#include "voipstat/app/export.hpp"

namespace voipstat::app {

/// Checks `doc` against a JSON Schema using the subset the shipped schemas
/// need: type, anyOf, enum, const, required, properties, additionalProperties
/// (boolean), items, minItems, minimum, maximum, and local "#/definitions"
/// references. Returns one message per violation, each prefixed with a JSON
/// pointer to the offending value.
std::vector<std::string> validate_schema(const Json& doc, const Json& schema);

const Json& session_report_schema();
const Json& fit_report_schema();
const Json& scenario_schema();

}  // namespace voipstat::app
