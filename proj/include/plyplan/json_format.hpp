#pragma once

#include <string>

#include <nlohmann/json.hpp>

namespace plyplan {

using Json = nlohmann::json;

// Byte-stable rendering: object keys sorted, two-space indentation, scalar
// arrays on one line, floating point values with 9 significant digits.
std::string canonical_dump(const Json& value);

// %.9g rendering shared by JSON, PDDL and SVG writers. -0 prints as 0.
std::string format_number(double value);

}  // namespace plyplan
