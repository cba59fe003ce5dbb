#pragma once

// Strict JSON helpers shared by the serialisers and the CLI config parser.

#include "swimmer/dynamics.hpp"

#include <json.hpp>

#include <initializer_list>
#include <string>

namespace swimmer {

// Throws Error(Validation) naming the first key not in `allowed`.
void reject_unknown_keys(const nlohmann::json& j, std::initializer_list<const char*> allowed,
                         const std::string& context);

double require_number(const nlohmann::json& j, const char* key, const std::string& context);
double number_or(const nlohmann::json& j, const char* key, double fallback, const std::string& context);
int int_or(const nlohmann::json& j, const char* key, int fallback, const std::string& context);

void to_json(nlohmann::json& j, const DragModel& drag);
void from_json(const nlohmann::json& j, DragModel& drag);

// Rounds to 12 significant digits so reruns serialise identically across
// platforms with slightly different libm results.
double rounded(double v, int digits = 12);

}  // namespace swimmer
