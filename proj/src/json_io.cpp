#include "swimmer/json_io.hpp"

#include "swimmer/error.hpp"

#include <cmath>
#include <cstring>

namespace swimmer {

void reject_unknown_keys(const nlohmann::json& j, std::initializer_list<const char*> allowed,
                         const std::string& context) {
    if (!j.is_object()) fail_validation(context + " must be a JSON object");
    for (const auto& [key, _] : j.items()) {
        bool known = false;
        for (const char* k : allowed) known = known || key == k;
        if (!known) fail_validation("unknown key '" + key + "' in " + context);
    }
}

double require_number(const nlohmann::json& j, const char* key, const std::string& context) {
    if (!j.contains(key)) fail_validation(context + " requires '" + key + "'");
    const auto& v = j.at(key);
    if (!v.is_number()) fail_validation(context + "." + key + " must be a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) fail_validation(context + "." + key + " must be finite");
    return d;
}

double number_or(const nlohmann::json& j, const char* key, double fallback, const std::string& context) {
    return j.contains(key) ? require_number(j, key, context) : fallback;
}

int int_or(const nlohmann::json& j, const char* key, int fallback, const std::string& context) {
    if (!j.contains(key)) return fallback;
    const auto& v = j.at(key);
    if (!v.is_number_integer()) fail_validation(context + "." + key + " must be an integer");
    return v.get<int>();
}

void to_json(nlohmann::json& j, const DragModel& drag) { j = {{"xi", drag.xi}, {"eta", drag.eta}}; }

void from_json(const nlohmann::json& j, DragModel& drag) {
    reject_unknown_keys(j, {"xi", "eta"}, "drag");
    drag.xi = number_or(j, "xi", 1.0, "drag");
    drag.eta = number_or(j, "eta", 2.0, "drag");
    drag.validate();
}

double rounded(double v, int digits) {
    if (v == 0.0 || !std::isfinite(v)) return v;
    const double scale = std::pow(10.0, digits - 1 - static_cast<int>(std::floor(std::log10(std::abs(v)))));
    return std::round(v * scale) / scale;
}

}  // namespace swimmer
