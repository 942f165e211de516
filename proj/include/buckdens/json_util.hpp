#pragma once

// Serialization conventions shared by reports: rationals as "num/den"
// strings, reals rounded to 12 significant digits.

#include <cstdio>
#include <cstdlib>

#include <json.hpp>

#include "buckdens/rational.hpp"

namespace buckdens {

inline double real12(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return std::strtod(buf, nullptr);
}

inline nlohmann::json to_json(const Rational& r) { return r.to_string(); }
inline nlohmann::json real_json(double x) { return real12(x); }

} // namespace buckdens
