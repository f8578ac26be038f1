#pragma once

#include <charconv>
#include <cmath>
#include <string>

namespace mexp {

/// Shortest round-trip decimal form of v.
inline std::string num(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, end);
}

/// Fixed-precision form, for human-readable tables.
inline std::string fixed(double v, int digits) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, digits);
    return std::string(buf, end);
}

}  // namespace mexp
