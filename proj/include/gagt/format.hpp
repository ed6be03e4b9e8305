#pragma once

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <string>
#include <string_view>

namespace gagt {

// Shortest decimal string that parses back to the same double.
// Integral values print without a decimal point ("7772", not "7772.0"),
// which keeps OR-library round-trips byte-stable.
inline std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    for (int precision = 15; precision <= 17; ++precision) {
        int len = std::snprintf(buf, sizeof(buf), "%.*g", precision, v);
        if (std::strtod(buf, nullptr) == v) return std::string(buf, static_cast<std::size_t>(len));
    }
    return buf; // %.17g always round-trips
}

// Whole-token double parse; rejects trailing junk ("1.5x" is not a number).
inline std::optional<double> parse_double(std::string_view token) {
    if (token.empty()) return std::nullopt;
    if (token == "nan") return std::nan("");
    if (token == "inf") return HUGE_VAL;
    if (token == "-inf") return -HUGE_VAL;
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size()) return std::nullopt;
    return value;
}

} // namespace gagt
