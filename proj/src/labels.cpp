#include "optbin/labels.hpp"

#include <array>
#include <charconv>
#include <cmath>

namespace optbin {

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

namespace {

// Labels only: ten significant digits hide midpoint noise like 0.16465000000000002.
std::string short_number(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    std::array<char, 64> buf{};
    const auto res =
        std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 10);
    return std::string(buf.data(), res.ptr);
}

}  // namespace

std::string cell_label(const Cell& c) {
    if (const auto* s = std::get_if<std::string>(&c)) return *s;
    if (const auto* d = std::get_if<double>(&c)) return format_number(*d);
    return {};
}

std::string interval_label(const double* lower, const double* upper) {
    std::string out = lower ? "[" + short_number(*lower) : "(-inf";
    out += ", ";
    out += upper ? short_number(*upper) : "inf";
    out += ")";
    return out;
}

}  // namespace optbin
