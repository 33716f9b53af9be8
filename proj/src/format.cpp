#include "format.hpp"

#include <charconv>
#include <cstdlib>

namespace eadam {

std::string format_double(double value) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

std::string format_fixed(double value, int precision) {
    char buf[80];
    auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::fixed, precision);
    return std::string(buf, res.ptr);
}

std::string format_general(double value, int precision) {
    char buf[80];
    auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, precision);
    return std::string(buf, res.ptr);
}

std::optional<double> parse_double(const std::string& text) {
    if (text.empty()) return std::nullopt;
    double value = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    auto res = std::from_chars(first, last, value);
    if (res.ec != std::errc() || res.ptr != last) return std::nullopt;
    return value;
}

std::optional<long long> parse_int(const std::string& text) {
    if (text.empty()) return std::nullopt;
    long long value = 0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    auto res = std::from_chars(first, last, value);
    if (res.ec != std::errc() || res.ptr != last) return std::nullopt;
    return value;
}

}  // namespace eadam
