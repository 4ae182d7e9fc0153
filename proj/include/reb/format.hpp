#pragma once

#include <array>
#include <charconv>
#include <string>
#include <string_view>
#include <system_error>

namespace reb {

/// Shortest decimal form that parses back to the same double (at most 17
/// significant digits).
inline std::string format_double(double value) {
    std::array<char, 32> buf{};
    const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    if (ec != std::errc{}) return "nan";
    return std::string(buf.data(), end);
}

/// Strict full-token parse; returns false on trailing garbage or overflow.
inline bool parse_double(std::string_view text, double& out) {
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    const auto* first = text.data();
    const auto* last = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc{} && ptr == last && !text.empty();
}

template <class Int>
bool parse_int(std::string_view text, Int& out) {
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    const auto* last = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), last, out);
    return ec == std::errc{} && ptr == last && !text.empty();
}

}  // namespace reb
