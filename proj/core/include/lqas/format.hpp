#pragma once

#include <array>
#include <charconv>
#include <string>

namespace lqas {

/// Shortest decimal form that parses back to the same double.
inline std::string format_double(double value) {
    std::array<char, 32> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    if (ec != std::errc()) {
        return "nan";
    }
    return std::string(buf.data(), ptr);
}

}  // namespace lqas
