#pragma once

#include <charconv>
#include <string>

namespace weld {

// Shortest decimal representation that round-trips to the same double.
inline std::string csv_double(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

}  // namespace weld
