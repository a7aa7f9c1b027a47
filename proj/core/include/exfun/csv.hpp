#pragma once

#include <cstdio>
#include <string>

namespace exfun {

/// Formats a double with 17 significant digits (lossless round trip).
inline std::string csv_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace exfun
