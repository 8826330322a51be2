#pragma once

#include <cmath>
#include <cstdio>
#include <string>

namespace spikelens {

/// Formats with 6 significant digits, the convention for all CSV output.
inline std::string fmt_g6(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

/// Formats a threshold: one decimal digit when the value is a clean tenth
/// (the grid default), general form otherwise.
inline std::string fmt_threshold(double v) {
    const double tenths = v * 10.0;
    if (std::abs(tenths - std::round(tenths)) < 1e-9) {
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.1f", v);
        return buf;
    }
    return fmt_g6(v);
}

}  // namespace spikelens
