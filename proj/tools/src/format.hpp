#pragma once

#include <cstdio>
#include <limits>
#include <string>

#include "bolza/linalg.hpp"

namespace bolza::cli {

/// Round-trippable decimal: %.17g, with inf / -inf / nan spelled out.
inline std::string num(double v) {
    if (v != v) return "nan";
    if (v == std::numeric_limits<double>::infinity()) return "inf";
    if (v == -std::numeric_limits<double>::infinity()) return "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string joined(const Vector& v, char sep = ',') {
    std::string out;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (i > 0) out += sep;
        out += num(v(i));
    }
    return out;
}

/// "x0,x1,..." header cells.
inline std::string columns(const std::string& prefix, int count) {
    std::string out;
    for (int i = 0; i < count; ++i) {
        if (i > 0) out += ',';
        out += prefix + std::to_string(i);
    }
    return out;
}

}  // namespace bolza::cli
