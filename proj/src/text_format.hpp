#pragma once

#include <cstdio>
#include <string>

namespace platoonsim::detail {

/// Fixed 9-significant-digit formatting shared by the CSV writer and the
/// summary reports, so outputs are byte-identical across platforms.
inline std::string format_g9(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.9g", value);
    return buffer;
}

}  // namespace platoonsim::detail
