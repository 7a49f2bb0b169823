#include "radtrim/util/numfmt.hpp"

#include <cmath>
#include <cstdio>

namespace radtrim::util {

std::string format_double(double value, int significant_digits) {
    if (!std::isfinite(value)) {
        return "null";
    }
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", significant_digits, value);
    return buf;
}

std::string format_double_exact(double value) { return format_double(value, 17); }

}  // namespace radtrim::util
