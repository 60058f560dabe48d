#include "dhs/core.hpp"

#include <charconv>
#include <cmath>

namespace dhs
{
    std::string format_double(double value)
    {
        if (std::isnan(value))
            return "nan";
        if (std::isinf(value))
            return value > 0 ? "inf" : "-inf";
        char buf[64];
        const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
        return std::string(buf, res.ptr);
    }
}
