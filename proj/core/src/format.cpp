#include "scoreband/format.hpp"

#include <charconv>
#include <cmath>
#include <system_error>

#include "scoreband/errors.hpp"

namespace scoreband {

std::string fmt_double(double value) {
    if (std::isnan(value)) throw NonFiniteInput("cannot serialize NaN");
    if (std::isinf(value)) return value > 0 ? "+inf" : "-inf";
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

double parse_double(std::string_view text) { return parse_double(text, 0); }

double parse_double(std::string_view text, std::size_t lineno) {
    if (text == "+inf" || text == "inf") return HUGE_VAL;
    if (text == "-inf") return -HUGE_VAL;
    double value = 0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    auto res = std::from_chars(first, last, value);
    if (res.ec != std::errc() || res.ptr != last)
        throw ParseError("malformed number: '" + std::string(text) + "'",
                         lineno);
    return value;
}

}  // namespace scoreband
