#ifndef SCOREBAND_FORMAT_HPP
#define SCOREBAND_FORMAT_HPP

#include <cstddef>
#include <string>
#include <string_view>

namespace scoreband {

// Shortest decimal string that round-trips to the same double (<= 17
// significant digits). Infinities serialize as "+inf"/"-inf"; NaN is rejected.
std::string fmt_double(double value);

// Inverse of fmt_double; accepts any valid decimal float plus the
// "+inf"/"-inf" literals. Throws ParseError on malformed text, carrying the
// caller's line number (0 when unknown).
double parse_double(std::string_view text);
double parse_double(std::string_view text, std::size_t lineno);

}  // namespace scoreband

#endif
