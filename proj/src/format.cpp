#include "askey/format.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <system_error>

#include "askey/errors.hpp"

namespace askey {

std::string format_real(double v) {
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return {buf.data(), res.ptr};
}

std::string format_real17(double v) {
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v,
                                   std::chars_format::scientific, 16);
    return {buf.data(), res.ptr};
}

double parse_real(std::string_view s) {
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || res.ec != std::errc{} || res.ptr != s.data() + s.size() || !std::isfinite(v)) {
        throw DomainError("not a finite real number: '" + std::string(s) + "'");
    }
    return v;
}

std::int64_t parse_int(std::string_view s) {
    std::int64_t v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
        throw DomainError("not an integer: '" + std::string(s) + "'");
    }
    return v;
}

}  // namespace askey
