#include "rmod/text.hpp"

#include <charconv>
#include <cstdint>
#include <system_error>

#include "rmod/errors.hpp"

namespace rmod {

std::string format_double(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc())
        throw IoError("failed to format double");
    return std::string(buf, ptr);
}

double parse_double(std::string_view token) {
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size())
        throw IoError("bad numeric field: '" + std::string(token) + "'");
    return value;
}

std::uint64_t parse_u64(std::string_view token) {
    std::uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size())
        throw IoError("bad integer field: '" + std::string(token) + "'");
    return value;
}

} // namespace rmod
