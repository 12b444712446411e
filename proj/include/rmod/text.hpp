#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace rmod {

/// Shortest decimal form that round-trips to the same double.
std::string format_double(double value);

/// Strict parse of a full token; throws IoError on anything else.
double parse_double(std::string_view token);

std::uint64_t parse_u64(std::string_view token);

} // namespace rmod
