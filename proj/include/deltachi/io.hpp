#pragma once

// Deterministic output helpers: shortest round-trip double formatting,
// canonical config hashing, small CSV utilities.

#include <cstdint>
#include <string>
#include <string_view>

namespace deltachi {

// Shortest decimal string that round-trips the double (std::to_chars).
std::string format_double(double x);

// FNV-1a 64-bit over a canonical string, rendered as 16 hex digits.
std::string fnv1a_hex(std::string_view s);

}  // namespace deltachi
