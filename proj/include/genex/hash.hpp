#pragma once

#include <cstdint>
#include <string_view>

namespace genex {

std::uint64_t splitmix64(std::uint64_t x);

/// FNV-1a, continuing from `h`.
std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h = 14695981039346656037ULL);

/// Maps 64 random bits to [0, 1).
inline double unit_interval(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

}  // namespace genex
