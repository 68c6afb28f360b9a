#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace harpioneer {

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view bytes) noexcept;

/// fnv1a64 rendered as 16 lowercase hex digits.
std::string fingerprint_hex(std::string_view bytes);

}  // namespace harpioneer
