#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

namespace cyberlogic {

using Digest = std::array<std::uint8_t, 32>;

inline constexpr Digest kZeroDigest{};

// SHA-256, the build's pinned 256-bit hash (named in the ledger header).
Digest sha256(std::string_view bytes);

std::string to_hex(const Digest& d);

inline const char* kHashAlgorithm = "sha256";

}  // namespace cyberlogic
