#include "cyberlogic/hash.hpp"

#include <openssl/evp.h>

#include <stdexcept>

namespace cyberlogic {

Digest sha256(std::string_view bytes) {
  Digest out{};
  unsigned int len = 0;
  if (!EVP_Digest(bytes.data(), bytes.size(), out.data(), &len, EVP_sha256(), nullptr) ||
      len != out.size()) {
    throw std::runtime_error("sha256 failed");
  }
  return out;
}

std::string to_hex(const Digest& d) {
  static const char* digits = "0123456789abcdef";
  std::string s;
  s.reserve(64);
  for (std::uint8_t b : d) {
    s += digits[b >> 4];
    s += digits[b & 0xf];
  }
  return s;
}

}  // namespace cyberlogic
