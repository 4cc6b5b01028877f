#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "cyberlogic/authority.hpp"
#include "cyberlogic/formula.hpp"
#include "cyberlogic/hash.hpp"

namespace cyberlogic {

// Canonical byte encoding: integers big-endian 8 bytes, byte strings length
// prefixed, fields in declaration order. Stable across platforms so hashes
// and persisted ledgers are reproducible bit for bit.
class Encoder {
 public:
  void u8(std::uint8_t v) { out_.push_back(static_cast<char>(v)); }
  void u64(std::uint64_t v);
  void str(std::string_view s);           // length-prefixed
  void raw(std::string_view s) { out_.append(s); }  // fixed-size payloads
  void digest(const Digest& d);
  void formula(const Formula& f);

  const std::string& bytes() const { return out_; }
  std::string take() { return std::move(out_); }

 private:
  std::string out_;
};

struct DecodeError : std::runtime_error {
  explicit DecodeError(const std::string& what) : std::runtime_error(what) {}
};

class Decoder {
 public:
  explicit Decoder(std::string_view bytes) : bytes_(bytes) {}

  std::uint8_t u8();
  std::uint64_t u64();
  std::string str();
  std::string raw(std::size_t n);
  Digest digest();
  Formula formula();

  bool done() const { return pos_ == bytes_.size(); }
  std::size_t position() const { return pos_; }

 private:
  void need(std::size_t n) const;
  std::string_view bytes_;
  std::size_t pos_ = 0;
};

}  // namespace cyberlogic
