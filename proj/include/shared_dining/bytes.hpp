#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "shared_dining/errors.hpp"

namespace shared_dining {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

// Operation tally used for complexity checks and the modeled cost clock.
struct OpCount {
  std::uint64_t mul = 0;       // GF(2^8) multiplications
  std::uint64_t add = 0;       // byte XORs
  std::uint64_t pad_bytes = 0; // pseudorandom pad bytes generated

  OpCount& operator+=(const OpCount& o) {
    mul += o.mul;
    add += o.add;
    pad_bytes += o.pad_bytes;
    return *this;
  }
  friend bool operator==(const OpCount&, const OpCount&) = default;
};

inline void xor_into(std::span<std::uint8_t> dst, ByteView src) {
  if (dst.size() != src.size()) {
    throw InputError("xor of byte sequences with different lengths");
  }
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] ^= src[i];
}

inline bool is_zero(ByteView data) {
  return std::all_of(data.begin(), data.end(), [](std::uint8_t b) { return b == 0; });
}

inline std::string to_hex(ByteView data) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(data.size() * 2);
  for (std::uint8_t b : data) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0x0F]);
  }
  return out;
}

inline Bytes from_hex(std::string_view hex) {
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
  };
  if (hex.size() % 2 != 0) throw InputError("hex string has odd length");
  Bytes out(hex.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) {
    int hi = nibble(hex[2 * i]);
    int lo = nibble(hex[2 * i + 1]);
    if (hi < 0 || lo < 0) throw InputError("invalid hex digit");
    out[i] = static_cast<std::uint8_t>((hi << 4) | lo);
  }
  return out;
}

}  // namespace shared_dining
