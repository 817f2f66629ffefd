#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "shared_dining/bytes.hpp"
#include "shared_dining/errors.hpp"

namespace shared_dining::dc {

inline constexpr std::size_t kLengthPrefix = 4;

// 4-octet big-endian length, then the payload, zero-padded to a multiple of
// ell and cut into ell-sized slots.
inline std::vector<Bytes> frame(ByteView payload, std::size_t ell) {
  if (payload.empty()) throw LengthError("cannot frame an empty payload");
  if (ell == 0) throw LengthError("slot length must be positive");
  if (payload.size() > std::numeric_limits<std::uint32_t>::max()) throw LengthError("payload too large to frame");

  const auto len = static_cast<std::uint32_t>(payload.size());
  Bytes stream;
  const std::size_t total = kLengthPrefix + payload.size();
  stream.reserve((total + ell - 1) / ell * ell);
  stream.push_back(static_cast<std::uint8_t>(len >> 24));
  stream.push_back(static_cast<std::uint8_t>(len >> 16));
  stream.push_back(static_cast<std::uint8_t>(len >> 8));
  stream.push_back(static_cast<std::uint8_t>(len));
  stream.insert(stream.end(), payload.begin(), payload.end());
  stream.resize((total + ell - 1) / ell * ell, 0);

  std::vector<Bytes> chunks;
  chunks.reserve(stream.size() / ell);
  for (std::size_t off = 0; off < stream.size(); off += ell) {
    chunks.emplace_back(stream.begin() + static_cast<std::ptrdiff_t>(off),
                        stream.begin() + static_cast<std::ptrdiff_t>(off + ell));
  }
  return chunks;
}

inline std::size_t frame_count(std::size_t payload_size, std::size_t ell) {
  return (kLengthPrefix + payload_size + ell - 1) / ell;
}

inline Bytes unframe(std::span<const Bytes> chunks) {
  Bytes stream;
  for (const auto& c : chunks) stream.insert(stream.end(), c.begin(), c.end());
  if (stream.size() < kLengthPrefix) throw FramingError("framed data shorter than its length prefix");
  const std::size_t len = (std::size_t{stream[0]} << 24) | (std::size_t{stream[1]} << 16) |
                          (std::size_t{stream[2]} << 8) | std::size_t{stream[3]};
  if (stream.size() - kLengthPrefix < len) {
    throw FramingError("framed data truncated: prefix announces " + std::to_string(len) + " octets, " +
                       std::to_string(stream.size() - kLengthPrefix) + " present");
  }
  return Bytes(stream.begin() + kLengthPrefix, stream.begin() + static_cast<std::ptrdiff_t>(kLengthPrefix + len));
}

}  // namespace shared_dining::dc
