#pragma once

#include <cstdint>

#include "shared_dining/bytes.hpp"
#include "shared_dining/dc_core.hpp"
#include "shared_dining/errors.hpp"
#include "shared_dining/secret_sharing.hpp"

// Octet layouts of the messages exchanged inside a group. Integers are
// big-endian.
namespace shared_dining::dc::wire {

struct DistributionMessage {
  RoundIndex round = 0;
  ParticipantId from = 0;
  ParticipantId to = 0;
  Bytes payload;  // ell octets

  friend bool operator==(const DistributionMessage&, const DistributionMessage&) = default;
};

struct CombineMessage {
  RoundIndex round = 0;
  ParticipantId from = 0;
  Share share;

  friend bool operator==(const CombineMessage&, const CombineMessage&) = default;
};

namespace detail {

inline void put_u32(Bytes& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 24));
  out.push_back(static_cast<std::uint8_t>(v >> 16));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

inline std::uint32_t get_u32(ByteView in) {
  return (std::uint32_t{in[0]} << 24) | (std::uint32_t{in[1]} << 16) | (std::uint32_t{in[2]} << 8) | std::uint32_t{in[3]};
}

}  // namespace detail

// round(4) | sender(1) | recipient(1) | payload(ell)
inline Bytes encode(const DistributionMessage& m) {
  Bytes out;
  out.reserve(6 + m.payload.size());
  detail::put_u32(out, m.round);
  out.push_back(m.from);
  out.push_back(m.to);
  out.insert(out.end(), m.payload.begin(), m.payload.end());
  return out;
}

inline DistributionMessage decode_distribution(ByteView in, std::size_t ell) {
  if (in.size() != 6 + ell) throw FramingError("distribution message has wrong size");
  return DistributionMessage{detail::get_u32(in), in[4], in[5], Bytes(in.begin() + 6, in.end())};
}

// round(4) | sender(1) | share wire form
inline Bytes encode(const CombineMessage& m) {
  Bytes out;
  detail::put_u32(out, m.round);
  out.push_back(m.from);
  const Bytes share = sharing::encode_share(m.share);
  out.insert(out.end(), share.begin(), share.end());
  return out;
}

inline CombineMessage decode_combine(ByteView in) {
  if (in.size() < 5) throw FramingError("combine message shorter than its header");
  return CombineMessage{detail::get_u32(in), in[4], sharing::decode_share(in.subspan(5))};
}

}  // namespace shared_dining::dc::wire
