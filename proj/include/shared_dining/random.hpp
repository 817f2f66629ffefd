#pragma once

#include <sodium.h>

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <limits>
#include <span>
#include <stdexcept>
#include <string_view>

namespace shared_dining {

using Seed = std::array<std::uint8_t, 32>;

namespace detail {

inline void ensure_sodium() {
  static const bool ok = sodium_init() >= 0;
  if (!ok) throw std::runtime_error("libsodium initialisation failed");
}

inline void store_le64(std::uint8_t* out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out[i] = static_cast<std::uint8_t>(v >> (8 * i));
}

}  // namespace detail

inline Seed seed_from_u64(std::uint64_t value) {
  detail::ensure_sodium();
  std::uint8_t in[8];
  detail::store_le64(in, value);
  Seed out{};
  crypto_generichash(out.data(), out.size(), in, sizeof in, nullptr, 0);
  return out;
}

// Child seed = BLAKE2b_parent(label || a || b). Children with different
// labels or indices are independent, so adding new consumers never shifts
// the values seen by existing ones.
inline Seed derive_seed(const Seed& parent, std::string_view label, std::uint64_t a = 0, std::uint64_t b = 0) {
  detail::ensure_sodium();
  crypto_generichash_state st;
  crypto_generichash_init(&st, parent.data(), parent.size(), 32);
  crypto_generichash_update(&st, reinterpret_cast<const unsigned char*>(label.data()), label.size());
  std::uint8_t idx[16];
  detail::store_le64(idx, a);
  detail::store_le64(idx + 8, b);
  crypto_generichash_update(&st, idx, sizeof idx);
  Seed out{};
  crypto_generichash_final(&st, out.data(), out.size());
  return out;
}

// Writes the ChaCha20 (IETF) keystream for (key, nonce) into `out`.
inline void chacha_keystream(std::span<std::uint8_t> out, const Seed& key, std::uint64_t nonce) {
  detail::ensure_sodium();
  std::array<std::uint8_t, crypto_stream_chacha20_ietf_NONCEBYTES> iv{};
  detail::store_le64(iv.data(), nonce);
  crypto_stream_chacha20_ietf(out.data(), out.size(), iv.data(), key.data());
}

// Deterministic byte source keyed by a seed and a stream number. Satisfies
// std::uniform_random_bit_generator and additionally offers bulk fill().
class ChaChaRng {
 public:
  using result_type = std::uint64_t;

  explicit ChaChaRng(const Seed& key, std::uint64_t stream = 0) : key_(key) {
    detail::ensure_sodium();
    detail::store_le64(iv_.data(), stream);
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    std::uint8_t b[8];
    fill(b);
    result_type v = 0;
    std::memcpy(&v, b, sizeof v);
    return v;
  }

  void fill(std::span<std::uint8_t> out) {
    std::size_t done = 0;
    while (done < out.size()) {
      if (pos_ == buffer_.size()) refill();
      const std::size_t take = std::min(out.size() - done, buffer_.size() - pos_);
      std::memcpy(out.data() + done, buffer_.data() + pos_, take);
      pos_ += take;
      done += take;
    }
  }

  std::uint8_t byte() {
    if (pos_ == buffer_.size()) refill();
    return buffer_[pos_++];
  }

 private:
  static constexpr std::size_t kBlocks = 64;

  void refill() {
    buffer_.fill(0);
    crypto_stream_chacha20_ietf_xor_ic(buffer_.data(), buffer_.data(), buffer_.size(), iv_.data(), block_, key_.data());
    block_ += kBlocks;
    pos_ = 0;
  }

  Seed key_;
  std::array<std::uint8_t, crypto_stream_chacha20_ietf_NONCEBYTES> iv_{};
  std::uint32_t block_ = 0;
  std::array<std::uint8_t, 64 * kBlocks> buffer_{};
  std::size_t pos_ = 64 * kBlocks;
};

}  // namespace shared_dining
