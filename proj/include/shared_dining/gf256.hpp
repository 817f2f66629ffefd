#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>

namespace shared_dining::gf256 {

// x^8 + x^4 + x^3 + x + 1, the AES polynomial.
inline constexpr std::uint16_t kReductionPolynomial = 0x11B;
// Generator of the multiplicative group used to build the log/exp tables.
inline constexpr std::uint8_t kGenerator = 0x03;

class FieldElement {
 public:
  constexpr FieldElement() = default;
  constexpr explicit FieldElement(std::uint8_t value) : value_(value) {}

  constexpr std::uint8_t value() const { return value_; }
  constexpr bool is_zero() const { return value_ == 0; }

  friend constexpr bool operator==(FieldElement, FieldElement) = default;

 private:
  std::uint8_t value_ = 0;
};

namespace detail {

struct Tables {
  std::array<std::uint8_t, 256> log{};
  // Doubled so that exp[log a + log b] never needs a modulo.
  std::array<std::uint8_t, 510> exp{};
};

// Multiply by x and reduce.
constexpr std::uint8_t xtime(std::uint8_t a) {
  return static_cast<std::uint8_t>((a << 1) ^ ((a & 0x80) ? (kReductionPolynomial & 0xFF) : 0));
}

inline Tables build_tables() {
  Tables t;
  std::uint8_t x = 1;
  for (std::size_t i = 0; i < 255; ++i) {
    t.exp[i] = x;
    t.exp[i + 255] = x;
    t.log[x] = static_cast<std::uint8_t>(i);
    x = static_cast<std::uint8_t>(x ^ xtime(x));  // x * 0x03
  }
  return t;
}

inline const Tables& tables() {
  static const Tables t = build_tables();
  return t;
}

}  // namespace detail

constexpr FieldElement add(FieldElement a, FieldElement b) {
  return FieldElement(static_cast<std::uint8_t>(a.value() ^ b.value()));
}

constexpr FieldElement sub(FieldElement a, FieldElement b) { return add(a, b); }

inline FieldElement mul(FieldElement a, FieldElement b) {
  if (a.is_zero() || b.is_zero()) return FieldElement{};
  const auto& t = detail::tables();
  return FieldElement(t.exp[t.log[a.value()] + t.log[b.value()]]);
}

inline FieldElement inv(FieldElement a) {
  if (a.is_zero()) throw std::domain_error("inverse of zero in GF(2^8)");
  const auto& t = detail::tables();
  return FieldElement(t.exp[255 - t.log[a.value()]]);
}

inline FieldElement div(FieldElement a, FieldElement b) {
  if (b.is_zero()) throw std::domain_error("division by zero in GF(2^8)");
  if (a.is_zero()) return FieldElement{};
  const auto& t = detail::tables();
  return FieldElement(t.exp[t.log[a.value()] + 255 - t.log[b.value()]]);
}

inline FieldElement pow(FieldElement a, unsigned e) {
  FieldElement r(1);
  for (; e != 0; --e) r = mul(r, a);
  return r;
}

constexpr FieldElement operator+(FieldElement a, FieldElement b) { return add(a, b); }
constexpr FieldElement operator-(FieldElement a, FieldElement b) { return sub(a, b); }
inline FieldElement operator*(FieldElement a, FieldElement b) { return mul(a, b); }
inline FieldElement operator/(FieldElement a, FieldElement b) { return div(a, b); }
constexpr FieldElement& operator+=(FieldElement& a, FieldElement b) { return a = a + b; }
inline FieldElement& operator*=(FieldElement& a, FieldElement b) { return a = a * b; }

// Row of products c*v for every byte v; used by the bulk routines.
using ScaleTable = std::array<std::uint8_t, 256>;

inline ScaleTable scale_table(FieldElement c) {
  ScaleTable row{};
  for (unsigned v = 0; v < 256; ++v) {
    row[v] = mul(c, FieldElement(static_cast<std::uint8_t>(v))).value();
  }
  return row;
}

// dst[i] ^= c * src[i]
inline void mul_add_into(std::span<std::uint8_t> dst, std::span<const std::uint8_t> src, FieldElement c) {
  if (dst.size() != src.size()) throw std::invalid_argument("mul_add_into: length mismatch");
  if (c.is_zero()) return;
  if (c.value() == 1) {
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] ^= src[i];
    return;
  }
  const ScaleTable row = scale_table(c);
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] ^= row[src[i]];
}

}  // namespace shared_dining::gf256
