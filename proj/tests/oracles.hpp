#pragma once

// Reference computations for the tests. Nothing here touches the log/exp
// tables or the library's interpolation code.

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace oracle {

// Carry-less shift-and-add multiplication reduced by 0x11B.
inline std::uint8_t peasant_mul(std::uint8_t a, std::uint8_t b) {
  unsigned x = a;
  unsigned y = b;
  unsigned r = 0;
  while (y != 0) {
    if (y & 1u) r ^= x;
    x <<= 1;
    if (x & 0x100u) x ^= 0x11Bu;
    y >>= 1;
  }
  return static_cast<std::uint8_t>(r);
}

inline std::uint8_t exhaustive_inv(std::uint8_t a) {
  for (unsigned b = 1; b < 256; ++b) {
    if (peasant_mul(a, static_cast<std::uint8_t>(b)) == 1) return static_cast<std::uint8_t>(b);
  }
  throw std::domain_error("no inverse");
}

// coeffs lowest degree first
inline std::uint8_t eval(const std::vector<std::uint8_t>& coeffs, std::uint8_t x) {
  std::uint8_t acc = 0;
  std::uint8_t power = 1;
  for (std::uint8_t c : coeffs) {
    acc ^= peasant_mul(c, power);
    power = peasant_mul(power, x);
  }
  return acc;
}

// Value at 0 of the polynomial through the given points.
inline std::uint8_t lagrange_at_zero(const std::vector<std::uint8_t>& xs, const std::vector<std::uint8_t>& ys) {
  std::uint8_t acc = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    std::uint8_t num = 1;
    std::uint8_t den = 1;
    for (std::size_t j = 0; j < xs.size(); ++j) {
      if (j == i) continue;
      num = peasant_mul(num, xs[j]);
      den = peasant_mul(den, static_cast<std::uint8_t>(xs[i] ^ xs[j]));
    }
    acc ^= peasant_mul(ys[i], peasant_mul(num, exhaustive_inv(den)));
  }
  return acc;
}

}  // namespace oracle
