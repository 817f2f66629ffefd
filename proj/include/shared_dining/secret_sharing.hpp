#pragma once

#include <algorithm>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "shared_dining/bytes.hpp"
#include "shared_dining/errors.hpp"
#include "shared_dining/gf256.hpp"

// (n,k) Shamir sharing over GF(2^8), one independent polynomial per byte.
namespace shared_dining::sharing {

using gf256::FieldElement;

inline constexpr std::size_t kMaxParticipants = 255;

struct Share {
  FieldElement x;  // evaluation point, never 0
  Bytes data;      // f_b(x) for each byte position b

  friend bool operator==(const Share&, const Share&) = default;
};

struct SharingPolicy {
  std::size_t n = 1;
  std::size_t k = 1;

  void validate() const {
    if (n > kMaxParticipants) {
      throw CapacityError("at most 255 participants fit into GF(2^8), got n=" + std::to_string(n));
    }
    if (k < 1 || k > n) {
      throw InputError("threshold must satisfy 1 <= k <= n, got n=" + std::to_string(n) + " k=" +
                       std::to_string(k));
    }
  }
};

// Byte-vector polynomial: coefficients[d][b] is the degree-d coefficient of
// the polynomial for byte position b.
struct Polynomial {
  std::vector<Bytes> coefficients;

  std::size_t terms() const { return coefficients.size(); }
  std::size_t length() const { return coefficients.empty() ? 0 : coefficients.front().size(); }
  const Bytes& constant() const { return coefficients.front(); }

  friend bool operator==(const Polynomial&, const Polynomial&) = default;
};

template <typename R>
concept BulkByteSource = requires(R& r, std::span<std::uint8_t> out) { r.fill(out); };

template <typename R>
concept RandomSource = BulkByteSource<R> || std::uniform_random_bit_generator<R>;

template <RandomSource R>
void fill_random(R& rng, std::span<std::uint8_t> out) {
  if constexpr (BulkByteSource<R>) {
    rng.fill(out);
  } else {
    for (auto& b : out) b = static_cast<std::uint8_t>(rng());
  }
}

// Random polynomial with constant term `secret` and k terms. For k >= 2 the
// leading coefficient is resampled until non-zero, so the degree is exactly k-1.
template <RandomSource R>
Polynomial random_polynomial(ByteView secret, std::size_t k, R& rng) {
  if (secret.empty()) throw LengthError("cannot share an empty message");
  if (k < 1) throw InputError("polynomial needs at least one term");
  Polynomial p;
  p.coefficients.reserve(k);
  p.coefficients.emplace_back(secret.begin(), secret.end());
  for (std::size_t d = 1; d < k; ++d) {
    Bytes c(secret.size());
    fill_random(rng, c);
    p.coefficients.push_back(std::move(c));
  }
  if (k >= 2) {
    for (auto& b : p.coefficients.back()) {
      while (b == 0) {
        std::uint8_t r = 0;
        fill_random(rng, std::span<std::uint8_t>(&r, 1));
        b = r;
      }
    }
  }
  return p;
}

// Horner evaluation of every byte polynomial at x.
inline Bytes evaluate(const Polynomial& p, FieldElement x, OpCount* ops = nullptr) {
  if (p.coefficients.empty()) throw InputError("evaluate: empty polynomial");
  Bytes acc = p.coefficients.back();
  if (p.terms() == 1) return acc;
  const gf256::ScaleTable row = gf256::scale_table(x);
  for (std::size_t d = p.terms() - 1; d-- > 0;) {
    const Bytes& c = p.coefficients[d];
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] = row[acc[i]] ^ c[i];
  }
  if (ops) {
    ops->mul += (p.terms() - 1) * acc.size();
    ops->add += (p.terms() - 1) * acc.size();
  }
  return acc;
}

// Shares at x = 1..n.
inline std::vector<Share> shares_of(const Polynomial& p, std::size_t n, OpCount* ops = nullptr) {
  std::vector<Share> out;
  out.reserve(n);
  for (std::size_t i = 1; i <= n; ++i) {
    const FieldElement x(static_cast<std::uint8_t>(i));
    out.push_back(Share{x, evaluate(p, x, ops)});
  }
  return out;
}

template <RandomSource R>
std::vector<Share> split(ByteView message, const SharingPolicy& policy, R& rng, OpCount* ops = nullptr) {
  policy.validate();
  if (message.empty()) throw LengthError("cannot share an empty message");
  return shares_of(random_polynomial(message, policy.k, rng), policy.n, ops);
}

namespace detail {

inline void check_points(std::span<const Share> shares) {
  if (shares.empty()) throw ThresholdError("no shares supplied");
  const std::size_t len = shares.front().data.size();
  std::vector<bool> seen(256, false);
  for (const auto& s : shares) {
    if (s.x.is_zero()) throw InputError("share index 0 is reserved for the secret");
    if (seen[s.x.value()]) throw InputError("duplicate share index " + std::to_string(s.x.value()));
    seen[s.x.value()] = true;
    if (s.data.size() != len) throw InputError("shares have unequal data lengths");
  }
}

}  // namespace detail

// Lagrange basis weights L_i(0) for the points xs.
inline std::vector<FieldElement> lagrange_weights_at_zero(std::span<const FieldElement> xs) {
  std::vector<FieldElement> w(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    FieldElement num(1), den(1);
    for (std::size_t j = 0; j < xs.size(); ++j) {
      if (j == i) continue;
      num *= xs[j];          // 0 - x_j
      den *= xs[i] - xs[j];  // x_i - x_j
    }
    w[i] = num / den;
  }
  return w;
}

// Recovers the secret from at least k shares. When more are supplied the k
// with the smallest indices are used.
inline Bytes join(std::span<const Share> shares, const SharingPolicy& policy, OpCount* ops = nullptr) {
  policy.validate();
  if (shares.size() < policy.k) {
    throw ThresholdError("need " + std::to_string(policy.k) + " shares, got " + std::to_string(shares.size()));
  }
  detail::check_points(shares);

  std::vector<const Share*> chosen;
  chosen.reserve(shares.size());
  for (const auto& s : shares) chosen.push_back(&s);
  std::sort(chosen.begin(), chosen.end(), [](const Share* a, const Share* b) { return a->x.value() < b->x.value(); });
  chosen.resize(policy.k);

  std::vector<FieldElement> xs;
  for (const Share* s : chosen) xs.push_back(s->x);
  const auto w = lagrange_weights_at_zero(xs);

  Bytes out(chosen.front()->data.size(), 0);
  for (std::size_t i = 0; i < chosen.size(); ++i) gf256::mul_add_into(out, chosen[i]->data, w[i]);
  if (ops) {
    ops->mul += chosen.size() * out.size();
    ops->add += chosen.size() * out.size();
  }
  return out;
}

// Full coefficient form of the unique polynomial with shares.size() terms
// passing through all given shares.
inline Polynomial interpolate(std::span<const Share> shares) {
  detail::check_points(shares);
  const std::size_t m = shares.size();
  const std::size_t len = shares.front().data.size();
  Polynomial p;
  p.coefficients.assign(m, Bytes(len, 0));
  for (std::size_t i = 0; i < m; ++i) {
    // basis numerator prod_{j != i} (x + x_j), lowest degree first
    std::vector<FieldElement> basis{FieldElement(1)};
    FieldElement den(1);
    for (std::size_t j = 0; j < m; ++j) {
      if (j == i) continue;
      std::vector<FieldElement> next(basis.size() + 1);
      for (std::size_t d = 0; d < basis.size(); ++d) {
        next[d] += basis[d] * shares[j].x;
        next[d + 1] += basis[d];
      }
      basis = std::move(next);
      den *= shares[i].x - shares[j].x;
    }
    const FieldElement scale = gf256::inv(den);
    for (std::size_t d = 0; d < m; ++d) {
      gf256::mul_add_into(p.coefficients[d], shares[i].data, basis[d] * scale);
    }
  }
  return p;
}

// Pointwise sum of two shares at the same index; by linearity this is a
// share of the summed polynomials.
inline Share combine_pointwise(const Share& a, const Share& b) {
  if (a.x != b.x) {
    throw InputError("cannot combine shares at different indices " + std::to_string(a.x.value()) + " and " +
                     std::to_string(b.x.value()));
  }
  Share out = a;
  xor_into(out.data, b.data);
  return out;
}

// Wire form: one octet x followed by the data octets.
inline Bytes encode_share(const Share& s) {
  Bytes out;
  out.reserve(1 + s.data.size());
  out.push_back(s.x.value());
  out.insert(out.end(), s.data.begin(), s.data.end());
  return out;
}

inline Share decode_share(ByteView wire) {
  if (wire.size() < 2) throw FramingError("share wire form needs an index and at least one data octet");
  if (wire[0] == 0) throw FramingError("share index 0 on the wire");
  return Share{FieldElement(wire[0]), Bytes(wire.begin() + 1, wire.end())};
}

}  // namespace shared_dining::sharing
