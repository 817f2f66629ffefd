#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "oracles.hpp"
#include "shared_dining/secret_sharing.hpp"

using namespace shared_dining;
using sharing::Share;
using sharing::SharingPolicy;
using gf256::FieldElement;

namespace {

// Every random byte it hands out is the same constant.
struct ConstantSource {
  std::uint8_t value;
  void fill(std::span<std::uint8_t> out) { std::fill(out.begin(), out.end(), value); }
};

Bytes random_bytes(std::mt19937& rng, std::size_t len) {
  Bytes b(len);
  for (auto& x : b) x = static_cast<std::uint8_t>(rng());
  return b;
}

Share share(unsigned x, Bytes data) { return Share{FieldElement(static_cast<std::uint8_t>(x)), std::move(data)}; }

// All k-subsets of {0..n-1}.
std::vector<std::vector<std::size_t>> subsets(std::size_t n, std::size_t k) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<bool> mask(n, false);
  std::fill(mask.begin(), mask.begin() + static_cast<std::ptrdiff_t>(k), true);
  do {
    std::vector<std::size_t> s;
    for (std::size_t i = 0; i < n; ++i)
      if (mask[i]) s.push_back(i);
    out.push_back(s);
  } while (std::prev_permutation(mask.begin(), mask.end()));
  return out;
}

}  // namespace

TEST(Split, ThresholdOneCopiesMessage) {
  std::mt19937 rng(1);
  const Bytes m = random_bytes(rng, 12);
  const auto shares = sharing::split(m, SharingPolicy{5, 1}, rng);
  ASSERT_EQ(shares.size(), 5u);
  for (std::size_t i = 0; i < shares.size(); ++i) {
    EXPECT_EQ(shares[i].x.value(), i + 1);
    EXPECT_EQ(shares[i].data, m);
  }
}

TEST(Split, KnownLinearPolynomial) {
  // f(x) = 0x2A + 0x05 x, evaluated with the reference multiplication.
  const std::uint8_t f1 = oracle::eval({0x2A, 0x05}, 1);
  const std::uint8_t f2 = oracle::eval({0x2A, 0x05}, 2);
  ASSERT_EQ(f1, 0x2F);
  ASSERT_EQ(f2, 0x20);
  ConstantSource five{0x05};
  const auto shares = sharing::split(Bytes{0x2A}, SharingPolicy{2, 2}, five);
  EXPECT_EQ(shares[0].data, Bytes{f1});
  EXPECT_EQ(shares[1].data, Bytes{f2});
}

TEST(Join, KnownLinearPolynomial) {
  const std::vector<Share> s{share(1, {0x2F}), share(2, {0x20})};
  ASSERT_EQ(oracle::lagrange_at_zero({1, 2}, {0x2F, 0x20}), 0x2A);
  EXPECT_EQ(sharing::join(s, SharingPolicy{2, 2}), Bytes{0x2A});
}

TEST(Split, RoundTripRandomMessages) {
  std::mt19937 rng(2);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + rng() % 12;
    const std::size_t k = 1 + rng() % n;
    const Bytes m = random_bytes(rng, 1 + rng() % 40);
    auto shares = sharing::split(m, SharingPolicy{n, k}, rng);
    std::shuffle(shares.begin(), shares.end(), rng);
    shares.resize(k);
    ASSERT_EQ(sharing::join(shares, SharingPolicy{n, k}), m) << "n=" << n << " k=" << k;
  }
}

TEST(Join, EveryKSubsetAgrees) {
  std::mt19937 rng(3);
  for (std::size_t n = 2; n <= 7; ++n) {
    for (std::size_t k = 1; k <= n; ++k) {
      const Bytes m = random_bytes(rng, 5);
      const auto shares = sharing::split(m, SharingPolicy{n, k}, rng);
      for (const auto& idx : subsets(n, k)) {
        std::vector<Share> pick;
        for (auto i : idx) pick.push_back(shares[i]);
        ASSERT_EQ(sharing::join(pick, SharingPolicy{n, k}), m);
      }
      EXPECT_EQ(sharing::join(shares, SharingPolicy{n, k}),
                sharing::join(std::span<const Share>(shares).first(k), SharingPolicy{n, k}));
    }
  }
}

TEST(Join, MatchesReferenceInterpolation) {
  std::mt19937 rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t k = 1 + rng() % 6;
    std::vector<std::uint8_t> xs;
    while (xs.size() < k) {
      auto x = static_cast<std::uint8_t>(1 + rng() % 255);
      if (std::find(xs.begin(), xs.end(), x) == xs.end()) xs.push_back(x);
    }
    std::vector<std::uint8_t> ys;
    std::vector<Share> shares;
    for (auto x : xs) {
      ys.push_back(static_cast<std::uint8_t>(rng()));
      shares.push_back(share(x, {ys.back()}));
    }
    EXPECT_EQ(sharing::join(shares, SharingPolicy{255, k}), Bytes{oracle::lagrange_at_zero(xs, ys)});
  }
}

TEST(Split, LeadingCoefficientNeverZero) {
  std::mt19937 rng(5);
  for (std::size_t k = 2; k <= 6; ++k) {
    const auto p = sharing::random_polynomial(Bytes(500, 0), k, rng);
    ASSERT_EQ(p.terms(), k);
    for (auto b : p.coefficients.back()) ASSERT_NE(b, 0);
  }
}

TEST(Split, Errors) {
  std::mt19937 rng(6);
  EXPECT_THROW(sharing::split(Bytes{1}, SharingPolicy{256, 2}, rng), CapacityError);
  EXPECT_THROW(sharing::split(Bytes{}, SharingPolicy{3, 2}, rng), LengthError);
  EXPECT_THROW(sharing::split(Bytes{1}, SharingPolicy{3, 4}, rng), InputError);
  EXPECT_THROW(sharing::split(Bytes{1}, SharingPolicy{3, 0}, rng), InputError);
}

TEST(Join, Errors) {
  const SharingPolicy p{5, 3};
  EXPECT_THROW(sharing::join(std::vector<Share>{share(1, {1}), share(2, {2})}, p), ThresholdError);
  EXPECT_THROW(sharing::join(std::vector<Share>{share(1, {1}), share(1, {2}), share(3, {3})}, p), InputError);
  EXPECT_THROW(sharing::join(std::vector<Share>{share(1, {1}), share(2, {2, 2}), share(3, {3})}, p), InputError);
  EXPECT_THROW(sharing::join(std::vector<Share>{share(0, {1}), share(2, {2}), share(3, {3})}, p), InputError);
}

TEST(CombinePointwise, IdentityAndSelfInverse) {
  const Share s = share(4, {1, 2, 3});
  EXPECT_EQ(sharing::combine_pointwise(s, share(4, {0, 0, 0})), s);
  EXPECT_EQ(sharing::combine_pointwise(s, s), share(4, {0, 0, 0}));
  EXPECT_THROW(sharing::combine_pointwise(s, share(5, {0, 0, 0})), InputError);
}

TEST(CombinePointwise, HomomorphismOverSeveralMessages) {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng() % 8;
    const std::size_t k = 1 + rng() % n;
    const std::size_t count = 1 + rng() % 5;
    const std::size_t len = 1 + rng() % 16;
    Bytes expected(len, 0);
    std::vector<Share> acc;
    for (std::size_t m = 0; m < count; ++m) {
      const Bytes msg = random_bytes(rng, len);
      xor_into(expected, msg);
      auto shares = sharing::split(msg, SharingPolicy{n, k}, rng);
      if (acc.empty()) {
        acc = shares;
      } else {
        for (std::size_t i = 0; i < n; ++i) acc[i] = sharing::combine_pointwise(acc[i], shares[i]);
      }
    }
    std::shuffle(acc.begin(), acc.end(), rng);
    ASSERT_EQ(sharing::join(acc, SharingPolicy{n, k}), expected);
  }
}

TEST(ThresholdHiding, EveryCandidateSecretHasExactlyOnePolynomial) {
  // k = 2: one share (x=3, y). Count the polynomials a0 + a1 x with a0 = v
  // through the share, by enumeration of all 65536 polynomials.
  {
    const std::uint8_t y = 0x77;
    std::vector<int> count(256, 0);
    for (unsigned a0 = 0; a0 < 256; ++a0)
      for (unsigned a1 = 0; a1 < 256; ++a1)
        if (oracle::eval({static_cast<std::uint8_t>(a0), static_cast<std::uint8_t>(a1)}, 3) == y) ++count[a0];
    for (int c : count) EXPECT_EQ(c, 1);
  }
  // k = 3: two shares (x=2, x=5), all 16.7M polynomials.
  {
    const std::uint8_t y2 = 0x10, y5 = 0xE3;
    std::vector<int> count(256, 0);
    for (unsigned a0 = 0; a0 < 256; ++a0)
      for (unsigned a1 = 0; a1 < 256; ++a1)
        for (unsigned a2 = 0; a2 < 256; ++a2) {
          const std::vector<std::uint8_t> c{static_cast<std::uint8_t>(a0), static_cast<std::uint8_t>(a1),
                                            static_cast<std::uint8_t>(a2)};
          if (oracle::eval(c, 2) == y2 && oracle::eval(c, 5) == y5) ++count[a0];
        }
    for (int c : count) EXPECT_EQ(c, 1);
  }
}

TEST(Interpolate, RecoversCoefficients) {
  std::mt19937 rng(8);
  for (std::size_t k = 1; k <= 6; ++k) {
    const auto p = sharing::random_polynomial(random_bytes(rng, 9), k, rng);
    auto shares = sharing::shares_of(p, 8);
    std::shuffle(shares.begin(), shares.end(), rng);
    shares.resize(k);
    EXPECT_EQ(sharing::interpolate(shares), p);
  }
}

TEST(Complexity, OperationCountsGrowLinearlyInLength) {
  std::mt19937 rng(9);
  const SharingPolicy p{10, 4};
  auto cost = [&](std::size_t len) {
    OpCount ops;
    const auto shares = sharing::split(random_bytes(rng, len), p, rng, &ops);
    sharing::join(shares, p, &ops);
    return ops.mul + ops.add;
  };
  const auto base = cost(64);
  EXPECT_GT(base, 0u);
  EXPECT_EQ(cost(128), 2 * base);
  EXPECT_EQ(cost(1024), 16 * base);
}

TEST(ShareWire, RoundTripAndErrors) {
  const Share s = share(9, {1, 2, 3});
  EXPECT_EQ(sharing::decode_share(sharing::encode_share(s)), s);
  EXPECT_EQ(sharing::encode_share(s), (Bytes{9, 1, 2, 3}));
  EXPECT_THROW(sharing::decode_share(Bytes{9}), FramingError);
  EXPECT_THROW(sharing::decode_share(Bytes{0, 1}), FramingError);
}
