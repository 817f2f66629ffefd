#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "shared_dining/bytes.hpp"
#include "shared_dining/dc_core.hpp"
#include "shared_dining/errors.hpp"
#include "shared_dining/field_matrix.hpp"
#include "shared_dining/gf256.hpp"
#include "shared_dining/secret_sharing.hpp"
#include "shared_dining/sim_net.hpp"

// Semi-honest coalition analysis of the share-distributing round: what the
// coalition sees, the linear system it can set up over the honest
// participants' polynomial coefficients, and explicit alternative executions
// showing that any honest participant could have been the sender.
namespace shared_dining::probe {

using dc::ParticipantId;
using gf256::FieldElement;
using gf256::FieldMatrix;
using sharing::Polynomial;
using PairKey = std::pair<ParticipantId, ParticipantId>;

struct AttackerView {
  std::size_t n = 0;
  std::size_t k = 0;
  std::size_t ell = 0;
  dc::RoundIndex round = 0;
  std::vector<ParticipantId> coalition;               // ascending
  std::map<PairKey, Bytes> distribution;              // (from, to): to in coalition, from != to
  std::map<PairKey, Bytes> combine;                   // (from, to): share wire forms received
  std::map<PairKey, Bytes> pads;                      // (i, j), i < j, at least one in coalition
  std::map<ParticipantId, Polynomial> polynomials;    // coalition's own
  Polynomial p_sum;                                   // from the coalition's reconstruction
  Bytes message;                                      // p_sum(0)

  bool in_coalition(ParticipantId i) const { return std::binary_search(coalition.begin(), coalition.end(), i); }

  std::vector<ParticipantId> honest() const {
    std::vector<ParticipantId> out;
    for (std::size_t i = 1; i <= n; ++i)
      if (!in_coalition(static_cast<ParticipantId>(i))) out.push_back(static_cast<ParticipantId>(i));
    return out;
  }

  friend bool operator==(const AttackerView&, const AttackerView&) = default;
};

namespace detail {

inline std::vector<ParticipantId> checked_coalition(std::vector<ParticipantId> c, std::size_t n) {
  std::sort(c.begin(), c.end());
  if (std::adjacent_find(c.begin(), c.end()) != c.end()) throw InputError("coalition lists a participant twice");
  for (auto i : c)
    if (i < 1 || i > n) throw InputError("coalition member " + std::to_string(i) + " outside 1.." + std::to_string(n));
  return c;
}

// Polynomial subtraction equals addition in characteristic 2.
inline void add_into(Polynomial& acc, const Polynomial& p) {
  for (std::size_t d = 0; d < acc.terms(); ++d) xor_into(acc.coefficients[d], p.coefficients[d]);
}

}  // namespace detail

// The coalition's observations, for any coalition size 1..n-1.
inline AttackerView extract_coalition_view(const sim::RoundTranscript& t, std::vector<ParticipantId> coalition) {
  if (t.mode != sim::Mode::shared) throw InputError("the probe analyses share-distributing rounds only");
  AttackerView v;
  v.n = t.config.n;
  v.k = t.config.k;
  v.ell = t.config.ell;
  v.round = t.round;
  v.coalition = detail::checked_coalition(std::move(coalition), v.n);
  if (v.coalition.empty() || v.coalition.size() >= v.n) {
    throw InputError("coalition size must be in 1..n-1, got " + std::to_string(v.coalition.size()));
  }

  for (const auto& m : t.messages) {
    if (!v.in_coalition(m.to)) continue;
    if (m.kind == sim::MessageKind::distribution) v.distribution[{m.from, m.to}] = m.payload;
    if (m.kind == sim::MessageKind::combine) v.combine[{m.from, m.to}] = m.payload;
  }
  for (const auto& [key, pad] : t.randomness.pair_pads) {
    if (v.in_coalition(key.first) || v.in_coalition(key.second)) v.pads[key] = pad;
  }
  for (auto a : v.coalition) v.polynomials[a] = t.randomness.polynomials.at(a);

  // Reconstruct p_sum the way the first member does: own share plus the
  // shares the combine step delivered to it.
  const ParticipantId first = v.coalition.front();
  std::vector<sharing::Share> shares{*t.outputs.at(first - 1).share};
  for (const auto& [key, wire] : v.combine)
    if (key.second == first) shares.push_back(sharing::decode_share(wire));
  if (shares.size() < v.k) throw ProbeError("coalition member received fewer than k-1 shares");
  shares.resize(v.k);
  v.p_sum = sharing::interpolate(shares);
  v.message = v.p_sum.constant();
  return v;
}

// The view of exactly k-1 attackers.
inline AttackerView extract_view(const sim::RoundTranscript& t, std::vector<ParticipantId> attackers) {
  if (attackers.size() + 1 != t.config.k) {
    throw InputError("attacker coalition must have k-1 = " + std::to_string(t.config.k - 1) + " members, got " +
                     std::to_string(attackers.size()));
  }
  return extract_coalition_view(t, std::move(attackers));
}

struct Unknown {
  ParticipantId participant = 0;
  std::size_t coefficient = 0;  // 1..k, coefficient of x^(coefficient-1)

  friend bool operator==(const Unknown&, const Unknown&) = default;
};

struct EquationSystem {
  FieldMatrix matrix;
  std::vector<FieldElement> rhs;
  std::vector<Unknown> unknowns;
  std::size_t byte_position = 0;
};

// p_sum minus every coalition polynomial: the sum of the honest polynomials.
inline Polynomial remaining_polynomial(const AttackerView& v) {
  Polynomial rem = v.p_sum;
  for (const auto& [a, p] : v.polynomials) detail::add_into(rem, p);
  return rem;
}

// For each honest h and each consecutive pair (a, b) of coalition members:
//   sum_d c_{h,d} (a^d + b^d) = M_{h,a} + M_{h,b}
// (the aggregate pad of h cancels, and so does the constant term), followed
// by one row with every unknown at coefficient 1 equal to p_remains(1).
inline EquationSystem build_system(const AttackerView& v, std::size_t byte_position = 0) {
  if (byte_position >= v.ell) throw InputError("byte position outside the slot");
  const auto honest = v.honest();
  const std::size_t c = v.coalition.size();
  const std::size_t k = v.k;
  const std::size_t rows = honest.size() * (c - 1) + 1;
  const std::size_t cols = honest.size() * k;

  EquationSystem sys;
  sys.byte_position = byte_position;
  sys.matrix = FieldMatrix(rows, cols);
  sys.rhs.assign(rows, FieldElement{});
  for (auto h : honest)
    for (std::size_t d = 1; d <= k; ++d) sys.unknowns.push_back(Unknown{h, d});

  std::size_t row = 0;
  for (std::size_t bi = 0; bi < honest.size(); ++bi) {
    const auto h = honest[bi];
    for (std::size_t r = 0; r + 1 < c; ++r) {
      const FieldElement xa(v.coalition[r]);
      const FieldElement xb(v.coalition[r + 1]);
      for (std::size_t d = 0; d < k; ++d) {
        sys.matrix.at(row, bi * k + d) = gf256::pow(xa, static_cast<unsigned>(d)) + gf256::pow(xb, static_cast<unsigned>(d));
      }
      const auto& ma = v.distribution.at({h, v.coalition[r]});
      const auto& mb = v.distribution.at({h, v.coalition[r + 1]});
      sys.rhs[row] = FieldElement(static_cast<std::uint8_t>(ma[byte_position] ^ mb[byte_position]));
      ++row;
    }
  }
  const Polynomial rem = remaining_polynomial(v);
  FieldElement total{};
  for (const auto& coeff : rem.coefficients) total += FieldElement(coeff[byte_position]);
  for (std::size_t col = 0; col < cols; ++col) sys.matrix.at(row, col) = FieldElement(1);
  sys.rhs[row] = total;
  return sys;
}

// Whether the honest polynomials (e.g. the true ones) satisfy the system.
inline bool satisfied_by(const EquationSystem& sys, const std::map<ParticipantId, Polynomial>& polys) {
  std::vector<FieldElement> x;
  for (const auto& u : sys.unknowns) {
    x.push_back(FieldElement(polys.at(u.participant).coefficients.at(u.coefficient - 1).at(sys.byte_position)));
  }
  for (std::size_t r = 0; r < sys.matrix.rows(); ++r) {
    FieldElement acc{};
    for (std::size_t c = 0; c < x.size(); ++c) acc += sys.matrix.at(r, c) * x[c];
    if (acc != sys.rhs[r]) return false;
  }
  return true;
}

struct Analysis {
  std::size_t rows = 0;
  std::size_t unknowns = 0;
  std::size_t rank = 0;
  std::size_t augmented_rank = 0;
  // The system has 256^free_variables solutions.
  std::size_t free_variables = 0;
};

inline Analysis analyze(const EquationSystem& sys) {
  Analysis a;
  a.rows = sys.matrix.rows();
  a.unknowns = sys.matrix.cols();
  a.rank = gf256::rank(sys.matrix);
  a.augmented_rank = gf256::rank(sys.matrix.augmented(sys.rhs));
  if (a.rank != a.augmented_rank) {
    throw ProbeError("inconsistent coalition system: rank " + std::to_string(a.rank) + " vs augmented " +
                     std::to_string(a.augmented_rank));
  }
  a.free_variables = a.unknowns - a.rank;
  return a;
}

// An alternative assignment of the honest participants' randomness.
struct ForgedExecution {
  ParticipantId sender = 0;
  Bytes message;
  std::map<ParticipantId, Polynomial> honest_polynomials;
  std::map<PairKey, Bytes> honest_pads;  // pairs of two honest participants
};

namespace detail {

// Coefficients (lowest degree first) of the Lagrange basis polynomials for xs.
inline std::vector<std::vector<FieldElement>> lagrange_basis(const std::vector<FieldElement>& xs) {
  const std::size_t m = xs.size();
  std::vector<std::vector<FieldElement>> out(m);
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<FieldElement> num{FieldElement(1)};
    FieldElement den(1);
    for (std::size_t j = 0; j < m; ++j) {
      if (j == i) continue;
      std::vector<FieldElement> next(num.size() + 1);
      for (std::size_t d = 0; d < num.size(); ++d) {
        next[d] += num[d] * xs[j];
        next[d + 1] += num[d];
      }
      num = std::move(next);
      den *= xs[i] - xs[j];
    }
    const FieldElement s = gf256::inv(den);
    for (auto& e : num) e *= s;
    out[i] = std::move(num);
  }
  return out;
}

inline FieldElement eval(const Polynomial& p, std::size_t b, FieldElement x) {
  FieldElement acc{};
  for (std::size_t d = p.terms(); d-- > 0;) acc = acc * x + FieldElement(p.coefficients[d][b]);
  return acc;
}

}  // namespace detail

// Builds, from the coalition's view alone, a complete assignment of honest
// polynomials and honest-honest pads under which `alt_sender` sent `message`
// and every other honest participant sent zeros, and which reproduces every
// octet the coalition observed. Requires a coalition of at most k-1 members.
template <typename Rng>
ForgedExecution forge(const AttackerView& v, ParticipantId alt_sender, ByteView message, Rng& rng) {
  const auto honest = v.honest();
  if (std::find(honest.begin(), honest.end(), alt_sender) == honest.end()) {
    throw InputError("forge candidate " + std::to_string(alt_sender) + " is not honest");
  }
  if (message.size() != v.ell) throw InputError("forged message has the wrong length");
  if (v.coalition.size() + 1 > v.k) throw InputError("forging needs a coalition of at most k-1 members");

  const std::size_t k = v.k;
  const std::size_t ell = v.ell;
  const Polynomial rem = remaining_polynomial(v);
  auto random_byte = [&rng]() { return static_cast<std::uint8_t>(rng()); };

  // Interpolation points: 0, the coalition, then filler x values if the
  // coalition is smaller than k-1.
  std::vector<FieldElement> xs{FieldElement(0)};
  for (auto a : v.coalition) xs.push_back(FieldElement(a));
  for (unsigned x = 1; xs.size() < k; ++x)
    if (!v.in_coalition(static_cast<ParticipantId>(x))) xs.push_back(FieldElement(static_cast<std::uint8_t>(x)));
  const auto basis = detail::lagrange_basis(xs);

  ForgedExecution f;
  f.sender = alt_sender;
  f.message.assign(message.begin(), message.end());
  std::map<ParticipantId, Bytes> agg_pad;  // forged aggregate pad per honest participant
  for (auto h : honest) {
    f.honest_polynomials[h].coefficients.assign(k, Bytes(ell, 0));
    agg_pad[h] = Bytes(ell, 0);
  }
  auto target = [&](ParticipantId h, std::size_t b) -> std::uint8_t { return h == alt_sender ? message[b] : 0; };

  const ParticipantId last = honest.back();
  for (std::size_t b = 0; b < ell; ++b) {
    // Fill every honest polynomial except `last` through (0, target) and
    // (a, M_{h,a} + P_h), with P_h drawn at random.
    auto fill = [&](ParticipantId h) {
      std::vector<FieldElement> ys(xs.size());
      const std::uint8_t pad = random_byte();
      ys[0] = FieldElement(target(h, b));
      for (std::size_t i = 0; i < v.coalition.size(); ++i) {
        ys[i + 1] = FieldElement(static_cast<std::uint8_t>(v.distribution.at({h, v.coalition[i]})[b] ^ pad));
      }
      for (std::size_t i = v.coalition.size() + 1; i < xs.size(); ++i) ys[i] = FieldElement(random_byte());
      auto& poly = f.honest_polynomials[h];
      for (std::size_t d = 0; d < k; ++d) {
        FieldElement c{};
        for (std::size_t i = 0; i < xs.size(); ++i) c += ys[i] * basis[i][d];
        poly.coefficients[d][b] = c.value();
      }
      agg_pad[h][b] = pad;
      return k < 2 || poly.coefficients[k - 1][b] != 0;
    };
    auto fill_last = [&]() {
      auto& poly = f.honest_polynomials[last];
      for (std::size_t d = 0; d < k; ++d) {
        std::uint8_t c = rem.coefficients[d][b];
        for (auto h : honest)
          if (h != last) c ^= f.honest_polynomials[h].coefficients[d][b];
        poly.coefficients[d][b] = c;
      }
      return k < 2 || poly.coefficients[k - 1][b] != 0;
    };

    bool ok = false;
    for (int attempt = 0; attempt < 4096 && !ok; ++attempt) {
      ok = true;
      for (auto h : honest) {
        if (h == last) continue;
        while (!fill(h)) {
        }
      }
      ok = fill_last();
    }
    if (!ok) throw ProbeError("could not find a forged polynomial with a non-zero leading coefficient");

    // The last polynomial must be masked by one aggregate pad at every
    // coalition member, otherwise the algebra above is wrong.
    const auto& pl = f.honest_polynomials[last];
    std::optional<std::uint8_t> pad_last;
    for (auto a : v.coalition) {
      const std::uint8_t p = v.distribution.at({last, a})[b] ^ detail::eval(pl, b, FieldElement(a)).value();
      if (pad_last && *pad_last != p) throw ProbeError("forged execution is inconsistent with the view");
      pad_last = p;
    }
    agg_pad[last][b] = *pad_last;
    if (FieldElement(pl.coefficients[0][b]) != FieldElement(target(last, b))) {
      throw ProbeError("forged constant term does not match the candidate's input");
    }
  }

  // Honest-honest pads: random everywhere except the edges to `last`, which
  // absorb what each honest participant still needs.
  std::map<ParticipantId, Bytes> need;  // XOR still owed by honest-honest pads
  for (auto h : honest) {
    Bytes r = agg_pad[h];
    for (auto a : v.coalition) xor_into(r, v.pads.at(dc::ordered_pair(h, a)));
    need[h] = std::move(r);
  }
  for (std::size_t i = 0; i < honest.size(); ++i) {
    for (std::size_t j = i + 1; j < honest.size(); ++j) {
      if (honest[j] == last) continue;
      Bytes pad(ell);
      for (auto& byte : pad) byte = random_byte();
      xor_into(need[honest[i]], pad);
      xor_into(need[honest[j]], pad);
      f.honest_pads[{honest[i], honest[j]}] = std::move(pad);
    }
  }
  for (auto h : honest) {
    if (h == last) continue;
    f.honest_pads[dc::ordered_pair(h, last)] = need[h];
    xor_into(need[last], need[h]);
  }
  if (!is_zero(need[last])) throw ProbeError("forged pads do not close");
  return f;
}

// Runs the round again with the coalition's true randomness and the forged
// honest randomness and returns what the same coalition would observe.
inline AttackerView replay(const AttackerView& v, const ForgedExecution& f) {
  sim::RoundRandomness r;
  for (const auto& [a, p] : v.polynomials) r.polynomials[a] = p;
  for (const auto& [h, p] : f.honest_polynomials) r.polynomials[h] = p;
  for (const auto& [key, pad] : v.pads) r.pair_pads[key] = pad;
  for (const auto& [key, pad] : f.honest_pads) r.pair_pads[key] = pad;

  sim::GroupConfig cfg;
  cfg.n = v.n;
  cfg.k = v.k;
  cfg.ell = v.ell;
  cfg.timing = sim::ComputeTiming::modeled;
  const bool silent = is_zero(f.message);
  const auto t = sim::execute_round(cfg, sim::Mode::shared, v.round,
                                    silent ? std::nullopt : std::optional<ParticipantId>(f.sender), f.message, &r);
  return extract_coalition_view(t, v.coalition);
}

// What a coalition one member larger than the tolerated k-1 obtains.
struct ThresholdWall {
  std::size_t coalition_size = 0;
  std::optional<Bytes> decoded;  // message recovered from the coalition's own shares
  // Rank of each honest participant's difference rows over its k-1
  // non-constant coefficients; k-1 means those coefficients are fixed.
  std::vector<std::size_t> block_ranks;
  // Non-constant coefficients per honest participant for byte 0, when unique.
  std::map<ParticipantId, std::vector<FieldElement>> recovered;
};

inline ThresholdWall threshold_wall(const sim::RoundTranscript& t, std::vector<ParticipantId> coalition) {
  const AttackerView v = extract_coalition_view(t, std::move(coalition));
  ThresholdWall w;
  w.coalition_size = v.coalition.size();

  std::vector<sharing::Share> own;
  for (auto a : v.coalition) own.push_back(*t.outputs.at(a - 1).share);
  if (own.size() >= v.k) w.decoded = sharing::join(own, sharing::SharingPolicy{v.n, v.k});

  const std::size_t c = v.coalition.size();
  for (auto h : v.honest()) {
    if (v.k < 2 || c < 2) {
      w.block_ranks.push_back(0);
      continue;
    }
    FieldMatrix block(c - 1, v.k - 1);
    std::vector<FieldElement> rhs(c - 1);
    for (std::size_t r = 0; r + 1 < c; ++r) {
      const FieldElement xa(v.coalition[r]);
      const FieldElement xb(v.coalition[r + 1]);
      for (std::size_t d = 1; d < v.k; ++d) {
        block.at(r, d - 1) = gf256::pow(xa, static_cast<unsigned>(d)) + gf256::pow(xb, static_cast<unsigned>(d));
      }
      rhs[r] = FieldElement(static_cast<std::uint8_t>(v.distribution.at({h, v.coalition[r]})[0] ^
                                                      v.distribution.at({h, v.coalition[r + 1]})[0]));
    }
    w.block_ranks.push_back(gf256::rank(block));
    if (auto x = gf256::solve_unique(block, rhs)) w.recovered[h] = std::move(*x);
  }
  return w;
}

struct ProbeReportRow {
  std::size_t n = 0;
  std::size_t k = 0;
  std::size_t rows = 0;
  std::size_t unknowns = 0;
  std::size_t rank = 0;            // largest rank seen
  std::size_t free_variables = 0;  // smallest count seen
  std::size_t transcripts = 0;
  std::size_t forge_attempts = 0;
  std::size_t forge_successes = 0;
  // k = 2 leaves no difference rows; the system is the p_remains row alone.
  bool single_row() const { return k == 2; }
};

// Simulates `transcripts` rounds with a random honest sender and a random
// coalition of k-1, analyses every byte position and forges every honest
// candidate.
inline ProbeReportRow probe_parameters(std::size_t n, std::size_t k, std::size_t transcripts, std::uint64_t seed,
                                       std::size_t ell = 4) {
  if (k < 2 || k > n) throw ConfigError("the probe needs 2 <= k <= n");
  ProbeReportRow row;
  row.n = n;
  row.k = k;
  row.free_variables = static_cast<std::size_t>(-1);
  std::mt19937_64 rng(seed ^ (n << 16) ^ (k << 8));
  for (std::size_t trial = 0; trial < transcripts; ++trial) {
    std::vector<ParticipantId> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = static_cast<ParticipantId>(i + 1);
    std::shuffle(order.begin(), order.end(), rng);
    const ParticipantId sender = order[0];
    std::vector<ParticipantId> coalition(order.begin() + 1, order.begin() + static_cast<std::ptrdiff_t>(k));

    sim::GroupConfig cfg;
    cfg.n = n;
    cfg.k = k;
    cfg.ell = ell;
    cfg.master_seed = rng();
    cfg.timing = sim::ComputeTiming::modeled;
    Bytes msg(ell);
    for (auto& b : msg) b = static_cast<std::uint8_t>(rng());
    const auto t = sim::run_round(cfg, sender, msg, sim::Mode::shared, static_cast<dc::RoundIndex>(trial));

    const AttackerView view = extract_view(t, coalition);
    for (std::size_t b = 0; b < ell; ++b) {
      const Analysis a = analyze(build_system(view, b));
      row.rows = a.rows;
      row.unknowns = a.unknowns;
      row.rank = std::max(row.rank, a.rank);
      row.free_variables = std::min(row.free_variables, a.free_variables);
    }
    for (auto candidate : view.honest()) {
      ++row.forge_attempts;
      try {
        if (replay(view, forge(view, candidate, view.message, rng)) == view) ++row.forge_successes;
      } catch (const Error&) {
      }
    }
    ++row.transcripts;
  }
  return row;
}

inline std::string probe_csv(const std::vector<ProbeReportRow>& rows) {
  std::ostringstream os;
  os << "n,k,rows,unknowns,rank,free_variables,transcripts,forge_attempts,forge_successes,note\n";
  for (const auto& r : rows) {
    os << r.n << ',' << r.k << ',' << r.rows << ',' << r.unknowns << ',' << r.rank << ',' << r.free_variables << ','
       << r.transcripts << ',' << r.forge_attempts << ',' << r.forge_successes << ','
       << (r.single_row() ? "single_row" : "") << '\n';
  }
  return os.str();
}

}  // namespace shared_dining::probe
