#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "shared_dining/bytes.hpp"
#include "shared_dining/errors.hpp"
#include "shared_dining/gf256.hpp"
#include "shared_dining/random.hpp"
#include "shared_dining/secret_sharing.hpp"

// Participant-side transition functions of the classic dining-cryptographers
// round, the share-distributing round, and the ring combine step.
namespace shared_dining::dc {

using ParticipantId = std::uint8_t;  // 1..n
using RoundIndex = std::uint32_t;
using sharing::Polynomial;
using sharing::Share;
using sharing::SharingPolicy;

// Messages addressed to one participant, keyed by sender.
using Inbox = std::map<ParticipantId, Bytes>;
// Pairwise pads held by one participant for one round, keyed by peer.
using PadSet = std::map<ParticipantId, Bytes>;

struct GroupParams {
  std::size_t n = 1;
  std::size_t k = 1;
  std::size_t ell = 1;  // slot length in octets

  void validate() const {
    SharingPolicy{n, k}.validate();
    if (n < 1) throw ConfigError("group needs at least one participant");
    if (ell < 1) throw ConfigError("slot length must be at least one octet");
  }
  SharingPolicy policy() const { return SharingPolicy{n, k}; }

  friend bool operator==(const GroupParams&, const GroupParams&) = default;
};

inline std::pair<ParticipantId, ParticipantId> ordered_pair(ParticipantId a, ParticipantId b) {
  return a < b ? std::pair{a, b} : std::pair{b, a};
}

// Secret seed per unordered pair {i, j}.
class PairSeeds {
 public:
  static PairSeeds derive(std::size_t n, const Seed& master) {
    PairSeeds s;
    for (std::size_t i = 1; i <= n; ++i)
      for (std::size_t j = i + 1; j <= n; ++j)
        s.set(static_cast<ParticipantId>(i), static_cast<ParticipantId>(j), derive_seed(master, "pair", i, j));
    return s;
  }

  void set(ParticipantId a, ParticipantId b, const Seed& seed) {
    if (a == b) throw ConfigError("pair seed needs two distinct participants");
    seeds_[ordered_pair(a, b)] = seed;
  }

  const Seed* find(ParticipantId a, ParticipantId b) const {
    auto it = seeds_.find(ordered_pair(a, b));
    return it == seeds_.end() ? nullptr : &it->second;
  }

  friend bool operator==(const PairSeeds&, const PairSeeds&) = default;

 private:
  std::map<std::pair<ParticipantId, ParticipantId>, Seed> seeds_;
};

// The pair seeds one participant holds. A pad is the ChaCha20 keystream
// keyed by the pair seed with the round as nonce, so both ends of a pair
// derive the same bytes and every round gets a fresh stream.
class PadSource {
 public:
  PadSource() = default;
  PadSource(ParticipantId self, std::map<ParticipantId, Seed> peer_seeds)
      : self_(self), peer_seeds_(std::move(peer_seeds)) {}

  static PadSource for_participant(ParticipantId self, std::size_t n, const PairSeeds& pairs) {
    std::map<ParticipantId, Seed> mine;
    for (std::size_t j = 1; j <= n; ++j) {
      if (j == self) continue;
      const Seed* s = pairs.find(self, static_cast<ParticipantId>(j));
      if (!s) throw ConfigError("no pair seed for {" + std::to_string(self) + "," + std::to_string(j) + "}");
      mine.emplace(static_cast<ParticipantId>(j), *s);
    }
    return PadSource(self, std::move(mine));
  }

  ParticipantId self() const { return self_; }

  Bytes derive_pad(ParticipantId peer, RoundIndex round, std::size_t len) const {
    if (peer == self_) throw ConfigError("participant " + std::to_string(self_) + " has no pad with itself");
    auto it = peer_seeds_.find(peer);
    if (it == peer_seeds_.end()) {
      throw ConfigError("participant " + std::to_string(self_) + " shares no seed with " + std::to_string(peer));
    }
    Bytes pad(len);
    chacha_keystream(pad, it->second, round);
    return pad;
  }

  const std::map<ParticipantId, Seed>& peer_seeds() const { return peer_seeds_; }

 private:
  ParticipantId self_ = 0;
  std::map<ParticipantId, Seed> peer_seeds_;
};

struct ParticipantState {
  ParticipantId index = 0;
  GroupParams params;
  PadSource pads;
  Bytes message;  // all-zero when not sending

  void check() const {
    if (index < 1 || index > params.n) throw InputError("participant index out of range");
    if (message.size() != params.ell) {
      throw InputError("participant " + std::to_string(index) + " input has " + std::to_string(message.size()) +
                       " octets, slot length is " + std::to_string(params.ell));
    }
  }
};

inline PadSet derive_pads(const ParticipantState& st, RoundIndex round, OpCount* ops = nullptr) {
  PadSet pads;
  for (std::size_t j = 1; j <= st.params.n; ++j) {
    if (j == st.index) continue;
    pads.emplace(static_cast<ParticipantId>(j), st.pads.derive_pad(static_cast<ParticipantId>(j), round, st.params.ell));
  }
  if (ops) ops->pad_bytes += (st.params.n - 1) * st.params.ell;
  return pads;
}

// XOR of all pads of one participant.
inline Bytes aggregate_pad(const PadSet& pads, std::size_t len, OpCount* ops = nullptr) {
  Bytes out(len, 0);
  for (const auto& [peer, pad] : pads) xor_into(out, pad);
  if (ops) ops->add += pads.size() * len;
  return out;
}

struct ClassicEmission {
  PadSet pads;
  Bytes message;  // M_self, broadcast to everybody
};

inline Bytes classic_message(ByteView input, ByteView aggregate, OpCount* ops = nullptr) {
  Bytes out(input.begin(), input.end());
  xor_into(out, aggregate);
  if (ops) ops->add += out.size();
  return out;
}

inline ClassicEmission classic_emit(const ParticipantState& st, RoundIndex round, OpCount* ops = nullptr) {
  st.check();
  ClassicEmission e;
  e.pads = derive_pads(st, round, ops);
  e.message = classic_message(st.message, aggregate_pad(e.pads, st.params.ell, ops), ops);
  return e;
}

namespace detail {

inline Bytes xor_inbox(ParticipantId self, std::size_t n, std::size_t ell, const Inbox& inbox, OpCount* ops) {
  Bytes out(ell, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    auto it = inbox.find(static_cast<ParticipantId>(i));
    if (it == inbox.end()) {
      throw ProtocolError("participant " + std::to_string(self) + " is missing the message from " + std::to_string(i));
    }
    if (it->second.size() != ell) {
      throw ProtocolError("message from " + std::to_string(i) + " to " + std::to_string(self) + " has wrong length");
    }
    xor_into(out, it->second);
  }
  if (inbox.size() != n) throw ProtocolError("inbox of participant " + std::to_string(self) + " has unknown senders");
  if (ops) ops->add += n * ell;
  return out;
}

}  // namespace detail

// m_out: XOR over all n broadcast messages, the own one included.
inline Bytes classic_output(ParticipantId self, const GroupParams& params, const Inbox& inbox, OpCount* ops = nullptr) {
  return detail::xor_inbox(self, params.n, params.ell, inbox, ops);
}

struct SharedEmission {
  Polynomial polynomial;       // sharing polynomial of this participant's input
  PadSet pads;                 // pairwise pads for this round
  Bytes pad;                   // their XOR, one value for the whole round
  std::vector<Bytes> messages; // messages[i-1] goes to participant i
};

// M_{self,i} = share_i XOR pad. The same pad masks every recipient's message.
inline std::vector<Bytes> assemble_shared(const Polynomial& poly, ByteView pad, std::size_t n, OpCount* ops = nullptr) {
  std::vector<Bytes> out;
  out.reserve(n);
  for (std::size_t i = 1; i <= n; ++i) {
    Bytes m = sharing::evaluate(poly, gf256::FieldElement(static_cast<std::uint8_t>(i)), ops);
    xor_into(m, pad);
    out.push_back(std::move(m));
  }
  if (ops) ops->add += n * pad.size();
  return out;
}

template <sharing::RandomSource R>
SharedEmission shared_emit(const ParticipantState& st, RoundIndex round, R& rng, OpCount* ops = nullptr) {
  st.check();
  SharedEmission e;
  e.polynomial = sharing::random_polynomial(st.message, st.params.k, rng);
  e.pads = derive_pads(st, round, ops);
  e.pad = aggregate_pad(e.pads, st.params.ell, ops);
  e.messages = assemble_shared(e.polynomial, e.pad, st.params.n, ops);
  return e;
}

// The participant's share of the summed polynomial: XOR over all n messages
// addressed to it, including the one it made for itself.
inline Share shared_collect(ParticipantId self, const GroupParams& params, const Inbox& inbox, OpCount* ops = nullptr) {
  return Share{gf256::FieldElement(self), detail::xor_inbox(self, params.n, params.ell, inbox, ops)};
}

// The next k-1 participants on the ring 1..n.
inline std::vector<ParticipantId> combine_targets(std::size_t self, std::size_t n, std::size_t k) {
  if (self < 1 || self > n) throw InputError("combine_targets: index out of range");
  if (k > n) throw InputError("combine_targets: k exceeds n");
  std::vector<ParticipantId> out;
  for (std::size_t a = 1; a + 1 <= k; ++a) out.push_back(static_cast<ParticipantId>((self - 1 + a) % n + 1));
  return out;
}

// The k-1 ring predecessors whose shares arrive at self.
inline std::vector<ParticipantId> combine_sources(std::size_t self, std::size_t n, std::size_t k) {
  if (self < 1 || self > n) throw InputError("combine_sources: index out of range");
  if (k > n) throw InputError("combine_sources: k exceeds n");
  std::vector<ParticipantId> out;
  for (std::size_t a = 1; a + 1 <= k; ++a) out.push_back(static_cast<ParticipantId>((self - 1 + n - a) % n + 1));
  return out;
}

inline std::size_t distribution_message_count(std::size_t n) { return n * (n - 1); }
inline std::size_t combine_message_count(std::size_t n, std::size_t k) { return n * (k - 1); }

// Joins the own share with the received ones.
inline Bytes reconstruct(const Share& own, std::span<const Share> received, const SharingPolicy& policy,
                         OpCount* ops = nullptr) {
  if (received.size() + 1 < policy.k) {
    throw ThresholdError("reconstruction needs " + std::to_string(policy.k) + " shares, holding " +
                         std::to_string(received.size() + 1));
  }
  std::vector<Share> all;
  all.reserve(received.size() + 1);
  all.push_back(own);
  all.insert(all.end(), received.begin(), received.end());
  return sharing::join(all, policy, ops);
}

}  // namespace shared_dining::dc
