#pragma once

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "shared_dining/bytes.hpp"
#include "shared_dining/dc_core.hpp"
#include "shared_dining/errors.hpp"
#include "shared_dining/random.hpp"
#include "shared_dining/secret_sharing.hpp"

// Discrete-event simulation of one group. Participants run in lockstep
// phases; a virtual clock advances by each step's compute time and by the
// configured link delay for every network hop.
namespace shared_dining::sim {

using dc::ParticipantId;
using dc::RoundIndex;
using sharing::Polynomial;
using sharing::Share;

enum class Mode { classic, shared };

inline const char* to_string(Mode m) { return m == Mode::classic ? "classic" : "shared"; }

inline Mode parse_mode(const std::string& s) {
  if (s == "classic") return Mode::classic;
  if (s == "shared") return Mode::shared;
  throw ConfigError("unknown mode '" + s + "', expected classic or shared");
}

// measured: wall-clock duration of each participant step.
// modeled: a fixed cost per counted operation; fully deterministic.
enum class ComputeTiming { measured, modeled };

struct LatencyModel {
  double delay_ms = 0.0;  // every point-to-point delivery

  friend bool operator==(const LatencyModel&, const LatencyModel&) = default;
};

struct CostModel {
  double ns_per_mul = 1.0;
  double ns_per_add = 0.25;
  double ns_per_pad_byte = 1.0;
  double ns_per_step = 500.0;

  double step_ms(const OpCount& ops) const {
    return (ns_per_step + ns_per_mul * static_cast<double>(ops.mul) + ns_per_add * static_cast<double>(ops.add) +
            ns_per_pad_byte * static_cast<double>(ops.pad_bytes)) /
           1e6;
  }

  friend bool operator==(const CostModel&, const CostModel&) = default;
};

struct GroupConfig {
  std::size_t n = 3;
  std::size_t k = 2;
  std::size_t ell = 16;
  LatencyModel latency;
  std::uint64_t master_seed = 0;
  std::optional<dc::PairSeeds> pair_seeds;  // derived from master_seed when absent
  ComputeTiming timing = ComputeTiming::measured;
  CostModel cost;

  dc::GroupParams params() const { return dc::GroupParams{n, k, ell}; }

  void validate() const {
    if (n < 1 || n > sharing::kMaxParticipants) {
      throw ConfigError("participant count must be in 1..255, got " + std::to_string(n));
    }
    if (k < 1 || k > n) {
      throw ConfigError("threshold must satisfy 1 <= k <= n, got n=" + std::to_string(n) + " k=" + std::to_string(k));
    }
    if (ell < 1) throw ConfigError("slot length must be at least one octet");
    if (!(latency.delay_ms >= 0.0)) throw ConfigError("link delay must be non-negative");
  }

  Seed master() const { return seed_from_u64(master_seed); }

  dc::PairSeeds effective_pair_seeds() const {
    return pair_seeds ? *pair_seeds : dc::PairSeeds::derive(n, master());
  }

  // Polynomial randomness of one participant: its own seed, one stream per round.
  Seed participant_seed(ParticipantId i) const { return derive_seed(master(), "participant", i); }

  friend bool operator==(const GroupConfig&, const GroupConfig&) = default;
};

enum class MessageKind { broadcast, distribution, combine };

inline const char* to_string(MessageKind k) {
  switch (k) {
    case MessageKind::broadcast: return "broadcast";
    case MessageKind::distribution: return "distribution";
    case MessageKind::combine: return "combine";
  }
  return "?";
}

inline MessageKind parse_message_kind(const std::string& s) {
  if (s == "broadcast") return MessageKind::broadcast;
  if (s == "distribution") return MessageKind::distribution;
  if (s == "combine") return MessageKind::combine;
  throw InputError("unknown message kind '" + s + "'");
}

struct WireRecord {
  MessageKind kind = MessageKind::distribution;
  RoundIndex round = 0;
  ParticipantId from = 0;
  ParticipantId to = 0;
  double send_ms = 0.0;
  double recv_ms = 0.0;
  Bytes payload;  // ell octets, or the share wire form for combine messages

  friend bool operator==(const WireRecord&, const WireRecord&) = default;
};

// Everything random in one round. pair_pads is keyed by (i, j) with i < j.
struct RoundRandomness {
  std::map<ParticipantId, Polynomial> polynomials;
  std::map<std::pair<ParticipantId, ParticipantId>, Bytes> pair_pads;

  friend bool operator==(const RoundRandomness&, const RoundRandomness&) = default;
};

struct ParticipantOutput {
  ParticipantId index = 0;
  std::optional<Share> share;  // shared mode: the collected share
  Bytes message;               // classic: m_out; shared: the reconstruction
  double finish_ms = 0.0;

  friend bool operator==(const ParticipantOutput&, const ParticipantOutput&) = default;
};

struct RoundTranscript {
  GroupConfig config;
  Mode mode = Mode::shared;
  RoundIndex round = 0;
  std::optional<ParticipantId> sender;
  Bytes input;
  RoundRandomness randomness;
  std::vector<WireRecord> messages;
  std::vector<ParticipantOutput> outputs;  // outputs[i-1] belongs to participant i
  double compute_ms = 0.0;                 // sum of all step durations

  std::size_t count(MessageKind kind) const {
    return static_cast<std::size_t>(
        std::count_if(messages.begin(), messages.end(), [kind](const WireRecord& r) { return r.kind == kind; }));
  }

  friend bool operator==(const RoundTranscript&, const RoundTranscript&) = default;
};

namespace detail {

template <typename Step>
double timed_step(const GroupConfig& cfg, double& compute_total, Step&& step) {
  OpCount ops;
  double ms = 0.0;
  if (cfg.timing == ComputeTiming::measured) {
    const auto t0 = std::chrono::steady_clock::now();
    step(ops);
    const auto t1 = std::chrono::steady_clock::now();
    ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  } else {
    step(ops);
    ms = cfg.cost.step_ms(ops);
  }
  compute_total += ms;
  return ms;
}

// Charged like derived pads so replays cost the same under the cost model.
inline dc::PadSet pads_from(const RoundRandomness& r, ParticipantId self, std::size_t n, std::size_t ell, OpCount& ops) {
  dc::PadSet pads;
  for (std::size_t j = 1; j <= n; ++j) {
    if (j == self) continue;
    auto it = r.pair_pads.find(dc::ordered_pair(self, static_cast<ParticipantId>(j)));
    if (it == r.pair_pads.end()) {
      throw InputError("fixed randomness lacks the pad for {" + std::to_string(self) + "," + std::to_string(j) + "}");
    }
    pads.emplace(static_cast<ParticipantId>(j), it->second);
  }
  ops.pad_bytes += (n - 1) * ell;
  return pads;
}

inline void record_pads(RoundRandomness& r, ParticipantId self, const dc::PadSet& pads) {
  for (const auto& [peer, pad] : pads) {
    auto key = dc::ordered_pair(self, peer);
    auto [it, inserted] = r.pair_pads.emplace(key, pad);
    if (!inserted && it->second != pad) {
      throw ProtocolError("pads of " + std::to_string(key.first) + " and " + std::to_string(key.second) + " disagree");
    }
  }
}

inline double barrier(const std::vector<double>& finished, const std::vector<WireRecord>& msgs, std::size_t first) {
  double t = finished.empty() ? 0.0 : *std::max_element(finished.begin(), finished.end());
  for (std::size_t m = first; m < msgs.size(); ++m) t = std::max(t, msgs[m].recv_ms);
  return t;
}

}  // namespace detail

// Runs one round for every participant. With `fixed` the polynomials and
// pads are taken from it instead of being drawn from the configured seeds;
// this is how alternative executions are replayed.
inline RoundTranscript execute_round(const GroupConfig& cfg, Mode mode, RoundIndex round,
                                     std::optional<ParticipantId> sender, ByteView message,
                                     const RoundRandomness* fixed = nullptr) {
  cfg.validate();
  const std::size_t n = cfg.n;
  const double delay = cfg.latency.delay_ms;
  const dc::GroupParams params = cfg.params();

  if (sender && (*sender < 1 || *sender > n)) throw InputError("sender index out of range");
  if (sender && message.size() != cfg.ell) {
    throw InputError("message has " + std::to_string(message.size()) + " octets, slot length is " +
                     std::to_string(cfg.ell));
  }

  RoundTranscript t;
  t.config = cfg;
  t.mode = mode;
  t.round = round;
  t.sender = sender;
  t.input = sender ? Bytes(message.begin(), message.end()) : Bytes(cfg.ell, 0);

  std::vector<dc::ParticipantState> states(n);
  {
    const dc::PairSeeds seeds = fixed ? dc::PairSeeds{} : cfg.effective_pair_seeds();
    for (std::size_t i = 1; i <= n; ++i) {
      auto& st = states[i - 1];
      st.index = static_cast<ParticipantId>(i);
      st.params = params;
      if (!fixed) st.pads = dc::PadSource::for_participant(st.index, n, seeds);
      st.message = (sender && *sender == i) ? t.input : Bytes(cfg.ell, 0);
    }
  }

  std::vector<dc::Inbox> inbox(n);
  std::vector<double> phase_end(n, 0.0);

  // Emit.
  for (std::size_t i = 1; i <= n; ++i) {
    const auto& st = states[i - 1];
    const auto self = st.index;
    if (mode == Mode::classic) {
      dc::ClassicEmission e;
      phase_end[i - 1] = detail::timed_step(cfg, t.compute_ms, [&](OpCount& ops) {
        if (fixed) {
          st.check();
          e.pads = detail::pads_from(*fixed, self, n, cfg.ell, ops);
          e.message = dc::classic_message(st.message, dc::aggregate_pad(e.pads, cfg.ell, &ops), &ops);
        } else {
          e = dc::classic_emit(st, round, &ops);
        }
      });
      detail::record_pads(t.randomness, self, e.pads);
      inbox[i - 1][self] = e.message;
      for (std::size_t j = 1; j <= n; ++j) {
        if (j == i) continue;
        const double send = phase_end[i - 1];
        t.messages.push_back(WireRecord{MessageKind::broadcast, round, self, static_cast<ParticipantId>(j), send,
                                        send + delay, e.message});
        inbox[j - 1][self] = e.message;
      }
    } else {
      dc::SharedEmission e;
      const Seed poly_seed = fixed ? Seed{} : cfg.participant_seed(self);
      phase_end[i - 1] = detail::timed_step(cfg, t.compute_ms, [&](OpCount& ops) {
        if (fixed) {
          st.check();
          auto it = fixed->polynomials.find(self);
          if (it == fixed->polynomials.end()) {
            throw InputError("fixed randomness lacks the polynomial of " + std::to_string(self));
          }
          if (it->second.terms() != cfg.k || it->second.length() != cfg.ell || it->second.constant() != st.message) {
            throw InputError("fixed polynomial of " + std::to_string(self) + " does not share its input");
          }
          e.polynomial = it->second;
          e.pads = detail::pads_from(*fixed, self, n, cfg.ell, ops);
          e.pad = dc::aggregate_pad(e.pads, cfg.ell, &ops);
          e.messages = dc::assemble_shared(e.polynomial, e.pad, n, &ops);
        } else {
          ChaChaRng rng(poly_seed, round);
          e = dc::shared_emit(st, round, rng, &ops);
        }
      });
      detail::record_pads(t.randomness, self, e.pads);
      t.randomness.polynomials.emplace(self, e.polynomial);
      inbox[i - 1][self] = e.messages[i - 1];
      for (std::size_t j = 1; j <= n; ++j) {
        if (j == i) continue;
        const double send = phase_end[i - 1];
        t.messages.push_back(WireRecord{MessageKind::distribution, round, self, static_cast<ParticipantId>(j), send,
                                        send + delay, e.messages[j - 1]});
        inbox[j - 1][self] = std::move(e.messages[j - 1]);
      }
    }
  }

  // Collect.
  const double collect_start = detail::barrier(phase_end, t.messages, 0);
  t.outputs.resize(n);
  for (std::size_t j = 1; j <= n; ++j) {
    auto& out = t.outputs[j - 1];
    out.index = static_cast<ParticipantId>(j);
    const double ms = detail::timed_step(cfg, t.compute_ms, [&](OpCount& ops) {
      if (mode == Mode::classic) {
        out.message = dc::classic_output(out.index, params, inbox[j - 1], &ops);
      } else {
        out.share = dc::shared_collect(out.index, params, inbox[j - 1], &ops);
      }
    });
    phase_end[j - 1] = collect_start + ms;
    out.finish_ms = phase_end[j - 1];
  }
  if (mode == Mode::classic) return t;

  // Combine: every participant hands its share to the next k-1 on the ring,
  // then reconstructs from its own share plus the k-1 it received.
  const std::size_t first_combine = t.messages.size();
  std::vector<std::vector<Share>> received(n);
  for (std::size_t j = 1; j <= n; ++j) {
    for (ParticipantId target : dc::combine_targets(j, n, cfg.k)) {
      const double send = phase_end[j - 1];
      t.messages.push_back(WireRecord{MessageKind::combine, round, static_cast<ParticipantId>(j), target, send,
                                      send + delay, sharing::encode_share(*t.outputs[j - 1].share)});
      received[target - 1].push_back(*t.outputs[j - 1].share);
    }
  }
  const double combine_start = detail::barrier(phase_end, t.messages, first_combine);
  for (std::size_t j = 1; j <= n; ++j) {
    auto& out = t.outputs[j - 1];
    const double ms = detail::timed_step(cfg, t.compute_ms, [&](OpCount& ops) {
      out.message = dc::reconstruct(*out.share, received[j - 1], params.policy(), &ops);
    });
    out.finish_ms = combine_start + ms;
  }
  return t;
}

inline RoundTranscript run_round(const GroupConfig& cfg, std::optional<ParticipantId> sender, ByteView message,
                                 Mode mode, RoundIndex round = 0) {
  return execute_round(cfg, mode, round, sender, message, nullptr);
}

// Virtual time from round start until the last participant finished.
inline double virtual_elapsed(const RoundTranscript& t) {
  double end = 0.0;
  for (const auto& o : t.outputs) end = std::max(end, o.finish_ms);
  return end;
}

// One JSON object per line:
// {"round":..,"kind":..,"send_ms":..,"recv_ms":..,"from":..,"to":..,"payload_hex":".."}
inline void write_transcript(std::ostream& os, const RoundTranscript& t) {
  for (const auto& m : t.messages) {
    nlohmann::ordered_json j;
    j["round"] = m.round;
    j["kind"] = to_string(m.kind);
    j["send_ms"] = m.send_ms;
    j["recv_ms"] = m.recv_ms;
    j["from"] = m.from;
    j["to"] = m.to;
    j["payload_hex"] = to_hex(m.payload);
    os << j.dump() << '\n';
  }
}

inline std::vector<WireRecord> read_transcript_records(std::istream& is) {
  std::vector<WireRecord> out;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      WireRecord r;
      r.round = j.at("round").get<RoundIndex>();
      r.kind = j.contains("kind") ? parse_message_kind(j.at("kind").get<std::string>()) : MessageKind::distribution;
      r.send_ms = j.at("send_ms").get<double>();
      r.recv_ms = j.at("recv_ms").get<double>();
      r.from = j.at("from").get<ParticipantId>();
      r.to = j.at("to").get<ParticipantId>();
      r.payload = from_hex(j.at("payload_hex").get<std::string>());
      out.push_back(std::move(r));
    } catch (const nlohmann::json::exception& e) {
      throw InputError(std::string("malformed transcript line: ") + e.what());
    }
  }
  return out;
}

}  // namespace shared_dining::sim
