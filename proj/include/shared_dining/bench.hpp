#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <locale>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "shared_dining/bytes.hpp"
#include "shared_dining/errors.hpp"
#include "shared_dining/framing.hpp"
#include "shared_dining/random.hpp"
#include "shared_dining/sim_net.hpp"

// Throughput experiments: parameter sweeps over the simulated group.
namespace shared_dining::bench {

inline constexpr double kBytesPerKB = 1024.0;

enum class SweepVariable { none, ell, n, k, payload, delay_ms };

inline SweepVariable parse_sweep_variable(const std::string& s) {
  if (s.empty()) return SweepVariable::none;
  if (s == "ell" || s == "l") return SweepVariable::ell;
  if (s == "n") return SweepVariable::n;
  if (s == "k") return SweepVariable::k;
  if (s == "payload") return SweepVariable::payload;
  if (s == "delay_ms" || s == "delay-ms" || s == "delay") return SweepVariable::delay_ms;
  throw ConfigError("unknown sweep variable '" + s + "'");
}

struct ExperimentSpec {
  sim::Mode mode = sim::Mode::shared;
  SweepVariable sweep = SweepVariable::none;
  std::vector<double> sweep_values;
  std::size_t n = 10;
  std::size_t k = 3;
  std::size_t ell = 8192;
  std::size_t payload = 8192;
  double delay_ms = 0.0;
  std::size_t runs = 10;
  std::size_t warmup = 100;
  std::uint64_t seed = 1;
  // Use the summed step durations instead of the virtual clock.
  bool wall_clock = false;
  sim::ComputeTiming timing = sim::ComputeTiming::measured;

  void validate() const {
    if (runs < 1) throw ConfigError("runs must be at least 1");
    if (payload < 1) throw ConfigError("payload must be at least one octet");
    if (sweep != SweepVariable::none && sweep_values.empty()) throw ConfigError("sweep has no values");
  }
};

struct ExperimentResult {
  sim::Mode mode = sim::Mode::shared;
  std::size_t n = 0;
  std::size_t k = 0;
  std::size_t ell = 0;
  std::size_t payload = 0;
  double delay_ms = 0.0;
  std::size_t runs = 0;
  double mean_kBps = 0.0;
  double std_kBps = 0.0;
};

struct PointParams {
  std::size_t n, k, ell, payload;
  double delay_ms;
};

namespace detail {

inline std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

inline std::size_t as_count(double v, const char* what) {
  if (!(v >= 0) || v != std::floor(v)) throw ConfigError(std::string(what) + " must be a non-negative integer");
  return static_cast<std::size_t>(v);
}

}  // namespace detail

inline PointParams point_params(const ExperimentSpec& spec, double value) {
  PointParams p{spec.n, spec.k, spec.ell, spec.payload, spec.delay_ms};
  switch (spec.sweep) {
    case SweepVariable::none: break;
    case SweepVariable::ell: p.ell = detail::as_count(value, "ell"); break;
    case SweepVariable::n: p.n = detail::as_count(value, "n"); break;
    case SweepVariable::k: p.k = detail::as_count(value, "k"); break;
    case SweepVariable::payload: p.payload = detail::as_count(value, "payload"); break;
    case SweepVariable::delay_ms: p.delay_ms = value; break;
  }
  return p;
}

// Sends one payload through the group and returns the throughput in kB/s.
// A payload of exactly one slot goes out as is; anything else is framed into
// as many rounds as needed. Every participant's output is checked against
// the payload.
inline double measure_once(const PointParams& p, sim::Mode mode, std::uint64_t run_seed, bool wall_clock,
                           sim::ComputeTiming timing) {
  sim::GroupConfig cfg;
  cfg.n = p.n;
  cfg.k = p.k;
  cfg.ell = p.ell;
  cfg.latency.delay_ms = p.delay_ms;
  cfg.master_seed = run_seed;
  cfg.timing = timing;
  cfg.validate();
  cfg.pair_seeds = cfg.effective_pair_seeds();

  ChaChaRng rng(derive_seed(seed_from_u64(run_seed), "workload"));
  Bytes payload(p.payload);
  rng.fill(payload);
  const auto sender = static_cast<dc::ParticipantId>(1 + rng() % p.n);
  const bool framed = p.payload != p.ell;
  const auto chunks = framed ? dc::frame(payload, p.ell) : std::vector<Bytes>{payload};

  double elapsed_ms = 0.0;
  std::vector<std::vector<Bytes>> delivered(p.n);
  for (std::size_t c = 0; c < chunks.size(); ++c) {
    const auto t = sim::run_round(cfg, sender, chunks[c], mode, static_cast<dc::RoundIndex>(c));
    elapsed_ms += wall_clock ? t.compute_ms : sim::virtual_elapsed(t);
    for (std::size_t i = 0; i < p.n; ++i) delivered[i].push_back(t.outputs[i].message);
  }
  for (std::size_t i = 0; i < p.n; ++i) {
    if ((framed ? dc::unframe(delivered[i]) : delivered[i].front()) != payload) {
      throw ProtocolError("participant " + std::to_string(i + 1) + " did not receive the payload");
    }
  }
  if (elapsed_ms <= 0.0) throw ProtocolError("round finished in zero time");
  return static_cast<double>(p.payload) / kBytesPerKB / (elapsed_ms / 1000.0);
}

inline std::vector<ExperimentResult> run_experiment(const ExperimentSpec& spec, std::ostream* diagnostics = nullptr) {
  spec.validate();
  std::vector<double> values = spec.sweep_values;
  if (spec.sweep == SweepVariable::none) values = {0.0};

  std::vector<ExperimentResult> out;
  for (std::size_t point = 0; point < values.size(); ++point) {
    PointParams p;
    try {
      p = point_params(spec, values[point]);
      sim::GroupConfig probe;
      probe.n = p.n;
      probe.k = p.k;
      probe.ell = p.ell;
      probe.latency.delay_ms = p.delay_ms;
      probe.validate();
      if (p.payload < 1) throw ConfigError("payload must be at least one octet");
    } catch (const ConfigError& e) {
      if (diagnostics) *diagnostics << "skipping sweep value " << values[point] << ": " << e.what() << '\n';
      continue;
    }

    const std::uint64_t point_seed = detail::splitmix(spec.seed ^ detail::splitmix(point + 1));
    for (std::size_t w = 0; w < spec.warmup; ++w) {
      measure_once(p, spec.mode, detail::splitmix(point_seed ^ (0x5741524Dull + w)), spec.wall_clock, spec.timing);
    }
    std::vector<double> samples;
    for (std::size_t r = 0; r < spec.runs; ++r) {
      samples.push_back(measure_once(p, spec.mode, detail::splitmix(point_seed + r), spec.wall_clock, spec.timing));
    }

    double mean = 0.0;
    for (double s : samples) mean += s;
    mean /= static_cast<double>(samples.size());
    double var = 0.0;
    for (double s : samples) var += (s - mean) * (s - mean);
    const double stddev = samples.size() > 1 ? std::sqrt(var / static_cast<double>(samples.size() - 1)) : 0.0;

    out.push_back(ExperimentResult{spec.mode, p.n, p.k, p.ell, p.payload, p.delay_ms, samples.size(), mean, stddev});
  }
  return out;
}

inline constexpr const char* kCsvHeader = "mode,n,k,ell,payload,delay_ms,runs,throughput_kBps_mean,throughput_kBps_std";

inline std::string emit_csv(const std::vector<ExperimentResult>& results) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os.precision(10);
  os << kCsvHeader << '\n';
  for (const auto& r : results) {
    os << sim::to_string(r.mode) << ',' << r.n << ',' << r.k << ',' << r.ell << ',' << r.payload << ',' << r.delay_ms
       << ',' << r.runs << ',' << r.mean_kBps << ',' << r.std_kBps << '\n';
  }
  return os.str();
}

// "ell=32,64,128" -> variable and values
inline std::pair<SweepVariable, std::vector<double>> parse_sweep(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos) throw ConfigError("sweep must look like <var>=<v1,v2,...>");
  const SweepVariable var = parse_sweep_variable(text.substr(0, eq));
  std::vector<double> values;
  std::istringstream is(text.substr(eq + 1));
  is.imbue(std::locale::classic());
  std::string item;
  while (std::getline(is, item, ',')) {
    if (item.empty()) continue;
    std::istringstream num(item);
    num.imbue(std::locale::classic());
    double v = 0;
    if (!(num >> v) || !num.eof()) throw ConfigError("sweep value '" + item + "' is not a number");
    values.push_back(v);
  }
  if (values.empty()) throw ConfigError("sweep has no values");
  return {var, values};
}

}  // namespace shared_dining::bench
