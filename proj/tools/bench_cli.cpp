// Throughput sweeps over a simulated group; CSV on stdout or --out.

#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "shared_dining/bench.hpp"

using namespace shared_dining;

int main(int argc, char** argv) {
  CLI::App app{"Shared-dining throughput benchmark"};
  bench::ExperimentSpec spec;
  std::string mode = "shared";
  std::string sweep;
  std::string out;
  bool modeled = false;

  app.add_option("--mode", mode, "classic or shared")->capture_default_str();
  app.add_option("--n", spec.n, "participants")->capture_default_str();
  app.add_option("--k", spec.k, "threshold")->capture_default_str();
  app.add_option("--ell", spec.ell, "slot length in octets")->capture_default_str();
  app.add_option("--payload", spec.payload, "octets delivered per run")->capture_default_str();
  app.add_option("--delay-ms", spec.delay_ms, "link delay")->capture_default_str();
  app.add_option("--runs", spec.runs, "measured runs per point")->capture_default_str();
  app.add_option("--warmup", spec.warmup, "discarded runs per point")->capture_default_str();
  app.add_option("--seed", spec.seed, "master seed")->capture_default_str();
  app.add_option("--sweep", sweep, "<var>=<v1,v2,...> with var in ell,n,k,payload,delay-ms");
  app.add_option("--out", out, "CSV path (default stdout)");
  app.add_flag("--wall-clock", spec.wall_clock, "summed step time instead of the virtual clock");
  app.add_flag("--modeled", modeled, "deterministic operation-count cost model for compute time");
  CLI11_PARSE(app, argc, argv);

  try {
    spec.mode = sim::parse_mode(mode);
    if (!sweep.empty()) std::tie(spec.sweep, spec.sweep_values) = bench::parse_sweep(sweep);
    if (modeled) spec.timing = sim::ComputeTiming::modeled;
    if (spec.sweep == bench::SweepVariable::none) {
      // A single point must be valid; sweeps skip bad points instead.
      sim::GroupConfig cfg;
      cfg.n = spec.n;
      cfg.k = spec.k;
      cfg.ell = spec.ell;
      cfg.latency.delay_ms = spec.delay_ms;
      cfg.validate();
    }
    const auto results = bench::run_experiment(spec, &std::cerr);
    const std::string csv = bench::emit_csv(results);
    if (out.empty()) {
      std::cout << csv;
    } else {
      std::ofstream f(out);
      if (!f) throw ConfigError("cannot write " + out);
      f << csv;
    }
  } catch (const ConfigError& e) {
    std::cerr << "sd_bench: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    std::cerr << "sd_bench: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
