// Coalition analysis report: system shape, rank and forge results per (n, k).

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "shared_dining/security_probe.hpp"

using namespace shared_dining;

int main(int argc, char** argv) {
  CLI::App app{"Shared-dining coalition probe"};
  std::size_t n = 7;
  std::size_t k = 4;
  std::size_t transcripts = 20;
  std::size_t ell = 4;
  std::uint64_t seed = 1;
  std::string out;
  std::string dump;
  bool all = false;

  app.add_option("--n", n, "participants")->capture_default_str();
  app.add_option("--k", k, "threshold")->capture_default_str();
  app.add_option("--ell", ell, "slot length of the probed rounds")->capture_default_str();
  app.add_option("--transcripts", transcripts, "simulated rounds per point")->capture_default_str();
  app.add_option("--seed", seed, "master seed")->capture_default_str();
  app.add_option("--out", out, "CSV path (default stdout)");
  app.add_option("--dump-transcript", dump, "write one probed round as JSON lines to this path");
  app.add_flag("--all", all, "every n in 4..10 and k in 2..n-1");
  CLI11_PARSE(app, argc, argv);

  try {
    std::vector<probe::ProbeReportRow> rows;
    if (all) {
      for (std::size_t nn = 4; nn <= 10; ++nn)
        for (std::size_t kk = 2; kk < nn; ++kk) rows.push_back(probe::probe_parameters(nn, kk, transcripts, seed, ell));
    } else {
      rows.push_back(probe::probe_parameters(n, k, transcripts, seed, ell));
    }

    if (!dump.empty()) {
      sim::GroupConfig cfg;
      cfg.n = n;
      cfg.k = k;
      cfg.ell = ell;
      cfg.master_seed = seed;
      cfg.timing = sim::ComputeTiming::modeled;
      std::ofstream f(dump);
      if (!f) throw ConfigError("cannot write " + dump);
      sim::write_transcript(f, sim::run_round(cfg, 1, Bytes(ell, 0x42), sim::Mode::shared));
    }

    const std::string csv = probe::probe_csv(rows);
    if (out.empty()) {
      std::cout << csv;
    } else {
      std::ofstream f(out);
      if (!f) throw ConfigError("cannot write " + out);
      f << csv;
    }
    for (const auto& r : rows) {
      if (r.forge_successes != r.forge_attempts) {
        std::cerr << "sd_probe: forging failed for n=" << r.n << " k=" << r.k << '\n';
        return 1;
      }
    }
  } catch (const ConfigError& e) {
    std::cerr << "sd_probe: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    std::cerr << "sd_probe: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
