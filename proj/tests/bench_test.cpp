#include <gtest/gtest.h>

#include <algorithm>
#include <sstream>

#include "shared_dining/bench.hpp"

using namespace shared_dining;
using namespace shared_dining::bench;

namespace {

// Minimal CSV reader written against the documented header, independent of
// emit_csv's formatting code.
std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    for (;;) {
      const auto comma = line.find(',', start);
      cells.push_back(line.substr(start, comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    rows.push_back(cells);
  }
  return rows;
}

ExperimentSpec quick(sim::Mode mode) {
  ExperimentSpec s;
  s.mode = mode;
  s.n = 4;
  s.k = 2;
  s.ell = 64;
  s.payload = 200;
  s.runs = 2;
  s.warmup = 0;
  s.timing = sim::ComputeTiming::modeled;
  return s;
}

}  // namespace

TEST(RunExperiment, EllSweepHasElevenRows) {
  ExperimentSpec s = quick(sim::Mode::shared);
  s.n = 10;
  s.k = 3;
  s.payload = 8192;
  s.runs = 1;
  s.sweep = SweepVariable::ell;
  s.sweep_values = {32, 64, 128, 256, 512, 1024, 2048, 4096, 8192, 16384, 32768};
  const auto r = run_experiment(s);
  ASSERT_EQ(r.size(), 11u);
  for (std::size_t i = 0; i < r.size(); ++i) {
    EXPECT_EQ(r[i].ell, static_cast<std::size_t>(s.sweep_values[i]));
    EXPECT_GT(r[i].mean_kBps, 0.0);
    EXPECT_EQ(r[i].std_kBps, 0.0);
  }
}

TEST(RunExperiment, KSweepHasEightRows) {
  ExperimentSpec s = quick(sim::Mode::shared);
  s.n = 10;
  s.ell = 8192;
  s.payload = 8192;
  s.runs = 1;
  s.sweep = SweepVariable::k;
  s.sweep_values = {3, 4, 5, 6, 7, 8, 9, 10};
  const auto r = run_experiment(s);
  ASSERT_EQ(r.size(), 8u);
  EXPECT_EQ(r.front().k, 3u);
  EXPECT_EQ(r.back().k, 10u);
}

TEST(RunExperiment, ReproducibleUnderModeledTiming) {
  for (auto mode : {sim::Mode::classic, sim::Mode::shared}) {
    ExperimentSpec s = quick(mode);
    s.runs = 1;
    s.seed = 77;
    const auto a = run_experiment(s);
    const auto b = run_experiment(s);
    ASSERT_EQ(a.size(), 1u);
    EXPECT_EQ(a[0].mean_kBps, b[0].mean_kBps);
    EXPECT_EQ(emit_csv(a), emit_csv(b));
  }
}

TEST(RunExperiment, DelayedThroughputMatchesHopCount) {
  // 200 octets fit one 256-octet slot; a shared round crosses the network
  // twice, so throughput is just under 200/1024 kB per 0.2 s.
  ExperimentSpec s = quick(sim::Mode::shared);
  s.ell = 256;
  s.delay_ms = 100;
  const auto r = run_experiment(s);
  ASSERT_EQ(r.size(), 1u);
  const double bound = 200.0 / kBytesPerKB / 0.2;
  EXPECT_LT(r[0].mean_kBps, bound);
  EXPECT_GT(r[0].mean_kBps, 0.99 * bound);
}

TEST(RunExperiment, SlotSizedPayloadTakesOneRound) {
  ExperimentSpec s = quick(sim::Mode::shared);
  s.ell = 200;
  s.delay_ms = 100;
  const auto one = run_experiment(s);
  EXPECT_GT(one[0].mean_kBps, 0.99 * 200.0 / kBytesPerKB / 0.2);
  // One octet more no longer fits with the length prefix: two framed rounds.
  s.payload = 197;
  const auto two = run_experiment(s);
  EXPECT_LT(two[0].mean_kBps, 197.0 / kBytesPerKB / 0.4);
}

TEST(RunExperiment, SharedSlowerThanClassicWithoutDelay) {
  const auto c = run_experiment(quick(sim::Mode::classic));
  const auto s = run_experiment(quick(sim::Mode::shared));
  EXPECT_GT(c[0].mean_kBps, s[0].mean_kBps);
}

TEST(RunExperiment, InvalidSweepPointsSkipped) {
  ExperimentSpec s = quick(sim::Mode::shared);
  s.sweep = SweepVariable::k;
  s.sweep_values = {2, 9, 0, 3, 2.5};
  std::ostringstream diag;
  const auto r = run_experiment(s, &diag);
  ASSERT_EQ(r.size(), 2u);
  EXPECT_EQ(r[0].k, 2u);
  EXPECT_EQ(r[1].k, 3u);
  EXPECT_NE(diag.str().find("skipping sweep value 9"), std::string::npos);
  EXPECT_NE(diag.str().find("skipping sweep value 0"), std::string::npos);
  EXPECT_NE(diag.str().find("skipping sweep value 2.5"), std::string::npos);
}

TEST(RunExperiment, SpecErrors) {
  ExperimentSpec s = quick(sim::Mode::shared);
  s.runs = 0;
  EXPECT_THROW(run_experiment(s), ConfigError);
  s = quick(sim::Mode::shared);
  s.payload = 0;
  EXPECT_THROW(run_experiment(s), ConfigError);
  s = quick(sim::Mode::shared);
  s.sweep = SweepVariable::n;
  EXPECT_THROW(run_experiment(s), ConfigError);
}

TEST(RunExperiment, WallClockUsesSummedCompute) {
  ExperimentSpec s = quick(sim::Mode::shared);
  s.runs = 1;
  const auto virt = run_experiment(s);
  s.wall_clock = true;
  const auto wall = run_experiment(s);
  // Summed step time is at least the critical path, so throughput drops.
  EXPECT_LT(wall[0].mean_kBps, virt[0].mean_kBps);
}

TEST(EmitCsv, HeaderOnlyAndOneRow) {
  EXPECT_EQ(emit_csv({}), "mode,n,k,ell,payload,delay_ms,runs,throughput_kBps_mean,throughput_kBps_std\n");
  ExperimentResult r{sim::Mode::classic, 10, 3, 8192, 8192, 100, 10, 12.5, 0.25};
  const auto text = emit_csv({r});
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 2);
  EXPECT_EQ(text.back(), '\n');
}

TEST(EmitCsv, ParseRoundTrip) {
  ExperimentSpec s = quick(sim::Mode::shared);
  s.sweep = SweepVariable::delay_ms;
  s.sweep_values = {0, 0.5, 100};
  const auto results = run_experiment(s);
  const auto rows = parse_csv(emit_csv(results));
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0].size(), 9u);
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& row = rows[i + 1];
    ASSERT_EQ(row.size(), 9u);
    EXPECT_EQ(row[0], "shared");
    EXPECT_EQ(std::stoul(row[1]), results[i].n);
    EXPECT_EQ(std::stoul(row[2]), results[i].k);
    EXPECT_EQ(std::stoul(row[3]), results[i].ell);
    EXPECT_EQ(std::stoul(row[4]), results[i].payload);
    EXPECT_DOUBLE_EQ(std::stod(row[5]), results[i].delay_ms);
    EXPECT_EQ(std::stoul(row[6]), results[i].runs);
    EXPECT_NEAR(std::stod(row[7]), results[i].mean_kBps, 1e-8 * results[i].mean_kBps);
    EXPECT_NEAR(std::stod(row[8]), results[i].std_kBps, 1e-8 * results[i].mean_kBps);
  }
}

TEST(ParseSweep, ValuesAndErrors) {
  const auto [var, values] = parse_sweep("ell=32,64,1e3");
  EXPECT_EQ(var, SweepVariable::ell);
  EXPECT_EQ(values, (std::vector<double>{32, 64, 1000}));
  EXPECT_EQ(parse_sweep("delay-ms=0,100").first, SweepVariable::delay_ms);
  EXPECT_THROW(parse_sweep("ell"), ConfigError);
  EXPECT_THROW(parse_sweep("width=3"), ConfigError);
  EXPECT_THROW(parse_sweep("n=3,x"), ConfigError);
  EXPECT_THROW(parse_sweep("n="), ConfigError);
}
