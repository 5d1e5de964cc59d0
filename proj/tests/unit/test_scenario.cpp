#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "sherk/error.hpp"
#include "sherk/io.hpp"
#include "sherk/scenario.hpp"

using namespace sherk;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "sherk_scenario_tests" / name;
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(is), {}};
}

}  // namespace

TEST(InitialData, Examples) {
  const auto c = preset_config(ScenarioId::Convergence, Preset::Desk);
  auto g = make_grid(c.length, c.n);
  EXPECT_DOUBLE_EQ(initial_data(ScenarioId::Convergence, g, 1)(0, 0), 0.04);

  auto ge = make_grid(100.0, 128);
  EXPECT_DOUBLE_EQ(initial_data(ScenarioId::EnergyStability, ge, 1)(0, 0), 0.1);

  auto gp = make_grid(500.0, 256);
  const RealField u = initial_data(ScenarioId::Polycrystal, gp, 1);
  EXPECT_EQ(u(0, 0), kPolycrystalBackground);
  EXPECT_EQ(u(128, 10), kPolycrystalBackground);
  // Point (375, 125) is the centre of the first nucleus: h = 500/256.
  const int p = static_cast<int>(375.0 / gp->spacing());
  const int q = static_cast<int>(125.0 / gp->spacing());
  EXPECT_NE(u(p, q), kPolycrystalBackground);
  EXPECT_LE(std::abs(u(p, q) - kPolycrystalBackground), 0.1);
  int perturbed = 0;
  for (double v : u.values()) perturbed += v != kPolycrystalBackground;
  // Three 10 x 10 squares at h = 1.953125 cover 5 x 5 or 6 x 6 points each.
  EXPECT_GE(perturbed, 3 * 25);
  EXPECT_LE(perturbed, 3 * 36);
}

TEST(ScenarioConfig, JsonRoundTrip) {
  auto c = preset_config(ScenarioId::Polycrystal, Preset::Paper);
  c.kappa.reset();
  c.beta = 0.8;
  c.seed = 18446744073709551615ULL;
  c.scheme = Scheme::IMEXRK22;
  const auto back = ScenarioConfig::from_json(c.to_json());
  EXPECT_EQ(back.to_json(), c.to_json());
  EXPECT_FALSE(back.kappa.has_value());
  EXPECT_EQ(back.seed, c.seed);
  EXPECT_EQ(back.n, 512);
}

TEST(ScenarioConfig, AutoKappa) {
  const auto c = ScenarioConfig::from_json(R"({"kappa": "auto", "beta": 1.0, "epsilon": 0.25})");
  EXPECT_EQ(c.resolved_kappa(), kappa_rule(1.0, 0.25));
  EXPECT_EQ(c.scheme_config().kappa, 1.375);
}

TEST(ScenarioConfig, RejectsBadInput) {
  EXPECT_THROW(ScenarioConfig::from_json("{"), ConfigError);
  EXPECT_THROW(ScenarioConfig::from_json(R"({"nonsense": 1})"), ConfigError);
  EXPECT_THROW(ScenarioConfig::from_json(R"({"N": "many"})"), ConfigError);
  EXPECT_THROW(ScenarioConfig::from_json(R"({"scheme": "rk4"})"), ConfigError);
  EXPECT_THROW(ScenarioConfig::from_json(R"({"scenario": "tsunami"})"), ConfigError);
  EXPECT_THROW(ScenarioConfig::from_json(R"({"kappa": "big"})"), ConfigError);
  auto c = preset_config(ScenarioId::Custom, Preset::Desk);
  c.n = 2;
  EXPECT_THROW(c.validate(), ConfigError);
  c = preset_config(ScenarioId::Custom, Preset::Desk);
  c.tau = -1;
  EXPECT_THROW(c.validate(), ConfigError);
}

TEST(RunScenario, ZeroTimeHasOneSample) {
  auto c = preset_config(ScenarioId::Custom, Preset::Desk);
  c.final_time = 0.0;
  c.output_dir = scratch("t0").string();
  const auto art = run_scenario(c);
  EXPECT_EQ(art.trace.size(), 1u);
  EXPECT_EQ(read_trace_csv(art.trace_csv).size(), 1u);
  const auto m = nlohmann::json::parse(slurp(art.manifest));
  EXPECT_EQ(m["status"], "complete");
  EXPECT_EQ(m["config"]["seed"], 1);
}

TEST(RunScenario, ReproducibleAndResumableFromSnapshot) {
  auto c = preset_config(ScenarioId::Custom, Preset::Desk);
  c.n = 32;
  c.final_time = 1.0;
  c.snapshot_every = 4;
  c.output_dir = scratch("rep_a").string();
  const auto a = run_scenario(c);
  c.output_dir = scratch("rep_b").string();
  const auto b = run_scenario(c);
  EXPECT_EQ(slurp(a.trace_csv), slurp(b.trace_csv));
  ASSERT_EQ(a.snapshots.size(), b.snapshots.size());
  EXPECT_EQ(a.snapshots.size(), 4u);  // steps 0, 4, 8, 10
  for (std::size_t i = 0; i < a.snapshots.size(); ++i) {
    EXPECT_EQ(slurp(a.snapshots[i]), slurp(b.snapshots[i]));
  }

  // A custom run from the final snapshot starts where the first one ended.
  auto d = c;
  d.initial_file = a.snapshots.back().string();
  d.final_time = 0.0;
  d.output_dir = scratch("rep_c").string();
  const auto r = run_scenario(d);
  EXPECT_EQ(r.trace.samples()[0].energy, a.trace.samples().back().energy);

  d.n = 64;
  EXPECT_THROW(run_scenario(d), ConfigError);
}

TEST(RunScenario, BlowUpLeavesManifest) {
  auto c = preset_config(ScenarioId::Custom, Preset::Desk);
  c.n = 16;
  c.custom_mean = 3.0;
  c.custom_amplitude = 1.0;
  c.scheme = Scheme::ETD1;
  c.kappa = 1e-6;
  c.tau = 5.0;
  c.final_time = 500.0;
  c.output_dir = scratch("blow").string();
  EXPECT_THROW(run_scenario(c), BlowUpError);
  const auto m = nlohmann::json::parse(slurp(fs::path(c.output_dir) / "manifest.json"));
  EXPECT_EQ(m["status"], "blow-up");
  EXPECT_GT(m["blow_up_step"].get<int>(), 0);
}

TEST(RunVerify, SmallSweep) {
  VerifyOptions o;
  o.sweep.grid_sizes = {8};
  o.sweep.fields_per_cell = 3;
  o.lipschitz_pairs = 10;
  o.h_points = 100;
  o.output_dir = scratch("verify").string();
  const auto r = run_verify(o);
  EXPECT_TRUE(r.passed());
  EXPECT_TRUE(fs::exists(fs::path(o.output_dir) / "verify_report.csv"));
  EXPECT_TRUE(fs::exists(fs::path(o.output_dir) / "verify_summary.txt"));
  o.sweep.kappas = {0.5};
  EXPECT_THROW(run_verify(o), InvalidArgumentError);
}
