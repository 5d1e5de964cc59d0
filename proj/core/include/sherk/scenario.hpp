#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sherk/energy.hpp"
#include "sherk/grid.hpp"
#include "sherk/schemes.hpp"
#include "sherk/verification.hpp"

namespace sherk {

enum class ScenarioId { Convergence, EnergyStability, Polycrystal, Custom };
enum class Preset { Desk, Paper };

std::string_view to_string(ScenarioId id);
std::string_view to_string(Preset p);
/// Throw ConfigError on unknown names.
ScenarioId parse_scenario(std::string_view name);
Preset parse_preset(std::string_view name);

/// Everything needed to reproduce one simulation.
struct ScenarioConfig {
  ScenarioId scenario = ScenarioId::EnergyStability;
  Preset preset = Preset::Desk;
  double length = 100.0;
  int n = 128;
  double epsilon = 0.25;
  std::optional<double> kappa = 2.0;  // nullopt means "auto"
  double beta = 1.0;                  // l-inf bound used by "auto"
  Scheme scheme = Scheme::ERK22;
  double c1 = 0.5;
  double imex_gamma = kImexGammaLower;
  double tau = 0.1;
  double final_time = 20.0;
  std::int64_t snapshot_every = 0;  // 0: initial and final snapshots only
  std::int64_t trace_every = 1;
  std::uint64_t seed = 1;
  std::string output_dir = "out";
  // Custom scenario only: an SHF1 file, or mean + amplitude * rand(x, y).
  std::string initial_file;
  double custom_mean = 0.0;
  double custom_amplitude = 0.1;

  double resolved_kappa() const;
  SchemeConfig scheme_config() const;
  /// Throws ConfigError.
  void validate() const;

  /// JSON text; kappa is written as "auto" when unresolved.
  std::string to_json() const;
  /// Starts from the preset named by the "scenario"/"preset" keys
  /// (energy_stability/desk when absent) and overrides every key present.
  /// Unknown keys are rejected.
  static ScenarioConfig from_json(std::string_view text);
};

/// Full-size experiment parameters (paper) or reduced, laptop-sized ones (desk).
ScenarioConfig preset_config(ScenarioId id, Preset preset);

/// Three square nuclei of side 10 on the polycrystal domain.
struct Nucleus {
  double cx, cy, alpha;
};
inline constexpr Nucleus kPolycrystalNuclei[] = {
    {375.0, 125.0, 0.1}, {375.0, 375.0, 0.2}, {125.0, 250.0, 0.4}};
inline constexpr double kNucleusSide = 10.0;
inline constexpr double kPolycrystalBackground = 0.287;

/// Initial condition of a scenario. rand(x, y) is uniform on [-1, 1) drawn
/// from CounterRng(seed) at the point's flat index. Polycrystal points inside
/// a nucleus ([cx - 5, cx + 5) x [cy - 5, cy + 5)) get 0.287 + alpha rand,
/// all others exactly 0.287.
RealField initial_data(ScenarioId id, const Grid& grid, std::uint64_t seed);
RealField initial_data(const ScenarioConfig& config, const Grid& grid);

struct RunArtifacts {
  std::filesystem::path trace_csv;
  std::filesystem::path manifest;
  std::vector<std::filesystem::path> snapshots;
  EnergyTrace trace;
  std::int64_t steps = 0;
};

/// Runs the scenario and writes trace.csv, snapshots/u_<step>.shf1 and
/// manifest.json under config.output_dir. The manifest is written before the
/// run (status "running") and rewritten at the end, so a blow-up leaves the
/// partial trace, the snapshots so far, and a manifest with status "blow-up".
RunArtifacts run_scenario(const ScenarioConfig& config);

struct VerifyOptions {
  SweepSpec sweep;
  double lipschitz_beta = 1.0;
  double lipschitz_epsilon = 0.25;
  int lipschitz_pairs = 200;
  int h_points = 10000;
  std::string output_dir = "verify";
};

struct VerifyResult {
  std::vector<CheckReport> reports;
  SobolevEstimate sobolev;
  bool passed() const;
};

/// Runs every inequality checker, writes verify_report.csv and
/// verify_summary.txt. Throws InvalidArgumentError on an invalid sweep
/// (including kappa < 1, which the G-operator bounds require).
VerifyResult run_verify(const VerifyOptions& options);

struct ConvergeOptions {
  ScenarioConfig scenario = preset_config(ScenarioId::Convergence, Preset::Desk);
  std::vector<double> taus;  // defaults to 2^-2 .. 2^-7
  double reference_tau = 0.0;  // defaults to 2^-10
  std::vector<Scheme> schemes{std::begin(kComparedSchemes), std::end(kComparedSchemes)};
};

/// Temporal-order study; writes convergence.csv and convergence_summary.txt.
std::vector<OrderReport> run_converge(const ConvergeOptions& options);

}  // namespace sherk
