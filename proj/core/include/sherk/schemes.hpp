#pragma once

#include <cstdint>
#include <functional>
#include <numbers>
#include <string_view>
#include <vector>

#include "sherk/energy.hpp"
#include "sherk/grid.hpp"

namespace sherk {

/// Time integrators for du/dt = -L_kappa u + N_kappa(u).
enum class Scheme { ERK22, ERKGeneral, ETD1, ETDRK2, IMEX1, IMEXRK22 };

std::string_view to_string(Scheme s);
/// Accepts "erk22", "erk_general", "etd1", "etdrk2", "imex1", "imexrk22".
Scheme parse_scheme(std::string_view name);

/// The five schemes compared in the experiments (ERKGeneral excluded).
inline constexpr Scheme kComparedSchemes[] = {Scheme::ERK22, Scheme::ETDRK2, Scheme::IMEXRK22,
                                              Scheme::ETD1, Scheme::IMEX1};

/// Nominal temporal order.
int scheme_order(Scheme s);

/// IMEX-RK(2,2) diagonal coefficient: the roots of gamma^2 - 2 gamma + 1/2 = 0,
/// both second order. The lower root keeps every stage inside the step and is
/// the default.
inline constexpr double kImexGammaLower = (2.0 - std::numbers::sqrt2) / 2.0;
inline constexpr double kImexGammaUpper = (2.0 + std::numbers::sqrt2) / 2.0;
/// Explicit weight paired with gamma.
constexpr double imex_delta(double gamma) { return (2.0 * gamma - 1.0) / (2.0 * gamma); }

struct SchemeConfig {
  Scheme scheme = Scheme::ERK22;
  double kappa = 2.0;
  double epsilon = 0.25;
  double tau = 0.1;
  double c1 = 0.5;  // only read by ERKGeneral
  double imex_gamma = kImexGammaLower;  // only read by IMEXRK22
  /// Test hook: when false N_kappa is replaced by zero.
  bool nonlinearity = true;

  /// Throws InvalidArgumentError. kappa must be positive, except that the
  /// IMEX schemes accept kappa = 0.
  void validate() const;
};

struct SimState {
  double t = 0.0;
  std::int64_t step = 0;
  RealField u;

  explicit SimState(RealField field, double time = 0.0, std::int64_t index = 0)
      : t(time), step(index), u(std::move(field)) {}
};

/// N_kappa(u) = kappa u - (u^3 - eps u), pointwise on the collocation grid.
RealField n_kappa(const RealField& u, double kappa, double epsilon);

/// Per-grid stepper with precomputed Fourier-space coefficients.
class Integrator {
 public:
  Integrator(Grid grid, SchemeConfig config);

  const SchemeConfig& config() const noexcept { return config_; }
  const GridSpec& grid() const noexcept { return *grid_; }

  /// Advances one step in place and returns max ||.||_inf over all stages
  /// (including the incoming and outgoing solution). Throws BlowUpError when
  /// the new solution is not finite; the state is left unchanged in that case.
  double step(SimState& state) const;

 private:
  void nonlinear_hat(const RealField& u, SpectralField& out) const;

  Grid grid_;
  SchemeConfig config_;
  std::vector<double> lk_;  // Lambda per mode
  // Scheme-specific per-mode factors; see the constructor.
  std::vector<double> a_, b_, c_, d_, e_;
};

SimState step_erk22(const SimState& state, const SchemeConfig& config);
SimState step_erk_general(const SimState& state, const SchemeConfig& config);
SimState step_etd1(const SimState& state, const SchemeConfig& config);
SimState step_etdrk2(const SimState& state, const SchemeConfig& config);
SimState step_imex1(const SimState& state, const SchemeConfig& config);
SimState step_imexrk22(const SimState& state, const SchemeConfig& config);

/// Number of steps that reach T: ceil(T / tau), treating ratios within 1e-9
/// of an integer as exact.
std::int64_t step_count(double final_time, double tau);

struct Snapshot {
  std::int64_t step = 0;
  double t = 0.0;
  RealField u;
};

struct RunOptions {
  double final_time = 0.0;
  /// Energy sample cadence in steps; the initial and final states are always sampled.
  std::int64_t trace_every = 1;
  /// Snapshot cadence in steps; 0 disables. Initial and final states included.
  std::int64_t snapshot_every = 0;
  /// When set, snapshots are handed here instead of being collected.
  std::function<void(const Snapshot&)> on_snapshot;
  std::function<void(const EnergySample&)> on_sample;
};

struct RunResult {
  SimState final_state;
  EnergyTrace trace;
  std::vector<Snapshot> snapshots;
};

/// Executes step_count(T, tau) steps from t = 0. Deterministic for identical
/// inputs. BlowUpError propagates with the offending step index.
RunResult run(const RealField& initial, const SchemeConfig& config, const RunOptions& options);

}  // namespace sherk
