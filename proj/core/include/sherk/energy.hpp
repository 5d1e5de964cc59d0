#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sherk/grid.hpp"

namespace sherk {

/// E_N = E_c + E_e with E_c = 1/2 ||(Delta_N + I) u||^2 and
/// E_e = <u^4/4 - eps u^2/2, 1>.
struct EnergyParts {
  double total = 0.0;
  double linear = 0.0;
  double nonlinear = 0.0;
};

/// E_c is summed in Fourier space with the symbol (1 - lambda)^2, E_e by grid
/// quadrature.
EnergyParts energy(const RealField& u, double epsilon);

struct EnergySample {
  std::int64_t step = 0;
  double t = 0.0;
  double energy = 0.0;
  double linear = 0.0;
  double nonlinear = 0.0;
  double l2 = 0.0;
  double linf = 0.0;
};

EnergySample measure(const RealField& u, double epsilon, std::int64_t step, double t);

struct TraceHeader {
  std::string scheme;
  double kappa = 0.0;
  double epsilon = 0.0;
  double tau = 0.0;
};

class EnergyTrace {
 public:
  EnergyTrace() = default;
  explicit EnergyTrace(TraceHeader header) : header_(std::move(header)) {}

  /// Throws InvalidArgumentError unless t is strictly larger than the last sample's.
  void append(const EnergySample& sample);

  const TraceHeader& header() const noexcept { return header_; }
  const std::vector<EnergySample>& samples() const noexcept { return samples_; }
  std::size_t size() const noexcept { return samples_.size(); }

  /// Running maximum of ||u||_inf over every Runge-Kutta stage seen so far.
  double stage_linf_max() const noexcept { return stage_linf_max_; }
  void note_stage_linf(double v) noexcept {
    if (v > stage_linf_max_) stage_linf_max_ = v;
  }

 private:
  TraceHeader header_;
  std::vector<EnergySample> samples_;
  double stage_linf_max_ = 0.0;
};

/// kappa = max( max_{|xi| <= beta} |3 xi^2 - eps| / 2, 1 ).
double kappa_rule(double beta, double epsilon);

struct StabilityBounds {
  double energy_bound = 0.0;  // C_e
  double c0 = 0.0;            // 2 sqrt(C_e + |Omega|)
  double linf_u = 0.0;        // C~_0 = 2 C^ C_0
  double linf_stage = 0.0;    // C~_1 = 2 sqrt(2) C^ C_0
  double linf_next = 0.0;     // C~_2 = 2 sqrt(3) C^ C_0
  double kappa = 0.0;
  double tau_max = 0.0;
};

/// Stabilization parameter and global time-step constraint
///   tau <= min{1/256, C~_1^{-4}/64, (64 kappa)^{-1/2}, C~_0^{-2} kappa^{-1/2} / 4}
/// for a given initial energy. The Sobolev constant C^ has no closed form and
/// is supplied by the caller.
StabilityBounds stability_bounds(double initial_energy, double domain_area, double sobolev_constant,
                                 double epsilon);

struct MonotoneViolation {
  std::size_t index = 0;  // sample index of the later point
  double before = 0.0;
  double after = 0.0;
};

struct MonotoneReport {
  std::vector<MonotoneViolation> violations;
  bool dissipative() const noexcept { return violations.empty(); }
};

/// Flags every i with E[i] - E[i-1] > rel_tol * max(1, |E[i-1]|).
MonotoneReport check_monotone(const EnergyTrace& trace, double rel_tol);

}  // namespace sherk
