#include "sherk/schemes.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sherk/error.hpp"
#include "sherk/exp_operators.hpp"

namespace sherk {

std::string_view to_string(Scheme s) {
  switch (s) {
    case Scheme::ERK22: return "erk22";
    case Scheme::ERKGeneral: return "erk_general";
    case Scheme::ETD1: return "etd1";
    case Scheme::ETDRK2: return "etdrk2";
    case Scheme::IMEX1: return "imex1";
    case Scheme::IMEXRK22: return "imexrk22";
  }
  return "?";
}

Scheme parse_scheme(std::string_view name) {
  for (auto s : {Scheme::ERK22, Scheme::ERKGeneral, Scheme::ETD1, Scheme::ETDRK2, Scheme::IMEX1,
                 Scheme::IMEXRK22}) {
    if (to_string(s) == name) return s;
  }
  throw InvalidArgumentError("unknown scheme '" + std::string(name) + "'");
}

int scheme_order(Scheme s) {
  return (s == Scheme::ETD1 || s == Scheme::IMEX1) ? 1 : 2;
}

namespace {

bool is_imex(Scheme s) { return s == Scheme::IMEX1 || s == Scheme::IMEXRK22; }

}  // namespace

void SchemeConfig::validate() const {
  const bool kappa_ok = is_imex(scheme) ? kappa >= 0.0 : kappa > 0.0;
  if (!kappa_ok || !std::isfinite(kappa)) {
    throw InvalidArgumentError("invalid stabilization parameter kappa = " + std::to_string(kappa));
  }
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw InvalidArgumentError("epsilon must be positive");
  }
  if (!(tau > 0.0) || !std::isfinite(tau)) {
    throw InvalidArgumentError("time step must be positive");
  }
  if (scheme == Scheme::ERKGeneral && !(c1 > 0.0 && c1 <= 1.0)) {
    throw InvalidArgumentError("tableau parameter c1 must lie in (0, 1]");
  }
  if (scheme == Scheme::IMEXRK22 && !(imex_gamma > 0.0 && std::isfinite(imex_gamma))) {
    throw InvalidArgumentError("IMEX gamma must be positive");
  }
}

RealField n_kappa(const RealField& u, double kappa, double epsilon) {
  RealField out(u.grid_ptr());
  auto in = u.values();
  auto o = out.values();
  for (std::size_t i = 0; i < in.size(); ++i) {
    const double v = in[i];
    o[i] = kappa * v - (v * v * v - epsilon * v);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Per-mode factor tables, with z = tau * Lambda:
//   ERK22       a = e^{-z/2}, b = (tau/2) phi1(z/2), c = e^{-z}, d = tau phi1(z)
//   ERKGeneral  a = e^{-c1 z}, b = tau c1 phi1(c1 z), c = e^{-z},
//               d = tau/(2 c1) phi1(z), e = tau (1 - 1/(2 c1)) phi1(z)
//   ETD1        c = e^{-z}, d = tau phi1(z)
//   ETDRK2      c = e^{-z}, d = tau phi1(z), a = tau (phi1 - phi2)(z), b = tau phi2(z)
//   IMEX1       a = 1 / (1 + z)
//   IMEXRK22    a = 1 / (1 + gamma z), b = (1 - gamma) z

Integrator::Integrator(Grid grid, SchemeConfig config)
    : grid_(std::move(grid)), config_(config) {
  config_.validate();
  auto lam = grid_->lambda();
  const std::size_t n = lam.size();
  lk_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double d = lam[i] - 1.0;
    lk_[i] = d * d + config_.kappa;
  }
  const double tau = config_.tau;
  a_.assign(n, 0.0);
  b_.assign(n, 0.0);
  c_.assign(n, 0.0);
  d_.assign(n, 0.0);
  e_.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double z = tau * lk_[i];
    switch (config_.scheme) {
      case Scheme::ERK22:
        a_[i] = phi(0, 0.5 * z);
        b_[i] = 0.5 * tau * phi(1, 0.5 * z);
        c_[i] = phi(0, z);
        d_[i] = tau * phi(1, z);
        break;
      case Scheme::ERKGeneral: {
        const double c1 = config_.c1;
        a_[i] = phi(0, c1 * z);
        b_[i] = tau * c1 * phi(1, c1 * z);
        c_[i] = phi(0, z);
        d_[i] = tau * (1.0 / (2.0 * c1)) * phi(1, z);
        e_[i] = tau * (1.0 - 1.0 / (2.0 * c1)) * phi(1, z);
        break;
      }
      case Scheme::ETD1:
        c_[i] = phi(0, z);
        d_[i] = tau * phi(1, z);
        break;
      case Scheme::ETDRK2: {
        const double p1 = phi(1, z);
        const double p2 = phi(2, z);
        c_[i] = phi(0, z);
        d_[i] = tau * p1;
        a_[i] = tau * (p1 - p2);
        b_[i] = tau * p2;
        break;
      }
      case Scheme::IMEX1:
        a_[i] = 1.0 / (1.0 + z);
        break;
      case Scheme::IMEXRK22:
        a_[i] = 1.0 / (1.0 + config_.imex_gamma * z);
        b_[i] = (1.0 - config_.imex_gamma) * z;
        break;
    }
  }
}

void Integrator::nonlinear_hat(const RealField& u, SpectralField& out) const {
  if (!config_.nonlinearity) {
    std::fill(out.coeffs().begin(), out.coeffs().end(), std::complex<double>{});
    return;
  }
  // Copy into the existing storage: callers hold spans over out.coeffs().
  const SpectralField f = forward(n_kappa(u, config_.kappa, config_.epsilon));
  std::ranges::copy(f.coeffs(), out.coeffs().begin());
}

double Integrator::step(SimState& state) const {
  require_same_grid(*grid_, state.u.grid());
  const double tau = config_.tau;
  const SpectralField u_hat = forward(state.u);
  SpectralField n0(grid_), n1(grid_), s1(grid_), s2(grid_);
  nonlinear_hat(state.u, n0);

  auto U = u_hat.coeffs();
  auto N0 = n0.coeffs();
  auto N1 = n1.coeffs();
  auto S1 = s1.coeffs();
  auto S2 = s2.coeffs();
  const std::size_t n = U.size();
  double stage_max = norm_linf(state.u);

  auto intermediate = [&]() {
    RealField u1 = inverse(s1);
    stage_max = std::max(stage_max, norm_linf(u1));
    nonlinear_hat(u1, n1);
  };

  switch (config_.scheme) {
    case Scheme::ERK22:
      for (std::size_t i = 0; i < n; ++i) S1[i] = a_[i] * U[i] + b_[i] * N0[i];
      intermediate();
      for (std::size_t i = 0; i < n; ++i) S2[i] = c_[i] * U[i] + d_[i] * N1[i];
      break;
    case Scheme::ERKGeneral:
      for (std::size_t i = 0; i < n; ++i) S1[i] = a_[i] * U[i] + b_[i] * N0[i];
      intermediate();
      for (std::size_t i = 0; i < n; ++i) S2[i] = c_[i] * U[i] + (e_[i] * N0[i] + d_[i] * N1[i]);
      break;
    case Scheme::ETD1:
      for (std::size_t i = 0; i < n; ++i) S2[i] = c_[i] * U[i] + d_[i] * N0[i];
      break;
    case Scheme::ETDRK2:
      for (std::size_t i = 0; i < n; ++i) S1[i] = c_[i] * U[i] + d_[i] * N0[i];
      intermediate();
      for (std::size_t i = 0; i < n; ++i) S2[i] = c_[i] * U[i] + (a_[i] * N0[i] + b_[i] * N1[i]);
      break;
    case Scheme::IMEX1:
      for (std::size_t i = 0; i < n; ++i) S2[i] = a_[i] * (U[i] + tau * N0[i]);
      break;
    case Scheme::IMEXRK22: {
      const double gamma = config_.imex_gamma;
      const double delta = imex_delta(gamma);
      for (std::size_t i = 0; i < n; ++i) S1[i] = a_[i] * (U[i] + (gamma * tau) * N0[i]);
      intermediate();
      for (std::size_t i = 0; i < n; ++i) {
        const auto explicit_part = tau * (delta * N0[i] + (1.0 - delta) * N1[i]);
        S2[i] = a_[i] * (U[i] + explicit_part - b_[i] * S1[i]);
      }
      break;
    }
  }

  RealField next = inverse(s2);
  const std::int64_t index = state.step + 1;
  if (!next.is_finite()) {
    throw BlowUpError(index, index * tau);
  }
  stage_max = std::max(stage_max, norm_linf(next));
  state.u = std::move(next);
  state.step = index;
  state.t = index * tau;
  return stage_max;
}

namespace {

SimState step_with(Scheme scheme, const SimState& state, SchemeConfig config) {
  config.scheme = scheme;
  Integrator integrator(state.u.grid_ptr(), config);
  SimState next = state;
  integrator.step(next);
  return next;
}

}  // namespace

SimState step_erk22(const SimState& s, const SchemeConfig& c) { return step_with(Scheme::ERK22, s, c); }
SimState step_erk_general(const SimState& s, const SchemeConfig& c) {
  return step_with(Scheme::ERKGeneral, s, c);
}
SimState step_etd1(const SimState& s, const SchemeConfig& c) { return step_with(Scheme::ETD1, s, c); }
SimState step_etdrk2(const SimState& s, const SchemeConfig& c) {
  return step_with(Scheme::ETDRK2, s, c);
}
SimState step_imex1(const SimState& s, const SchemeConfig& c) { return step_with(Scheme::IMEX1, s, c); }
SimState step_imexrk22(const SimState& s, const SchemeConfig& c) {
  return step_with(Scheme::IMEXRK22, s, c);
}

std::int64_t step_count(double final_time, double tau) {
  if (!(final_time >= 0.0) || !(tau > 0.0)) {
    throw InvalidArgumentError("step count needs T >= 0 and tau > 0");
  }
  const double ratio = final_time / tau;
  const double nearest = std::round(ratio);
  if (std::abs(ratio - nearest) <= 1e-9 * std::max(1.0, nearest)) {
    return static_cast<std::int64_t>(nearest);
  }
  return static_cast<std::int64_t>(std::ceil(ratio));
}

RunResult run(const RealField& initial, const SchemeConfig& config, const RunOptions& options) {
  if (options.trace_every < 1) throw InvalidArgumentError("trace cadence must be >= 1 step");
  if (options.snapshot_every < 0) throw InvalidArgumentError("snapshot cadence must be >= 0");
  const std::int64_t steps = step_count(options.final_time, config.tau);
  Integrator integrator(initial.grid_ptr(), config);

  RunResult result{SimState(initial),
                   EnergyTrace(TraceHeader{std::string(to_string(config.scheme)), config.kappa,
                                           config.epsilon, config.tau}),
                   {}};
  SimState& state = result.final_state;

  auto sample = [&]() {
    const EnergySample s = measure(state.u, config.epsilon, state.step, state.t);
    result.trace.append(s);
    if (options.on_sample) options.on_sample(s);
  };
  auto snapshot = [&]() {
    Snapshot snap{state.step, state.t, state.u};
    if (options.on_snapshot) {
      options.on_snapshot(snap);
    } else {
      result.snapshots.push_back(std::move(snap));
    }
  };

  result.trace.note_stage_linf(norm_linf(state.u));
  sample();
  if (options.snapshot_every > 0) snapshot();

  for (std::int64_t k = 1; k <= steps; ++k) {
    result.trace.note_stage_linf(integrator.step(state));
    const bool last = k == steps;
    if (last || k % options.trace_every == 0) sample();
    if (options.snapshot_every > 0 && (last || k % options.snapshot_every == 0)) snapshot();
  }
  return result;
}

}  // namespace sherk
