#include "sherk/energy.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "sherk/error.hpp"

namespace sherk {

EnergyParts energy(const RealField& u, double epsilon) {
  const GridSpec& g = u.grid();
  const SpectralField c = forward(u);
  auto coeffs = c.coeffs();
  auto lam = g.lambda();
  double spectral = 0.0;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    const double d = 1.0 - lam[i];
    spectral += d * d * std::norm(coeffs[i]);
  }
  EnergyParts e;
  e.linear = 0.5 * g.area() * spectral;

  double q = 0.0;
  for (double v : u.values()) {
    const double v2 = v * v;
    q += 0.25 * v2 * v2 - 0.5 * epsilon * v2;
  }
  const double h = g.spacing();
  e.nonlinear = h * h * q;
  e.total = e.linear + e.nonlinear;
  return e;
}

EnergySample measure(const RealField& u, double epsilon, std::int64_t step, double t) {
  const EnergyParts e = energy(u, epsilon);
  return EnergySample{step, t, e.total, e.linear, e.nonlinear, norm_l2(u), norm_linf(u)};
}

void EnergyTrace::append(const EnergySample& sample) {
  if (!samples_.empty() && !(sample.t > samples_.back().t)) {
    throw InvalidArgumentError("trace samples must have strictly increasing time");
  }
  samples_.push_back(sample);
}

double kappa_rule(double beta, double epsilon) {
  if (!(beta >= 0.0) || !(epsilon > 0.0)) {
    throw InvalidArgumentError("kappa rule needs beta >= 0 and epsilon > 0");
  }
  // |3 xi^2 - eps| on [0, beta] peaks at an endpoint.
  const double inner = std::max(std::abs(3.0 * beta * beta - epsilon), epsilon) / 2.0;
  return std::max(inner, 1.0);
}

StabilityBounds stability_bounds(double initial_energy, double domain_area, double sobolev_constant,
                                 double epsilon) {
  if (!(domain_area > 0.0) || !(sobolev_constant > 0.0) || !(epsilon > 0.0)) {
    throw InvalidArgumentError("stability bounds need positive area, Sobolev constant and epsilon");
  }
  if (!(initial_energy + domain_area > 0.0)) {
    throw InvalidArgumentError("stability bounds need E0 + |Omega| > 0");
  }
  StabilityBounds b;
  b.energy_bound = initial_energy;
  b.c0 = 2.0 * std::sqrt(initial_energy + domain_area);
  b.linf_u = 2.0 * sobolev_constant * b.c0;
  b.linf_stage = 2.0 * std::numbers::sqrt2 * sobolev_constant * b.c0;
  b.linf_next = 2.0 * std::numbers::sqrt3 * sobolev_constant * b.c0;
  b.kappa = kappa_rule(b.linf_next, epsilon);

  const double c1_4 = std::pow(b.linf_stage, 4);
  b.tau_max = std::min({1.0 / 256.0, 1.0 / (64.0 * c1_4), 1.0 / std::sqrt(64.0 * b.kappa),
                        1.0 / (4.0 * b.linf_u * b.linf_u * std::sqrt(b.kappa))});
  return b;
}

MonotoneReport check_monotone(const EnergyTrace& trace, double rel_tol) {
  MonotoneReport report;
  const auto& s = trace.samples();
  for (std::size_t i = 1; i < s.size(); ++i) {
    const double before = s[i - 1].energy;
    const double after = s[i].energy;
    if (after - before > rel_tol * std::max(1.0, std::abs(before))) {
      report.violations.push_back({i, before, after});
    }
  }
  return report;
}

}  // namespace sherk
