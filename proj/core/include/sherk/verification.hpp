#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "sherk/grid.hpp"
#include "sherk/schemes.hpp"

namespace sherk {

/// Grid of parameters over which the operator inequalities are sampled.
struct SweepSpec {
  std::vector<int> grid_sizes{8, 16, 32};
  std::vector<double> kappas{1.0, 2.0, 10.0};
  std::vector<double> taus{1e-3, 1e-1, 1.0};
  int fields_per_cell = 100;
  std::uint64_t seed = 20240601;
  double domain_length = 10.0;
  /// Grids up to this size are additionally sampled with white-noise fields.
  int rough_max_size = 16;

  /// Throws InvalidArgumentError on empty lists or non-positive entries.
  void validate() const;
};

enum class FieldKind { Smooth, Rough };

/// Unit-RMS random grid function. Smooth fields have every mode with
/// |l| or |m| >= N/3 removed; rough fields are white noise. Depends only on
/// (grid, seed, stream, kind).
RealField random_field(const Grid& grid, std::uint64_t seed, std::uint64_t stream, FieldKind kind);

/// Inequality slack: |abs| + rel * max(|big|, |small|).
struct Slack {
  double abs = 1e-12;
  double rel = 1e-11;
};

struct CheckSample {
  std::string check;
  std::string sample;
  double big = 0.0;    // side that must be >= the other
  double small = 0.0;
  double margin = 0.0;  // big - small
  bool violated = false;
};

struct CheckReport {
  std::string name;
  std::size_t samples = 0;
  std::size_t violations = 0;
  double worst_margin = std::numeric_limits<double>::infinity();
  std::string worst_sample;
  std::vector<CheckSample> entries;

  /// Records big >= small up to the slack.
  void record(const std::string& check, const std::string& sample, double big, double small,
              Slack slack = {});
  /// Records a boolean outcome (margin +1 or -1).
  void record_bool(const std::string& check, const std::string& sample, bool ok);
  bool passed() const noexcept { return violations == 0; }
  std::string summary() const;
};

/// ||G_i^{1/2} f|| <= ||f|| and ||G_{1,2}^{1/2} f|| <= ||f||.
CheckReport check_g_half_contraction(const SweepSpec& sweep);
/// Lower bounds of ||G_i^* f||^2 + ||G_i^** f||^2 and of the mixed
/// counterpart. Every kappa in the sweep must be >= 1.
CheckReport check_g_star_lower_bound(const SweepSpec& sweep);
/// The four semigroup inequalities with independent f and g, for i = 1, 2.
CheckReport check_semigroup_inequalities(const SweepSpec& sweep);
/// ||N_kappa(u) - N_kappa(v)|| <= 3 kappa ||u - v|| for fields clipped to
/// |u|, |v| <= beta with kappa = kappa_rule(beta, eps). `pairs` pairs are
/// spread round-robin over the sweep's grid sizes.
CheckReport check_lipschitz(const SweepSpec& sweep, double beta, double epsilon, int pairs = 200);
/// Per-mode bound Lambda >= lambda^2/4 + 2/3 + (kappa - 1), without slack.
CheckReport check_lambda_bound(const SweepSpec& sweep);
/// h1 < 0 and h2 <= 0 on `points` log-spaced arguments in [z_min, z_max],
/// plus the sign of h1 and h2 at tau * Lambda for every mode of the sweep.
/// Where h1 underflows the sign is certified through log(-h1).
CheckReport check_h_functions(const SweepSpec& sweep, int points = 10000, double z_min = 1e-10,
                              double z_max = 1e4);

/// ||f||_inf / (||f||_2 + ||Delta_N f||_2); negative when the field is zero.
double sobolev_ratio(const RealField& f);

struct SobolevEstimate {
  double c_hat = 0.0;
  std::vector<std::pair<int, double>> per_size;  // (N, max ratio)
};

/// Maximum ratio over smooth random trigonometric polynomials of fixed
/// degree, so the same functions are sampled on every grid size.
SobolevEstimate estimate_sobolev_constant(const SweepSpec& sweep);

/// Least-squares slope of log(error) against log(tau).
double fit_order(std::span<const double> taus, std::span<const double> errors);

struct OrderStudy {
  RealField initial;
  SchemeConfig base;  // kappa and epsilon; scheme and tau are overwritten
  double final_time = 0.0;
  std::vector<double> taus;  // strictly decreasing, successive ratio 2
  double reference_tau = 0.0;
  Scheme reference_scheme = Scheme::ERK22;

  void validate() const;
};

struct ReferenceSolution {
  RealField u;
  /// ||u(2 tau_ref) - u(tau_ref)|| / (2^p - 1), p the reference scheme order.
  double error_estimate = 0.0;
};

ReferenceSolution compute_reference(const OrderStudy& study);

struct OrderReport {
  Scheme scheme = Scheme::ERK22;
  std::vector<double> taus;
  std::vector<double> errors;
  std::vector<bool> included;
  std::vector<bool> blew_up;
  std::vector<double> interval_slopes;
  double slope = 0.0;
  double reference_error = 0.0;
};

/// Runs the scheme at every tau and measures the l2 error at the final time
/// against the reference. Points whose error is within 10x of the reference
/// error estimate, or that blew up, are excluded from the fit.
OrderReport measure_order(Scheme scheme, const OrderStudy& study, const ReferenceSolution& reference);
OrderReport measure_order(Scheme scheme, const OrderStudy& study);

}  // namespace sherk
