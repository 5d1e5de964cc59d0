#include "sherk/verification.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <sstream>

#include "sherk/energy.hpp"
#include "sherk/error.hpp"
#include "sherk/exp_operators.hpp"
#include "sherk/random.hpp"

namespace sherk {

void SweepSpec::validate() const {
  if (grid_sizes.empty() || kappas.empty() || taus.empty()) {
    throw InvalidArgumentError("sweep lists must not be empty");
  }
  if (fields_per_cell < 1) throw InvalidArgumentError("sweep needs at least one field per cell");
  for (int n : grid_sizes) {
    if (n < 4) throw InvalidArgumentError("sweep grid sizes must be >= 4");
  }
  for (double k : kappas) {
    if (!(k > 0.0)) throw InvalidArgumentError("sweep kappas must be positive");
  }
  for (double t : taus) {
    if (!(t > 0.0)) throw InvalidArgumentError("sweep time steps must be positive");
  }
  if (!(domain_length > 0.0)) throw InvalidArgumentError("sweep domain length must be positive");
}

namespace {

std::uint64_t stream_id(int n, FieldKind kind, int index, int role) {
  std::uint64_t s = static_cast<std::uint64_t>(n);
  s = s * 4 + (kind == FieldKind::Rough ? 1 : 0);
  s = s * 4 + static_cast<std::uint64_t>(role);
  s = s * 1000003ULL + static_cast<std::uint64_t>(index);
  return s;
}

const char* kind_name(FieldKind k) { return k == FieldKind::Smooth ? "smooth" : "rough"; }

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::string cell_label(int n, double kappa, double tau, FieldKind kind, int index) {
  return "N=" + std::to_string(n) + " kappa=" + format_double(kappa) + " tau=" + format_double(tau) +
         " " + kind_name(kind) + " field=" + std::to_string(index);
}

double sq(const RealField& f) { return inner(f, f); }

struct FieldSet {
  FieldKind kind;
  std::vector<RealField> f;
  std::vector<RealField> g;
};

std::vector<FieldSet> make_fields(const SweepSpec& sweep, const Grid& grid) {
  std::vector<FieldSet> sets;
  const int n = grid->size();
  std::vector<FieldKind> kinds{FieldKind::Smooth};
  if (n <= sweep.rough_max_size) kinds.push_back(FieldKind::Rough);
  for (FieldKind kind : kinds) {
    FieldSet s{kind, {}, {}};
    for (int k = 0; k < sweep.fields_per_cell; ++k) {
      s.f.push_back(random_field(grid, sweep.seed, stream_id(n, kind, k, 0), kind));
      s.g.push_back(random_field(grid, sweep.seed, stream_id(n, kind, k, 1), kind));
    }
    sets.push_back(std::move(s));
  }
  return sets;
}

// Calls body(grid, sym, tau, fieldset, index) for every sweep cell and field.
template <class Body>
void for_each_sample(const SweepSpec& sweep, Body&& body) {
  sweep.validate();
  for (int n : sweep.grid_sizes) {
    const Grid grid = make_grid(sweep.domain_length, n);
    const auto sets = make_fields(sweep, grid);
    for (double kappa : sweep.kappas) {
      const LKappaSymbol sym = make_lkappa(grid, kappa);
      for (double tau : sweep.taus) {
        for (const auto& set : sets) {
          for (int k = 0; k < static_cast<int>(set.f.size()); ++k) {
            body(sym, tau, set, k);
          }
        }
      }
    }
  }
}

}  // namespace

RealField random_field(const Grid& grid, std::uint64_t seed, std::uint64_t stream, FieldKind kind) {
  const CounterRng rng(seed, stream);
  RealField f(grid);
  auto v = f.values();
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = rng.symmetric(i);
  if (kind == FieldKind::Smooth) {
    SpectralField c = forward(f);
    const int n = grid->size();
    auto coeffs = c.coeffs();
    for (int jx = 0; jx < n; ++jx) {
      for (int jy = 0; jy < n; ++jy) {
        if (3 * std::abs(grid->mode(jx)) >= n || 3 * std::abs(grid->mode(jy)) >= n) {
          coeffs[grid->flat(jx, jy)] = 0.0;
        }
      }
    }
    f = inverse(c);
  }
  double ms = 0.0;
  for (double x : f.values()) ms += x * x;
  ms /= static_cast<double>(f.values().size());
  if (ms > 0.0) f *= 1.0 / std::sqrt(ms);
  return f;
}

// ---------------------------------------------------------------------------

void CheckReport::record(const std::string& check, const std::string& sample, double big,
                         double small, Slack slack) {
  const double margin = big - small;
  const double allowed = slack.abs + slack.rel * std::max(std::abs(big), std::abs(small));
  const bool bad = !(margin >= -allowed);
  ++samples;
  if (bad) ++violations;
  if (margin < worst_margin || (std::isnan(margin) && !std::isnan(worst_margin))) {
    worst_margin = margin;
    worst_sample = check + " " + sample;
  }
  entries.push_back({check, sample, big, small, margin, bad});
}

void CheckReport::record_bool(const std::string& check, const std::string& sample, bool ok) {
  record(check, sample, ok ? 1.0 : 0.0, ok ? 0.0 : 1.0, Slack{0.0, 0.0});
}

std::string CheckReport::summary() const {
  std::ostringstream os;
  os << name << ": " << samples << " samples, " << violations << " violations";
  if (samples > 0) {
    os << ", worst margin " << worst_margin << " (" << worst_sample << ")";
  }
  return os.str();
}

// ---------------------------------------------------------------------------

CheckReport check_g_half_contraction(const SweepSpec& sweep) {
  CheckReport report;
  report.name = "g_half_contraction";
  for_each_sample(sweep, [&](const LKappaSymbol& sym, double tau, const FieldSet& set, int k) {
    const RealField& f = set.f[k];
    const double nf = norm_l2(f);
    const std::string label =
        cell_label(sym.grid().size(), sym.kappa(), tau, set.kind, k);
    for (int i : {1, 2}) {
      const GFamilyParams p{tau, 0.5, 1.0, i};
      report.record("G" + std::to_string(i) + "_half", label, nf,
                    norm_l2(apply_g_family(sym, GOperator::GHalf, p, f)));
    }
    const GFamilyParams p{tau, 0.5, 1.0, 1};
    report.record("G12_half", label, nf, norm_l2(apply_g_family(sym, GOperator::G12Half, p, f)));
  });
  return report;
}

CheckReport check_g_star_lower_bound(const SweepSpec& sweep) {
  for (double kappa : sweep.kappas) {
    if (kappa < 1.0) {
      throw InvalidArgumentError("the G-operator lower bounds need kappa >= 1, got " +
                                 format_double(kappa));
    }
  }
  CheckReport report;
  report.name = "g_star_lower_bound";
  for_each_sample(sweep, [&](const LKappaSymbol& sym, double tau, const FieldSet& set, int k) {
    const RealField& f = set.f[k];
    const RealField lf = apply_laplacian(f);
    const RealField llf = apply_laplacian(lf);
    const double kappa = sym.kappa();
    const std::string label = cell_label(sym.grid().size(), kappa, tau, set.kind, k);

    auto bound = [&](GOperator half, GOperator star, GOperator starstar, int stage) {
      const GFamilyParams p{tau, 0.5, 1.0, stage};
      const double lhs = sq(apply_g_family(sym, star, p, f)) + sq(apply_g_family(sym, starstar, p, f));
      const double a0 = sq(apply_g_family(sym, half, p, f));
      const double a1 = sq(apply_g_family(sym, half, p, lf));
      const double a2 = sq(apply_g_family(sym, half, p, llf));
      const double rhs = 0.25 * (a1 + a2) + (kappa - 1.0) * (a0 + a1) + (2.0 / 3.0) * (a0 + a1);
      return std::pair{lhs, rhs};
    };
    for (int i : {1, 2}) {
      auto [lhs, rhs] = bound(GOperator::GHalf, GOperator::GStar, GOperator::GStarStar, i);
      report.record("(1) i=" + std::to_string(i), label, lhs, rhs);
    }
    auto [lhs, rhs] = bound(GOperator::G12Half, GOperator::MixedStar, GOperator::MixedStarStar, 1);
    report.record("(2)", label, lhs, rhs);
  });
  return report;
}

CheckReport check_semigroup_inequalities(const SweepSpec& sweep) {
  CheckReport report;
  report.name = "semigroup_inequalities";
  for_each_sample(sweep, [&](const LKappaSymbol& sym, double tau, const FieldSet& set, int k) {
    const RealField& f = set.f[k];
    const RealField& g = set.g[k];
    const std::string label = cell_label(sym.grid().size(), sym.kappa(), tau, set.kind, k);
    const RealField lf = apply_diagonal(f, sym.values());
    const GFamilyParams p1{tau, 0.5, 1.0, 1};
    const GFamilyParams p2{tau, 0.5, 1.0, 2};
    const RealField g1lf = apply_g_family(sym, GOperator::G, p1, lf);
    for (int i : {1, 2}) {
      const GFamilyParams pi{tau, 0.5, 1.0, i};
      const double ci = i == 1 ? 0.5 : 1.0;
      const RealField gilf = apply_g_family(sym, GOperator::G, pi, lf);
      const RealField ef = apply_semigroup(sym, ci, tau, f);
      const RealField llef = apply_laplacian(apply_laplacian(ef));
      const RealField diff = g - ef;
      const RealField ldiff = apply_laplacian(diff);
      const std::string tag = " i=" + std::to_string(i);

      report.record("(1)" + tag, label, tau * inner(gilf, ef) + sq(diff),
                    tau * sq(apply_g_family(sym, GOperator::GStar, pi, g)));
      report.record("(2)" + tag, label, tau * inner(gilf, llef) + sq(ldiff),
                    tau * sq(apply_g_family(sym, GOperator::GStarStar, pi, g)));
      report.record("(3)" + tag, label,
                    tau * inner(g1lf, apply_g_family(sym, GOperator::G, p2, ef)) +
                        sq(apply_g_family(sym, GOperator::GHalf, p2, diff)),
                    tau * sq(apply_g_family(sym, GOperator::MixedStar, p1, g)));
      report.record("(4)" + tag, label,
                    tau * inner(g1lf, apply_g_family(sym, GOperator::G, p2, llef)) +
                        sq(apply_g_family(sym, GOperator::GHalf, p2, ldiff)),
                    tau * sq(apply_g_family(sym, GOperator::MixedStarStar, p1, g)));
    }
  });
  return report;
}

CheckReport check_lipschitz(const SweepSpec& sweep, double beta, double epsilon, int pairs) {
  sweep.validate();
  if (!(beta > 0.0)) throw InvalidArgumentError("Lipschitz check needs beta > 0");
  if (pairs < 1) throw InvalidArgumentError("Lipschitz check needs at least one pair");
  const double kappa = kappa_rule(beta, epsilon);
  CheckReport report;
  report.name = "lipschitz";
  std::vector<Grid> grids;
  for (int n : sweep.grid_sizes) grids.push_back(make_grid(sweep.domain_length, n));
  const CounterRng scale_rng(sweep.seed, 0x11F5C417ULL);

  auto clipped = [&](const Grid& grid, int k, int role) {
    const FieldKind kind = (k % 2 == 0) ? FieldKind::Smooth : FieldKind::Rough;
    RealField u = random_field(grid, sweep.seed, stream_id(grid->size(), kind, k, 2 + role), kind);
    // Peak between beta/2 and 2 beta, then clipped, so some pairs saturate.
    const double target = beta * (0.5 + 1.5 * scale_rng.uniform01(2 * static_cast<std::uint64_t>(k) + role));
    u *= target / norm_linf(u);
    for (double& x : u.values()) x = std::clamp(x, -beta, beta);
    return u;
  };

  for (int k = 0; k < pairs; ++k) {
    const Grid& grid = grids[k % grids.size()];
    const RealField u = clipped(grid, k, 0);
    const RealField v = clipped(grid, k, 1);
    const double lhs = norm_l2(n_kappa(u, kappa, epsilon) - n_kappa(v, kappa, epsilon));
    const double rhs = 3.0 * kappa * norm_l2(u - v);
    report.record("3 kappa bound", "N=" + std::to_string(grid->size()) + " pair=" + std::to_string(k),
                  rhs, lhs);
  }
  return report;
}

CheckReport check_lambda_bound(const SweepSpec& sweep) {
  sweep.validate();
  CheckReport report;
  report.name = "lambda_bound";
  for (int n : sweep.grid_sizes) {
    const Grid grid = make_grid(sweep.domain_length, n);
    for (double kappa : sweep.kappas) {
      const LKappaSymbol sym = make_lkappa(grid, kappa);
      auto big = sym.values();
      auto lam = grid->lambda();
      for (int jx = 0; jx < n; ++jx) {
        for (int jy = 0; jy < n; ++jy) {
          const std::size_t i = grid->flat(jx, jy);
          const double rhs = 0.25 * lam[i] * lam[i] + 2.0 / 3.0 + (kappa - 1.0);
          report.record("Lambda >= lambda^2/4 + 2/3 + kappa - 1",
                        "N=" + std::to_string(n) + " kappa=" + format_double(kappa) +
                            " mode=(" + std::to_string(grid->mode(jx)) + "," +
                            std::to_string(grid->mode(jy)) + ")",
                        big[i], rhs, Slack{0.0, 0.0});
        }
      }
    }
  }
  return report;
}

namespace {

bool h1_negative(double z) {
  const double v = h1(z);
  if (v < 0.0) return true;
  return v == 0.0 && std::signbit(v) && std::isfinite(log_neg_h1(z));
}

}  // namespace

CheckReport check_h_functions(const SweepSpec& sweep, int points, double z_min, double z_max) {
  sweep.validate();
  if (points < 2 || !(z_min > 0.0) || !(z_max > z_min)) {
    throw InvalidArgumentError("h-function sweep needs >= 2 points on a positive interval");
  }
  CheckReport report;
  report.name = "h_functions";
  const double a = std::log(z_min);
  const double b = std::log(z_max);
  for (int k = 0; k < points; ++k) {
    const double z = std::exp(a + (b - a) * k / (points - 1));
    const std::string label = "z=" + format_double(z);
    report.record_bool("h1 < 0", label, h1_negative(z));
    report.record("h2 <= 0", label, 0.0, h2(z), Slack{0.0, 0.0});
  }
  for (int n : sweep.grid_sizes) {
    const Grid grid = make_grid(sweep.domain_length, n);
    for (double kappa : sweep.kappas) {
      const LKappaSymbol sym = make_lkappa(grid, kappa);
      for (double tau : sweep.taus) {
        bool d1 = true, d2 = true, d12 = true;
        for (double lk : sym.values()) {
          const double z = tau * lk;
          d1 = d1 && h1_negative(0.5 * z);
          d2 = d2 && h1_negative(z);
          d12 = d12 && h2(z) <= 0.0;
        }
        const std::string label =
            "N=" + std::to_string(n) + " kappa=" + format_double(kappa) + " tau=" + format_double(tau);
        report.record_bool("Delta1 negative", label, d1);
        report.record_bool("Delta2 negative", label, d2);
        report.record_bool("Delta1 - Delta2/2 non-positive", label, d12);
      }
    }
  }
  return report;
}

// ---------------------------------------------------------------------------

double sobolev_ratio(const RealField& f) {
  const double top = norm_linf(f);
  if (top == 0.0) return -1.0;
  return top / (norm_l2(f) + norm_l2(apply_laplacian(f)));
}

SobolevEstimate estimate_sobolev_constant(const SweepSpec& sweep) {
  sweep.validate();
  constexpr int kMaxDegree = 6;
  SobolevEstimate est;
  for (int n : sweep.grid_sizes) {
    const Grid grid = make_grid(sweep.domain_length, n);
    const int degree = std::min(kMaxDegree, n / 2 - 1);
    double best = 0.0;
    for (int k = 0; k < sweep.fields_per_cell; ++k) {
      const CounterRng rng(sweep.seed, 0x50B0ULL * 1000003ULL + static_cast<std::uint64_t>(k));
      SpectralField c(grid);
      for (int l = -degree; l <= degree; ++l) {
        for (int m = -degree; m <= degree; ++m) {
          if (l < 0 || (l == 0 && m < 0)) continue;
          const auto key = static_cast<std::uint64_t>((l + kMaxDegree) * (2 * kMaxDegree + 1) +
                                                      (m + kMaxDegree));
          const double amp = 1.0 / (1.0 + l * l + m * m);
          std::complex<double> z(amp * rng.symmetric(2 * key), amp * rng.symmetric(2 * key + 1));
          if (l == 0 && m == 0) z = z.real();
          c.at_mode(l, m) = z;
          c.at_mode(-l, -m) = std::conj(z);
        }
      }
      const double r = sobolev_ratio(inverse(c));
      if (r > 0.0) best = std::max(best, r);
    }
    est.per_size.emplace_back(n, best);
    est.c_hat = std::max(est.c_hat, best);
  }
  return est;
}

// ---------------------------------------------------------------------------

double fit_order(std::span<const double> taus, std::span<const double> errors) {
  if (taus.size() != errors.size() || taus.size() < 2) {
    throw InvalidArgumentError("order fit needs at least two (tau, error) pairs");
  }
  const double n = static_cast<double>(taus.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < taus.size(); ++i) {
    const double x = std::log(taus[i]);
    const double y = std::log(errors[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

void OrderStudy::validate() const {
  base.validate();
  if (!(final_time > 0.0)) throw InvalidArgumentError("order study needs T > 0");
  if (taus.size() < 4) throw InvalidArgumentError("order study needs at least four time steps");
  for (std::size_t i = 0; i + 1 < taus.size(); ++i) {
    if (std::abs(taus[i] / taus[i + 1] - 2.0) > 1e-12) {
      throw InvalidArgumentError("order study time steps must halve successively");
    }
  }
  if (!(reference_tau > 0.0) || reference_tau > taus.back() / 8.0) {
    throw InvalidArgumentError("reference time step must be at most 1/8 of the smallest step");
  }
}

namespace {

RealField solve_to(const OrderStudy& study, Scheme scheme, double tau) {
  SchemeConfig cfg = study.base;
  cfg.scheme = scheme;
  cfg.tau = tau;
  RunOptions opts;
  opts.final_time = study.final_time;
  opts.trace_every = std::numeric_limits<std::int64_t>::max();
  return run(study.initial, cfg, opts).final_state.u;
}

}  // namespace

ReferenceSolution compute_reference(const OrderStudy& study) {
  study.validate();
  RealField fine = solve_to(study, study.reference_scheme, study.reference_tau);
  const RealField coarse = solve_to(study, study.reference_scheme, 2.0 * study.reference_tau);
  const double p = scheme_order(study.reference_scheme);
  const double est = norm_l2(coarse - fine) / (std::pow(2.0, p) - 1.0);
  return ReferenceSolution{std::move(fine), est};
}

OrderReport measure_order(Scheme scheme, const OrderStudy& study, const ReferenceSolution& reference) {
  study.validate();
  OrderReport report;
  report.scheme = scheme;
  report.taus = study.taus;
  report.reference_error = reference.error_estimate;
  std::vector<double> fit_tau, fit_err;
  for (double tau : study.taus) {
    double err = std::numeric_limits<double>::quiet_NaN();
    bool blew = false;
    try {
      err = norm_l2(solve_to(study, scheme, tau) - reference.u);
    } catch (const BlowUpError&) {
      blew = true;
    }
    const bool use = !blew && std::isfinite(err) && err > 10.0 * reference.error_estimate;
    report.errors.push_back(err);
    report.blew_up.push_back(blew);
    report.included.push_back(use);
    if (use) {
      fit_tau.push_back(tau);
      fit_err.push_back(err);
    }
  }
  for (std::size_t i = 0; i + 1 < report.taus.size(); ++i) {
    const double e0 = report.errors[i], e1 = report.errors[i + 1];
    report.interval_slopes.push_back(std::log(e0 / e1) / std::log(report.taus[i] / report.taus[i + 1]));
  }
  report.slope = fit_tau.size() >= 2 ? fit_order(fit_tau, fit_err)
                                     : std::numeric_limits<double>::quiet_NaN();
  return report;
}

OrderReport measure_order(Scheme scheme, const OrderStudy& study) {
  return measure_order(scheme, study, compute_reference(study));
}

}  // namespace sherk
