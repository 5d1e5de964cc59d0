#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "sherk/error.hpp"
#include "sherk/exp_operators.hpp"
#include "sherk/schemes.hpp"
#include "sherk/verification.hpp"

using namespace sherk;
using std::numbers::pi;

namespace {

constexpr Scheme kAllSchemes[] = {Scheme::ERK22,  Scheme::ERKGeneral, Scheme::ETD1,
                                  Scheme::ETDRK2, Scheme::IMEX1,      Scheme::IMEXRK22};

SimState step_once(Scheme s, const RealField& u, SchemeConfig cfg) {
  cfg.scheme = s;
  SimState st(u);
  Integrator(u.grid_ptr(), cfg).step(st);
  return st;
}

// du/dt = -(I + Delta)^2 u + eps u - u^3 assembled from physical-space
// operator applications, without the stabilized split.
RealField sh_rhs(const RealField& u, double eps) {
  const RealField lu = apply_laplacian(u);
  RealField out = -(u + 2.0 * lu + apply_laplacian(lu));
  auto o = out.values();
  auto v = u.values();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] += eps * v[i] - v[i] * v[i] * v[i];
  return out;
}

RealField rk4(RealField u, double eps, double dt, int steps) {
  for (int k = 0; k < steps; ++k) {
    const RealField k1 = sh_rhs(u, eps);
    const RealField k2 = sh_rhs(u + (0.5 * dt) * k1, eps);
    const RealField k3 = sh_rhs(u + (0.5 * dt) * k2, eps);
    const RealField k4 = sh_rhs(u + dt * k3, eps);
    u += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return u;
}

RealField smooth_state(const Grid& g) {
  const double len = g->length();
  return RealField::sample(g, [len](double x, double y) {
    return 0.4 * std::cos(2 * pi * x / len) + 0.3 * std::sin(4 * pi * y / len) +
           0.2 * std::cos(2 * pi * (x + y) / len);
  });
}

}  // namespace

TEST(Schemes, NamesRoundTrip) {
  for (Scheme s : kAllSchemes) EXPECT_EQ(parse_scheme(to_string(s)), s);
  EXPECT_THROW(parse_scheme("rk4"), InvalidArgumentError);
  EXPECT_EQ(scheme_order(Scheme::ETD1), 1);
  EXPECT_EQ(scheme_order(Scheme::IMEXRK22), 2);
}

TEST(Schemes, ConfigValidation) {
  SchemeConfig c;
  c.kappa = 0.0;
  EXPECT_THROW(c.validate(), InvalidArgumentError);
  c.scheme = Scheme::IMEX1;
  EXPECT_NO_THROW(c.validate());
  c.scheme = Scheme::ERKGeneral;
  c.kappa = 2.0;
  c.c1 = 0.0;
  EXPECT_THROW(c.validate(), InvalidArgumentError);
  c.c1 = 1.5;
  EXPECT_THROW(c.validate(), InvalidArgumentError);
  c.c1 = 1.0;
  c.tau = 0.0;
  EXPECT_THROW(c.validate(), InvalidArgumentError);
}

TEST(Schemes, ImexConstants) {
  for (double g : {kImexGammaLower, kImexGammaUpper}) {
    EXPECT_NEAR(g * g - 2.0 * g + 0.5, 0.0, 1e-15);
    EXPECT_DOUBLE_EQ(imex_delta(g), 1.0 - 1.0 / (2.0 * g));
  }
  EXPECT_EQ(SchemeConfig{}.imex_gamma, kImexGammaLower);
}

TEST(NKappa, Examples) {
  auto g = make_grid(1.0, 4);
  EXPECT_EQ(norm_linf(n_kappa(RealField(g), 2.0, 0.25)), 0.0);
  const auto p = n_kappa(RealField::constant(g, 1.0), 2.0, 0.25);
  const auto m = n_kappa(RealField::constant(g, -1.0), 2.0, 0.25);
  for (double v : p.values()) EXPECT_DOUBLE_EQ(v, 1.25);
  for (double v : m.values()) EXPECT_DOUBLE_EQ(v, -1.25);
}

TEST(Schemes, ZeroIsFixedPoint) {
  auto g = make_grid(10.0, 16);
  for (Scheme s : kAllSchemes) {
    SchemeConfig cfg;
    cfg.c1 = 0.7;
    const auto st = step_once(s, RealField(g), cfg);
    EXPECT_EQ(norm_linf(st.u), 0.0) << to_string(s);
    EXPECT_EQ(st.step, 1);
    EXPECT_DOUBLE_EQ(st.t, cfg.tau);
  }
}

TEST(Schemes, OddSymmetry) {
  auto g = make_grid(10.0, 16);
  const RealField u = random_field(g, 4, 0, FieldKind::Smooth);
  for (Scheme s : kAllSchemes) {
    SchemeConfig cfg;
    cfg.tau = 0.3;
    const auto a = step_once(s, u, cfg);
    const auto b = step_once(s, -u, cfg);
    EXPECT_LE(norm_l2(a.u + b.u), 1e-13 * norm_l2(a.u)) << to_string(s);
  }
}

TEST(Schemes, LinearExactness) {
  for (int n : {8, 16, 32}) {
    auto g = make_grid(12.0, n);
    for (int k = 0; k < 5; ++k) {
      const RealField u = random_field(g, 8, k, FieldKind::Rough);
      for (double tau : {1e-3, 0.1, 1.0}) {
        SchemeConfig cfg;
        cfg.tau = tau;
        cfg.nonlinearity = false;
        const auto sym = make_lkappa(g, cfg.kappa);
        const RealField exact = apply_semigroup(sym, 1.0, tau, u);
        for (Scheme s : {Scheme::ERK22, Scheme::ETD1, Scheme::ETDRK2, Scheme::ERKGeneral}) {
          const auto st = step_once(s, u, cfg);
          EXPECT_LE(norm_l2(st.u - exact), 1e-13 * norm_l2(exact)) << to_string(s);
        }
        // IMEX schemes reproduce their rational functions mode by mode.
        const auto c1 = forward(u);
        double cmax = 0.0;
        for (auto c : c1.coeffs()) cmax = std::max(cmax, std::abs(c));
        const auto i1 = forward(step_once(Scheme::IMEX1, u, cfg).u);
        const auto i2 = forward(step_once(Scheme::IMEXRK22, u, cfg).u);
        for (std::size_t i = 0; i < g->points(); ++i) {
          const double z = tau * sym.values()[i];
          const double r1 = 1.0 / (1.0 + z);
          const double gamma = cfg.imex_gamma;
          const double a = 1.0 / (1.0 + gamma * z);
          const double r2 = a * (1.0 - (1.0 - gamma) * z * a);
          const double scale = std::abs(c1.coeffs()[i]) + 1e-300;
          EXPECT_LE(std::abs(i1.coeffs()[i] - r1 * c1.coeffs()[i]), 1e-14 * scale + 1e-15 * cmax);
          EXPECT_LE(std::abs(i2.coeffs()[i] - r2 * c1.coeffs()[i]), 1e-14 * scale + 1e-15 * cmax);
        }
      }
    }
  }
}

TEST(Schemes, SingleModeExamples) {
  auto g = make_grid(2 * pi, 8);
  const auto mode = RealField::sample(g, [](double x, double) { return std::cos(x); });
  SchemeConfig cfg;
  cfg.tau = 0.5;
  cfg.nonlinearity = false;
  const auto e = step_once(Scheme::ERK22, mode, cfg);
  EXPECT_NEAR(e.u(0, 0), std::exp(-1.0), 1e-15);
  const auto i = step_once(Scheme::IMEX1, mode, cfg);
  EXPECT_NEAR(i.u(0, 0), 0.5, 1e-15);  // 1 / (1 + 0.5 * 2)
}

TEST(Schemes, GeneralFamilyAtHalfMatchesErk22) {
  auto g = make_grid(10.0, 32);
  for (int k = 0; k < 5; ++k) {
    const RealField u = random_field(g, 12, k, FieldKind::Smooth);
    SchemeConfig cfg;
    cfg.tau = 0.2;
    cfg.c1 = 0.5;
    const auto a = step_once(Scheme::ERK22, u, cfg);
    const auto b = step_once(Scheme::ERKGeneral, u, cfg);
    EXPECT_LE(norm_linf(a.u - b.u), 1e-14 * norm_linf(u));
  }
}

TEST(Schemes, OneStepAgreesWithFineReference) {
  auto g = make_grid(32.0, 32);
  const double len = g->length();
  const RealField u0 = RealField::sample(g, [len](double x, double) { return 0.01 * std::cos(2 * pi * x / len); });
  const RealField ref = rk4(u0, 0.25, 1e-6, 1000);
  SchemeConfig cfg;
  cfg.tau = 1e-3;
  const auto st = step_once(Scheme::ERK22, u0, cfg);
  EXPECT_LE(norm_l2(st.u - ref), 1e-8);
}

// Errors against an RK4 reference at halving steps; the fitted slope is the order.
TEST(Schemes, TemporalOrderOnSmoothState) {
  auto g = make_grid(20.0, 16);
  const RealField u0 = smooth_state(g);
  const double final_time = 1.0;
  const RealField ref = rk4(u0, 0.25, 1e-3, 1000);
  struct Case {
    Scheme s;
    double c1;
    double gamma;
    double lo, hi;
  };
  const double lower = kImexGammaLower;
  for (const Case& c : {Case{Scheme::ERKGeneral, 1.0, lower, 1.8, 2.2}, Case{Scheme::ERK22, 0.5, lower, 1.8, 2.2},
                        Case{Scheme::ETDRK2, 0.5, lower, 1.8, 2.2}, Case{Scheme::IMEXRK22, 0.5, lower, 1.8, 2.2},
                        Case{Scheme::IMEXRK22, 0.5, kImexGammaUpper, 1.6, 2.2},
                        Case{Scheme::ETD1, 0.5, lower, 0.9, 1.2}, Case{Scheme::IMEX1, 0.5, lower, 0.9, 1.2}}) {
    std::vector<double> taus, errs;
    for (double tau : {0.05, 0.025, 0.0125, 0.00625}) {
      SchemeConfig cfg;
      cfg.scheme = c.s;
      cfg.c1 = c.c1;
      cfg.imex_gamma = c.gamma;
      cfg.tau = tau;
      RunOptions opt;
      opt.final_time = final_time;
      const auto r = run(u0, cfg, opt);
      taus.push_back(tau);
      errs.push_back(norm_l2(r.final_state.u - ref));
    }
    const double slope = fit_order(taus, errs);
    EXPECT_GE(slope, c.lo) << to_string(c.s) << " c1=" << c.c1 << " gamma=" << c.gamma;
    EXPECT_LE(slope, c.hi) << to_string(c.s) << " c1=" << c.c1 << " gamma=" << c.gamma;
  }
}

TEST(Schemes, StepFunctionsMatchIntegrator) {
  auto g = make_grid(10.0, 16);
  const RealField u = random_field(g, 3, 0, FieldKind::Smooth);
  SchemeConfig cfg;
  const SimState s(u);
  EXPECT_EQ(norm_linf(step_erk22(s, cfg).u - step_once(Scheme::ERK22, u, cfg).u), 0.0);
  EXPECT_EQ(norm_linf(step_erk_general(s, cfg).u - step_once(Scheme::ERKGeneral, u, cfg).u), 0.0);
  EXPECT_EQ(norm_linf(step_etd1(s, cfg).u - step_once(Scheme::ETD1, u, cfg).u), 0.0);
  EXPECT_EQ(norm_linf(step_etdrk2(s, cfg).u - step_once(Scheme::ETDRK2, u, cfg).u), 0.0);
  EXPECT_EQ(norm_linf(step_imex1(s, cfg).u - step_once(Scheme::IMEX1, u, cfg).u), 0.0);
  EXPECT_EQ(norm_linf(step_imexrk22(s, cfg).u - step_once(Scheme::IMEXRK22, u, cfg).u), 0.0);
}

TEST(Schemes, BlowUpIsReported) {
  auto g = make_grid(10.0, 8);
  const RealField u = RealField::constant(g, 1e120);
  SchemeConfig cfg;
  cfg.scheme = Scheme::ETD1;
  SimState st(u, 0.0, 7);
  Integrator integ(g, cfg);
  try {
    integ.step(st);
    FAIL() << "expected blow-up";
  } catch (const BlowUpError& e) {
    EXPECT_EQ(e.step(), 8);
  }
  EXPECT_EQ(st.step, 7);
  EXPECT_EQ(st.u(0, 0), 1e120);
}

TEST(StepCount, Examples) {
  EXPECT_EQ(step_count(1.0, 1.0), 1);
  EXPECT_EQ(step_count(0.0, 0.1), 0);
  EXPECT_EQ(step_count(20.0, 0.1), 200);
  EXPECT_EQ(step_count(1.0, 0.3), 4);
  EXPECT_THROW(step_count(1.0, 0.0), InvalidArgumentError);
}

TEST(Run, CadenceAndDeterminism) {
  auto g = make_grid(10.0, 16);
  const RealField u = random_field(g, 5, 0, FieldKind::Smooth);
  SchemeConfig cfg;
  cfg.tau = 0.1;
  RunOptions opt;
  opt.final_time = 0.1;
  EXPECT_EQ(run(u, cfg, opt).final_state.step, 1);
  opt.final_time = 0.0;
  EXPECT_EQ(run(u, cfg, opt).trace.size(), 1u);

  opt.final_time = 1.0;
  opt.trace_every = 3;
  opt.snapshot_every = 4;
  const auto a = run(u, cfg, opt);
  const auto b = run(u, cfg, opt);
  EXPECT_EQ(a.trace.size(), 5u);      // 0, 3, 6, 9, 10
  EXPECT_EQ(a.snapshots.size(), 4u);  // 0, 4, 8, 10
  EXPECT_EQ(a.snapshots.back().step, 10);
  ASSERT_EQ(a.trace.size(), b.trace.size());
  for (std::size_t i = 0; i < a.trace.size(); ++i) {
    EXPECT_EQ(a.trace.samples()[i].energy, b.trace.samples()[i].energy);
  }
  EXPECT_EQ(norm_linf(a.final_state.u - b.final_state.u), 0.0);
  EXPECT_GE(a.trace.stage_linf_max(), norm_linf(u));
}
