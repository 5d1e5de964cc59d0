#include "sherk/exp_operators.hpp"

#include <array>
#include <cmath>
#include <string>

#include "sherk/error.hpp"

namespace sherk {

namespace {

constexpr int kSeriesTerms = 20;

// sum_{j=0}^{kSeriesTerms-1} (-z)^j / (j + k)!, evaluated by Horner.
double phi_series(int k, double z) {
  std::array<double, kSeriesTerms> coef{};
  double fact = 1.0;
  for (int i = 2; i <= k; ++i) fact *= i;
  for (int j = 0; j < kSeriesTerms; ++j) {
    if (j > 0) fact *= (j + k);
    coef[j] = 1.0 / fact;
  }
  double acc = coef[kSeriesTerms - 1];
  for (int j = kSeriesTerms - 2; j >= 0; --j) acc = coef[j] - z * acc;
  return acc;
}

}  // namespace

double phi(int k, double z) {
  if (k < 0 || k > 2) {
    throw InvalidArgumentError("phi is defined for k in {0, 1, 2}, got " + std::to_string(k));
  }
  if (!(z >= 0.0)) {
    throw InvalidArgumentError("phi needs a non-negative argument");
  }
  if (k == 0) return std::exp(-z);
  if (z < kPhiSeriesThreshold) return phi_series(k, z);
  const double em1 = std::expm1(-z);  // e^{-z} - 1
  if (k == 1) return -em1 / z;
  return (em1 + z) / (z * z);
}

double h1(double z) {
  if (!(z >= 0.0)) throw InvalidArgumentError("h1 needs a non-negative argument");
  if (z == 0.0) return -1.0;
  if (z > 700.0) return -z * std::exp(-z);
  return -z / std::expm1(z);
}

double h2(double z) {
  if (!(z >= 0.0)) throw InvalidArgumentError("h2 needs a non-negative argument");
  return h1(0.5 * z) - 0.25 * h1(z);
}

double log_neg_h1(double z) {
  if (!(z >= 0.0)) throw InvalidArgumentError("h1 needs a non-negative argument");
  if (z == 0.0) return 0.0;
  if (z > 700.0) return std::log(z) - z - std::log1p(-std::exp(-z));
  return std::log(z) - std::log(std::expm1(z));
}

// ---------------------------------------------------------------------------

LKappaSymbol::LKappaSymbol(Grid grid, double kappa) : grid_(std::move(grid)), kappa_(kappa) {
  if (!(kappa > 0.0) || !std::isfinite(kappa)) {
    throw InvalidArgumentError("stabilization parameter must be positive, got kappa = " +
                               std::to_string(kappa));
  }
  auto lam = grid_->lambda();
  lambda_.resize(lam.size());
  for (std::size_t i = 0; i < lam.size(); ++i) {
    const double d = lam[i] - 1.0;
    lambda_[i] = d * d + kappa;
  }
}

LKappaSymbol make_lkappa(Grid grid, double kappa) { return LKappaSymbol(std::move(grid), kappa); }

namespace {

template <class F>
RealField apply_per_mode(const LKappaSymbol& sym, const RealField& f, F&& factor) {
  require_same_grid(sym.grid(), f.grid());
  auto big = sym.values();
  std::vector<double> s(big.size());
  for (std::size_t i = 0; i < big.size(); ++i) s[i] = factor(big[i]);
  return apply_diagonal(f, s);
}

void check_step(double tau) {
  if (!(tau >= 0.0) || !std::isfinite(tau)) {
    throw InvalidArgumentError("time step must be non-negative and finite");
  }
}

}  // namespace

RealField apply_semigroup(const LKappaSymbol& sym, double c, double tau, const RealField& f) {
  check_step(tau);
  return apply_per_mode(sym, f, [&](double lk) { return phi(0, c * tau * lk); });
}

RealField apply_phi1(const LKappaSymbol& sym, double c, double tau, const RealField& f) {
  check_step(tau);
  return apply_per_mode(sym, f, [&](double lk) { return phi(1, c * tau * lk); });
}

// ---------------------------------------------------------------------------

std::string_view to_string(GOperator op) {
  switch (op) {
    case GOperator::G: return "G";
    case GOperator::GHalf: return "G_half";
    case GOperator::G12Half: return "G12_half";
    case GOperator::GStar: return "G_star";
    case GOperator::GStarStar: return "G_starstar";
    case GOperator::MixedStar: return "G_mixed_star";
    case GOperator::MixedStarStar: return "G_mixed_starstar";
  }
  return "?";
}

GOperator parse_g_operator(std::string_view name) {
  for (auto op : {GOperator::G, GOperator::GHalf, GOperator::G12Half, GOperator::GStar,
                  GOperator::GStarStar, GOperator::MixedStar, GOperator::MixedStarStar}) {
    if (to_string(op) == name) return op;
  }
  throw InvalidArgumentError("unknown operator tag '" + std::string(name) + "'");
}

std::vector<double> g_symbol(const LKappaSymbol& sym, GOperator op, const GFamilyParams& params) {
  check_step(params.tau);
  if (params.stage != 1 && params.stage != 2) {
    throw InvalidArgumentError("stage index must be 1 or 2");
  }
  if (!(params.c1 > 0.0 && params.c1 <= 1.0) || !(params.c2 > 0.0 && params.c2 <= 1.0)) {
    throw InvalidArgumentError("stage fractions must lie in (0, 1]");
  }
  const double ci = params.stage == 1 ? params.c1 : params.c2;
  const double tau = params.tau;
  auto big = sym.values();
  auto lam = sym.grid().lambda();
  std::vector<double> s(big.size());
  for (std::size_t k = 0; k < big.size(); ++k) {
    const double gi = ci * phi(1, ci * tau * big[k]);
    const double g1 = params.c1 * phi(1, params.c1 * tau * big[k]);
    const double g2 = params.c2 * phi(1, params.c2 * tau * big[k]);
    switch (op) {
      case GOperator::G: s[k] = gi; break;
      case GOperator::GHalf: s[k] = std::sqrt(gi); break;
      case GOperator::G12Half: s[k] = std::sqrt(g1 * g2); break;
      case GOperator::GStar: s[k] = std::sqrt(big[k] * gi); break;
      case GOperator::GStarStar: s[k] = std::sqrt(big[k] * gi) * lam[k]; break;
      case GOperator::MixedStar: s[k] = std::sqrt(big[k] * g1 * g2); break;
      case GOperator::MixedStarStar: s[k] = std::sqrt(big[k] * g1 * g2) * lam[k]; break;
    }
  }
  return s;
}

RealField apply_g_family(const LKappaSymbol& sym, GOperator op, const GFamilyParams& params,
                         const RealField& f) {
  require_same_grid(sym.grid(), f.grid());
  return apply_diagonal(f, g_symbol(sym, op, params));
}

}  // namespace sherk
