#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sherk/grid.hpp"

namespace sherk {

/// Below this argument phi_1 and phi_2 are summed from their Taylor series
/// (20 terms); above it the closed forms are used. Both branches agree to
/// better than 1e-14 relative at the switch.
inline constexpr double kPhiSeriesThreshold = 0.5;

/// Exponential-integrator kernels in the decaying convention:
///   phi_0(z) = e^{-z}, phi_1(z) = (1 - e^{-z}) / z, phi_2(z) = (e^{-z} - 1 + z) / z^2,
/// with phi_k(0) = 1/k!. Requires z >= 0 and k in {0, 1, 2}.
double phi(int k, double z);

/// h1(z) = z - 1/phi_1(z) = -z / (e^z - 1); h1(0) = -1 by continuity.
double h1(double z);
/// h2(z) = h1(z/2) - h1(z)/4; h2(0) = -3/4.
double h2(double z);
/// log(-h1(z)). Finite for every z >= 0, including arguments where h1 itself
/// underflows to -0 (z above roughly 745).
double log_neg_h1(double z);

/// Fourier symbol of the stabilized linear operator
/// L_kappa = (Delta_N + I)^2 + kappa I, i.e. Lambda = (lambda - 1)^2 + kappa.
class LKappaSymbol {
 public:
  LKappaSymbol(Grid grid, double kappa);

  const GridSpec& grid() const noexcept { return *grid_; }
  const Grid& grid_ptr() const noexcept { return grid_; }
  double kappa() const noexcept { return kappa_; }
  std::span<const double> values() const noexcept { return lambda_; }

 private:
  Grid grid_;
  double kappa_;
  std::vector<double> lambda_;
};

/// Throws InvalidArgumentError unless kappa > 0.
LKappaSymbol make_lkappa(Grid grid, double kappa);

/// phi_0(c tau L_kappa) f = exp(-c tau L_kappa) f.
RealField apply_semigroup(const LKappaSymbol& sym, double c, double tau, const RealField& f);
/// phi_1(c tau L_kappa) f.
RealField apply_phi1(const LKappaSymbol& sym, double c, double tau, const RealField& f);

/// The diagonal operators used in the energy analysis of ERK(2,2). With
/// g_i = c_i phi_1(c_i tau Lambda):
///   G          g_i
///   GHalf      sqrt(g_i)
///   G12Half    sqrt(g_1 g_2)
///   GStar      sqrt(Lambda g_i)
///   GStarStar  sqrt(Lambda g_i) lambda
///   MixedStar      sqrt(Lambda g_1 g_2)
///   MixedStarStar  sqrt(Lambda g_1 g_2) lambda
enum class GOperator { G, GHalf, G12Half, GStar, GStarStar, MixedStar, MixedStarStar };

std::string_view to_string(GOperator op);
/// Accepts the names printed by to_string; throws InvalidArgumentError otherwise.
GOperator parse_g_operator(std::string_view name);

struct GFamilyParams {
  double tau = 0.0;
  double c1 = 0.5;
  double c2 = 1.0;
  int stage = 1;  // i in {1, 2}; ignored by the mixed operators
};

std::vector<double> g_symbol(const LKappaSymbol& sym, GOperator op, const GFamilyParams& params);
RealField apply_g_family(const LKappaSymbol& sym, GOperator op, const GFamilyParams& params,
                         const RealField& f);

}  // namespace sherk
