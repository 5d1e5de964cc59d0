#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <utility>
#include <vector>

namespace sherk {

namespace detail {
class FftPlans;
}

class GridSpec;

/// Grids are shared, immutable values; fields hold a reference-counted
/// pointer to the grid they live on.
using Grid = std::shared_ptr<const GridSpec>;

/// Periodic N x N collocation grid on [0, L)^2.
///
/// Point (p, q) sits at (p h, q h) and is stored at flat index p * N + q, so
/// the first index runs along x. Fourier index j maps to the integer mode
///   l = j            for j <  ceil(N/2)
///   l = j - N        otherwise,
/// giving l in [-floor(N/2), ceil(N/2) - 1]. Spectral arrays use the same
/// (j_x * N + j_y) layout. The Laplacian symbol lambda = 4 pi^2 (l^2 + m^2) / L^2
/// and the first-derivative wavenumbers are computed once here.
class GridSpec {
 public:
  /// Use make_grid(); the constructor is public only for make_shared.
  GridSpec(double length, int n);
  ~GridSpec();
  GridSpec(const GridSpec&) = delete;
  GridSpec& operator=(const GridSpec&) = delete;

  double length() const noexcept { return length_; }
  int size() const noexcept { return n_; }
  std::size_t points() const noexcept { return static_cast<std::size_t>(n_) * n_; }
  double spacing() const noexcept { return h_; }
  double area() const noexcept { return length_ * length_; }
  double coordinate(int p) const noexcept { return p * h_; }

  int mode(int j) const noexcept { return modes_[j]; }
  int index_of_mode(int l) const;
  std::span<const int> modes() const noexcept { return modes_; }

  /// lambda_{l,m} at flat spectral index.
  std::span<const double> lambda() const noexcept { return lambda_; }
  double lambda(int jx, int jy) const noexcept { return lambda_[flat(jx, jy)]; }

  /// 2 pi l / L per 1-D index, zero at the Nyquist index of an even grid.
  std::span<const double> wavenumbers() const noexcept { return wavenumber_; }

  std::size_t flat(int p, int q) const noexcept {
    return static_cast<std::size_t>(p) * n_ + q;
  }

  bool same_as(const GridSpec& other) const noexcept {
    return this == &other || (n_ == other.n_ && length_ == other.length_);
  }

  // Unnormalized in-place transforms on an N x N complex buffer.
  void fft_forward(std::span<std::complex<double>> data) const;
  void fft_backward(std::span<std::complex<double>> data) const;

 private:
  double length_;
  int n_;
  double h_;
  std::vector<int> modes_;
  std::vector<double> wavenumber_;
  std::vector<double> lambda_;
  std::unique_ptr<detail::FftPlans> plans_;
};

/// Rejects N < 4 and non-positive or non-finite L with InvalidGridError.
Grid make_grid(double length, int n);

/// Real grid function (an element of the space of periodic grid functions).
class RealField {
 public:
  explicit RealField(Grid grid);
  /// Throws InvalidArgumentError when the size is wrong or a value is not finite.
  RealField(Grid grid, std::vector<double> values);

  /// Samples f(x, y) at every collocation point.
  static RealField sample(Grid grid, const std::function<double(double, double)>& f);
  static RealField constant(Grid grid, double value);

  const GridSpec& grid() const noexcept { return *grid_; }
  const Grid& grid_ptr() const noexcept { return grid_; }

  std::span<double> values() noexcept { return values_; }
  std::span<const double> values() const noexcept { return values_; }
  double& operator()(int p, int q) noexcept { return values_[grid_->flat(p, q)]; }
  double operator()(int p, int q) const noexcept { return values_[grid_->flat(p, q)]; }

  bool is_finite() const noexcept;

  RealField& operator+=(const RealField& other);
  RealField& operator-=(const RealField& other);
  RealField& operator*=(double s) noexcept;

 private:
  Grid grid_;
  std::vector<double> values_;
};

RealField operator+(RealField a, const RealField& b);
RealField operator-(RealField a, const RealField& b);
RealField operator*(double s, RealField a);
RealField operator-(RealField a);

/// Fourier coefficients f^_{l,m}, normalized so that
/// f_{p,q} = sum_{l,m} f^_{l,m} exp(2 pi i (l x_p + m y_q) / L).
class SpectralField {
 public:
  explicit SpectralField(Grid grid);
  SpectralField(Grid grid, std::vector<std::complex<double>> coeffs);

  const GridSpec& grid() const noexcept { return *grid_; }
  const Grid& grid_ptr() const noexcept { return grid_; }

  std::span<std::complex<double>> coeffs() noexcept { return coeffs_; }
  std::span<const std::complex<double>> coeffs() const noexcept { return coeffs_; }

  /// Coefficient of integer mode (l, m).
  std::complex<double> at_mode(int l, int m) const;
  std::complex<double>& at_mode(int l, int m);

 private:
  Grid grid_;
  std::vector<std::complex<double>> coeffs_;
};

void require_same_grid(const GridSpec& a, const GridSpec& b);

SpectralField forward(const RealField& f);
/// Real part of the inverse transform; exact for conjugate-symmetric input.
RealField inverse(const SpectralField& coeffs);

/// Multiplies every Fourier coefficient by a real per-mode symbol
/// (N*N entries in spectral layout) and transforms back.
RealField apply_diagonal(const RealField& f, std::span<const double> symbol);
void multiply_symbol(SpectralField& coeffs, std::span<const double> symbol);

RealField apply_laplacian(const RealField& f);
std::pair<RealField, RealField> apply_gradient(const RealField& f);
RealField apply_divergence(const RealField& fx, const RealField& fy);

/// <f, g> = h^2 sum f g.
double inner(const RealField& f, const RealField& g);
double norm_l2(const RealField& f);
double norm_linf(const RealField& f);

}  // namespace sherk
