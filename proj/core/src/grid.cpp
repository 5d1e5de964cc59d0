#include "sherk/grid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <string>

#include "sherk/error.hpp"

namespace sherk {

namespace detail {

// The FFTW planner is not thread-safe; execution of an existing plan is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

class FftPlans {
 public:
  explicit FftPlans(int n) {
    std::lock_guard lock(planner_mutex());
    auto* buf = fftw_alloc_complex(static_cast<std::size_t>(n) * n);
    // FFTW_ESTIMATE keeps plan selection deterministic from run to run.
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    forward_ = fftw_plan_dft_2d(n, n, buf, buf, FFTW_FORWARD, flags);
    backward_ = fftw_plan_dft_2d(n, n, buf, buf, FFTW_BACKWARD, flags);
    fftw_free(buf);
    if (forward_ == nullptr || backward_ == nullptr) {
      throw InvalidGridError("FFTW could not create a plan for N = " + std::to_string(n));
    }
  }

  ~FftPlans() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(backward_);
  }

  FftPlans(const FftPlans&) = delete;
  FftPlans& operator=(const FftPlans&) = delete;

  void run(fftw_plan plan, std::span<std::complex<double>> data) const {
    auto* p = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(plan, p, p);
  }

  fftw_plan forward_ = nullptr;
  fftw_plan backward_ = nullptr;
};

}  // namespace detail

GridSpec::GridSpec(double length, int n) : length_(length), n_(n), h_(length / n) {
  if (!(n >= 4)) {
    throw InvalidGridError("grid needs N >= 4, got N = " + std::to_string(n));
  }
  if (!(length > 0.0) || !std::isfinite(length)) {
    throw InvalidGridError("grid needs a positive finite length, got L = " +
                           std::to_string(length));
  }
  const int half = (n + 1) / 2;
  modes_.resize(n);
  wavenumber_.resize(n);
  const double k0 = 2.0 * std::numbers::pi / length;
  for (int j = 0; j < n; ++j) {
    modes_[j] = j < half ? j : j - n;
    wavenumber_[j] = k0 * modes_[j];
  }
  if (n % 2 == 0) {
    wavenumber_[n / 2] = 0.0;
  }
  lambda_.resize(points());
  const double scale = k0 * k0;
  for (int jx = 0; jx < n; ++jx) {
    for (int jy = 0; jy < n; ++jy) {
      const double l = modes_[jx];
      const double m = modes_[jy];
      lambda_[flat(jx, jy)] = scale * (l * l + m * m);
    }
  }
  plans_ = std::make_unique<detail::FftPlans>(n);
}

GridSpec::~GridSpec() = default;

int GridSpec::index_of_mode(int l) const {
  const int lo = -(n_ / 2);
  const int hi = (n_ + 1) / 2 - 1;
  if (l < lo || l > hi) {
    throw InvalidArgumentError("mode " + std::to_string(l) + " outside [" + std::to_string(lo) +
                               ", " + std::to_string(hi) + "]");
  }
  return l >= 0 ? l : l + n_;
}

void GridSpec::fft_forward(std::span<std::complex<double>> data) const {
  plans_->run(plans_->forward_, data);
}

void GridSpec::fft_backward(std::span<std::complex<double>> data) const {
  plans_->run(plans_->backward_, data);
}

Grid make_grid(double length, int n) { return std::make_shared<const GridSpec>(length, n); }

// ---------------------------------------------------------------------------

RealField::RealField(Grid grid) : grid_(std::move(grid)), values_(grid_->points(), 0.0) {}

RealField::RealField(Grid grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_->points()) {
    throw InvalidArgumentError("field has " + std::to_string(values_.size()) +
                               " values, grid needs " + std::to_string(grid_->points()));
  }
  if (!is_finite()) {
    throw InvalidArgumentError("field contains non-finite values");
  }
}

RealField RealField::sample(Grid grid, const std::function<double(double, double)>& f) {
  RealField out(grid);
  const int n = grid->size();
  for (int p = 0; p < n; ++p) {
    for (int q = 0; q < n; ++q) {
      out(p, q) = f(grid->coordinate(p), grid->coordinate(q));
    }
  }
  return out;
}

RealField RealField::constant(Grid grid, double value) {
  RealField out(std::move(grid));
  std::fill(out.values_.begin(), out.values_.end(), value);
  return out;
}

bool RealField::is_finite() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

RealField& RealField::operator+=(const RealField& other) {
  require_same_grid(*grid_, other.grid());
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

RealField& RealField::operator-=(const RealField& other) {
  require_same_grid(*grid_, other.grid());
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

RealField& RealField::operator*=(double s) noexcept {
  for (double& v : values_) v *= s;
  return *this;
}

RealField operator+(RealField a, const RealField& b) { return a += b; }
RealField operator-(RealField a, const RealField& b) { return a -= b; }
RealField operator*(double s, RealField a) { return a *= s; }
RealField operator-(RealField a) { return a *= -1.0; }

// ---------------------------------------------------------------------------

SpectralField::SpectralField(Grid grid) : grid_(std::move(grid)), coeffs_(grid_->points()) {}

SpectralField::SpectralField(Grid grid, std::vector<std::complex<double>> coeffs)
    : grid_(std::move(grid)), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != grid_->points()) {
    throw InvalidArgumentError("spectral field has the wrong number of coefficients");
  }
}

std::complex<double> SpectralField::at_mode(int l, int m) const {
  return coeffs_[grid_->flat(grid_->index_of_mode(l), grid_->index_of_mode(m))];
}

std::complex<double>& SpectralField::at_mode(int l, int m) {
  return coeffs_[grid_->flat(grid_->index_of_mode(l), grid_->index_of_mode(m))];
}

// ---------------------------------------------------------------------------

void require_same_grid(const GridSpec& a, const GridSpec& b) {
  if (!a.same_as(b)) throw GridMismatchError();
}

SpectralField forward(const RealField& f) {
  SpectralField out(f.grid_ptr());
  auto c = out.coeffs();
  auto v = f.values();
  for (std::size_t i = 0; i < v.size(); ++i) c[i] = v[i];
  f.grid().fft_forward(c);
  const double scale = 1.0 / static_cast<double>(v.size());
  for (auto& x : c) x *= scale;
  return out;
}

RealField inverse(const SpectralField& coeffs) {
  std::vector<std::complex<double>> work(coeffs.coeffs().begin(), coeffs.coeffs().end());
  coeffs.grid().fft_backward(work);
  RealField out(coeffs.grid_ptr());
  auto v = out.values();
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = work[i].real();
  return out;
}

void multiply_symbol(SpectralField& coeffs, std::span<const double> symbol) {
  auto c = coeffs.coeffs();
  if (symbol.size() != c.size()) {
    throw InvalidArgumentError("symbol size does not match the grid");
  }
  for (std::size_t i = 0; i < c.size(); ++i) c[i] *= symbol[i];
}

RealField apply_diagonal(const RealField& f, std::span<const double> symbol) {
  SpectralField c = forward(f);
  multiply_symbol(c, symbol);
  return inverse(c);
}

RealField apply_laplacian(const RealField& f) {
  SpectralField c = forward(f);
  auto lam = f.grid().lambda();
  auto coeffs = c.coeffs();
  for (std::size_t i = 0; i < coeffs.size(); ++i) coeffs[i] *= -lam[i];
  return inverse(c);
}

namespace {

// Multiplies by i k along one axis.
SpectralField derivative(const SpectralField& c, bool along_x) {
  SpectralField out = c;
  const GridSpec& g = c.grid();
  auto k = g.wavenumbers();
  auto coeffs = out.coeffs();
  const int n = g.size();
  for (int jx = 0; jx < n; ++jx) {
    for (int jy = 0; jy < n; ++jy) {
      const double kk = along_x ? k[jx] : k[jy];
      coeffs[g.flat(jx, jy)] *= std::complex<double>(0.0, kk);
    }
  }
  return out;
}

}  // namespace

std::pair<RealField, RealField> apply_gradient(const RealField& f) {
  const SpectralField c = forward(f);
  return {inverse(derivative(c, true)), inverse(derivative(c, false))};
}

RealField apply_divergence(const RealField& fx, const RealField& fy) {
  require_same_grid(fx.grid(), fy.grid());
  SpectralField dx = derivative(forward(fx), true);
  const SpectralField dy = derivative(forward(fy), false);
  auto a = dx.coeffs();
  auto b = dy.coeffs();
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  return inverse(dx);
}

double inner(const RealField& f, const RealField& g) {
  require_same_grid(f.grid(), g.grid());
  auto a = f.values();
  auto b = g.values();
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  const double h = f.grid().spacing();
  return h * h * s;
}

double norm_l2(const RealField& f) { return std::sqrt(inner(f, f)); }

double norm_linf(const RealField& f) {
  double m = 0.0;
  for (double v : f.values()) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace sherk
