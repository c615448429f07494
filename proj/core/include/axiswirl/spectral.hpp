#pragma once

#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

namespace axiswirl {

/// Uniform mesh of the unit-period interval [0, 1). Node j sits at z = j/N.
/// N must be a power of two no smaller than 8.
class PeriodicGrid {
 public:
  explicit PeriodicGrid(std::size_t n_nodes);

  std::size_t size() const noexcept { return n_; }
  double spacing() const noexcept { return 1.0 / static_cast<double>(n_); }
  double node(std::size_t j) const noexcept {
    return static_cast<double>(j) / static_cast<double>(n_);
  }
  /// Number of non-negative Fourier modes held by a real transform, N/2 + 1.
  std::size_t spectrum_size() const noexcept { return n_ / 2 + 1; }

  friend bool operator==(const PeriodicGrid&, const PeriodicGrid&) = default;

 private:
  std::size_t n_;
};

/// Node values of one real unknown on a PeriodicGrid.
class ScalarField {
 public:
  explicit ScalarField(PeriodicGrid grid, double value = 0.0);
  ScalarField(PeriodicGrid grid, std::vector<double> values);

  template <class F>
  static ScalarField sample(PeriodicGrid grid, F&& f) {
    ScalarField out(grid);
    for (std::size_t j = 0; j < grid.size(); ++j) out.values_[j] = f(grid.node(j));
    return out;
  }

  const PeriodicGrid& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return values_.size(); }
  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }
  double operator[](std::size_t j) const noexcept { return values_[j]; }
  double& operator[](std::size_t j) noexcept { return values_[j]; }

  /// Rectangle-rule integral over one period; equals the node average.
  double mean() const noexcept;
  double max() const noexcept;
  double min() const noexcept;
  double inf_norm() const noexcept;
  /// sqrt of the integral of f^2 over one period.
  double l2_norm() const noexcept;
  bool all_finite() const noexcept;

  ScalarField& operator+=(const ScalarField& other);
  ScalarField& operator-=(const ScalarField& other);
  ScalarField& operator*=(double s) noexcept;
  ScalarField& operator+=(double s) noexcept;

 private:
  PeriodicGrid grid_;
  std::vector<double> values_;
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(ScalarField a, double s);
ScalarField operator*(double s, ScalarField a);
/// Pointwise product.
ScalarField product(const ScalarField& a, const ScalarField& b);
/// Rectangle-rule integral of a*b over one period.
double inner(const ScalarField& a, const ScalarField& b);

/// Fourier coefficients c_k, k = 0..N/2, of f(z) = sum_k c_k exp(2 pi i k z).
/// Negative modes are the conjugates of the positive ones.
using Spectrum = std::vector<std::complex<double>>;

inline double wavenumber(std::size_t k) noexcept {
  return 2.0 * std::numbers::pi * static_cast<double>(k);
}

/// Modes kept by the 2/3 rule: |k| <= N/3.
inline bool dealias_keeps(std::size_t k, std::size_t n) noexcept { return 3 * k <= n; }

Spectrum forward(const ScalarField& f);
ScalarField inverse(const PeriodicGrid& grid, const Spectrum& coeffs);

ScalarField derivative(const ScalarField& f);
ScalarField second_derivative(const ScalarField& f);

/// Returns psi with d/dz psi = -v and zero mean. Throws NonZeroMean if
/// |mean(v)| > 1e-12 * max|v|.
ScalarField invert_stream(const ScalarField& v);

/// Zeroes Fourier modes with |k| > N/3.
ScalarField dealias(const ScalarField& f);

/// Solves g - nu_dt * g_zz = f (one backward-Euler diffusion step).
ScalarField diffuse_implicit(const ScalarField& f, double nu_dt);

/// sqrt(sum over all modes |c_k|^2); equals f.l2_norm() by Parseval.
double spectral_l2_norm(const ScalarField& f);

}  // namespace axiswirl
