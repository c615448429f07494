#include "axiswirl/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>

#include "axiswirl/error.hpp"

namespace axiswirl {

namespace {

// FFTW planning is not thread-safe, execution on fresh arrays is. Plans are
// built once per size under a lock and shared. FFTW_ESTIMATE keeps the chosen
// algorithm, and therefore the rounding, identical from run to run.
class FftPlans {
 public:
  FftPlans(const FftPlans&) = delete;
  FftPlans& operator=(const FftPlans&) = delete;

  static const FftPlans& for_size(std::size_t n) {
    static std::mutex mutex;
    static std::map<std::size_t, std::unique_ptr<FftPlans>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[n];
    if (!slot) slot.reset(new FftPlans(n));
    return *slot;
  }

  ~FftPlans() {
    fftw_destroy_plan(r2c_);
    fftw_destroy_plan(c2r_);
  }

  void r2c(const double* in, std::complex<double>* out) const {
    fftw_execute_dft_r2c(r2c_, const_cast<double*>(in), reinterpret_cast<fftw_complex*>(out));
  }
  // Destroys the contents of `in`.
  void c2r(std::complex<double>* in, double* out) const {
    fftw_execute_dft_c2r(c2r_, reinterpret_cast<fftw_complex*>(in), out);
  }

 private:
  explicit FftPlans(std::size_t n) {
    std::vector<double> real(n);
    std::vector<std::complex<double>> cplx(n / 2 + 1);
    const int len = static_cast<int>(n);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    r2c_ = fftw_plan_dft_r2c_1d(len, real.data(), reinterpret_cast<fftw_complex*>(cplx.data()), flags);
    c2r_ = fftw_plan_dft_c2r_1d(len, reinterpret_cast<fftw_complex*>(cplx.data()), real.data(), flags);
  }

  fftw_plan r2c_ = nullptr;
  fftw_plan c2r_ = nullptr;
};

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

void require_same_grid(const ScalarField& a, const ScalarField& b) {
  if (!(a.grid() == b.grid())) throw BadParams("fields live on different grids");
}

// Applies a per-mode multiplier m(k) and transforms back.
template <class Multiplier>
ScalarField apply_multiplier(const ScalarField& f, Multiplier&& m) {
  Spectrum c = forward(f);
  for (std::size_t k = 0; k < c.size(); ++k) c[k] *= m(k);
  return inverse(f.grid(), c);
}

}  // namespace

PeriodicGrid::PeriodicGrid(std::size_t n_nodes) : n_(n_nodes) {
  if (n_nodes < 8 || !is_power_of_two(n_nodes)) {
    throw BadParams("grid size must be a power of two >= 8, got " + std::to_string(n_nodes));
  }
}

ScalarField::ScalarField(PeriodicGrid grid, double value)
    : grid_(grid), values_(grid.size(), value) {}

ScalarField::ScalarField(PeriodicGrid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) throw BadParams("field length does not match grid");
}

double ScalarField::mean() const noexcept {
  double s = 0.0;
  for (double x : values_) s += x;
  return s / static_cast<double>(values_.size());
}

double ScalarField::max() const noexcept { return *std::max_element(values_.begin(), values_.end()); }

double ScalarField::min() const noexcept { return *std::min_element(values_.begin(), values_.end()); }

double ScalarField::inf_norm() const noexcept {
  double m = 0.0;
  for (double x : values_) m = std::max(m, std::abs(x));
  return m;
}

double ScalarField::l2_norm() const noexcept {
  double s = 0.0;
  for (double x : values_) s += x * x;
  return std::sqrt(s / static_cast<double>(values_.size()));
}

bool ScalarField::all_finite() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [](double x) { return std::isfinite(x); });
}

ScalarField& ScalarField::operator+=(const ScalarField& other) {
  require_same_grid(*this, other);
  for (std::size_t j = 0; j < values_.size(); ++j) values_[j] += other.values_[j];
  return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& other) {
  require_same_grid(*this, other);
  for (std::size_t j = 0; j < values_.size(); ++j) values_[j] -= other.values_[j];
  return *this;
}

ScalarField& ScalarField::operator*=(double s) noexcept {
  for (double& x : values_) x *= s;
  return *this;
}

ScalarField& ScalarField::operator+=(double s) noexcept {
  for (double& x : values_) x += s;
  return *this;
}

ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
ScalarField operator*(ScalarField a, double s) { return a *= s; }
ScalarField operator*(double s, ScalarField a) { return a *= s; }

ScalarField product(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a, b);
  ScalarField out(a.grid());
  for (std::size_t j = 0; j < a.size(); ++j) out[j] = a[j] * b[j];
  return out;
}

double inner(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a, b);
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) s += a[j] * b[j];
  return s / static_cast<double>(a.size());
}

Spectrum forward(const ScalarField& f) {
  const std::size_t n = f.size();
  Spectrum c(n / 2 + 1);
  FftPlans::for_size(n).r2c(f.values().data(), c.data());
  const double scale = 1.0 / static_cast<double>(n);
  for (auto& x : c) x *= scale;
  return c;
}

ScalarField inverse(const PeriodicGrid& grid, const Spectrum& coeffs) {
  if (coeffs.size() != grid.spectrum_size()) throw BadParams("spectrum length does not match grid");
  Spectrum work = coeffs;
  ScalarField out(grid);
  FftPlans::for_size(grid.size()).c2r(work.data(), out.values().data());
  return out;
}

ScalarField derivative(const ScalarField& f) {
  const std::size_t nyquist = f.size() / 2;
  return apply_multiplier(f, [nyquist](std::size_t k) {
    return k == nyquist ? std::complex<double>{} : std::complex<double>{0.0, wavenumber(k)};
  });
}

ScalarField second_derivative(const ScalarField& f) {
  return apply_multiplier(f, [](std::size_t k) {
    const double kk = wavenumber(k);
    return std::complex<double>{-kk * kk, 0.0};
  });
}

ScalarField invert_stream(const ScalarField& v) {
  const double scale = v.inf_norm();
  if (std::abs(v.mean()) > 1e-12 * scale) {
    throw NonZeroMean("stream inversion needs a mean-zero field, mean = " + std::to_string(v.mean()));
  }
  const std::size_t nyquist = v.size() / 2;
  // psi_k = -v_k / (i 2 pi k) = i v_k / (2 pi k)
  return apply_multiplier(v, [nyquist](std::size_t k) {
    if (k == 0 || k == nyquist) return std::complex<double>{};
    return std::complex<double>{0.0, 1.0 / wavenumber(k)};
  });
}

ScalarField dealias(const ScalarField& f) {
  const std::size_t n = f.size();
  return apply_multiplier(f, [n](std::size_t k) { return dealias_keeps(k, n) ? 1.0 : 0.0; });
}

ScalarField diffuse_implicit(const ScalarField& f, double nu_dt) {
  if (!(nu_dt >= 0.0)) throw BadParams("nu*dt must be non-negative");
  if (nu_dt == 0.0) return f;
  return apply_multiplier(f, [nu_dt](std::size_t k) {
    const double kk = wavenumber(k);
    return 1.0 / (1.0 + nu_dt * kk * kk);
  });
}

double spectral_l2_norm(const ScalarField& f) {
  const Spectrum c = forward(f);
  const std::size_t nyquist = f.size() / 2;
  double s = std::norm(c[0]) + std::norm(c[nyquist]);
  for (std::size_t k = 1; k < nyquist; ++k) s += 2.0 * std::norm(c[k]);
  return std::sqrt(s);
}

}  // namespace axiswirl
