#pragma once
/// Periodic grid on [-L, L)^2 plus the spectral primitives everything else
/// builds on: real<->complex transforms, derivative and Laplacian
/// multipliers, trapezoid quadrature, and the 2/3-rule dealias projector.
///
/// Conventions: fields are real, stored row-major with index i*n + j where
/// x1 = -L + i*h and x2 = -L + j*h. Spectra use the real-to-complex layout,
/// n x (n/2 + 1), unnormalized forward transform, 1/n^2 on the inverse.
/// Wavenumbers are integer multiples of pi/L.

#include <cmath>
#include <complex>
#include <cstddef>
#include <memory>
#include <vector>

#include "wkg/common.hpp"

struct fftw_plan_s;

namespace wkg {

class Grid;
using GridPtr = std::shared_ptr<const Grid>;

class Grid : public std::enable_shared_from_this<Grid> {
 public:
  /// n must be even and >= 8, L > 0. FFT plans are created once here
  /// (FFTW_ESTIMATE, single threaded) so repeated runs are deterministic.
  static GridPtr make(int n, double L);
  ~Grid();
  Grid(const Grid&) = delete;
  Grid& operator=(const Grid&) = delete;

  int n() const { return n_; }
  double L() const { return L_; }
  double h() const { return h_; }
  std::size_t size() const { return std::size_t(n_) * n_; }
  std::size_t spec_size() const { return std::size_t(n_) * (n_ / 2 + 1); }
  int spec_cols() const { return n_ / 2 + 1; }

  double node(int i) const { return -L_ + h_ * i; }
  /// Storage index i (0..n-1) -> signed integer frequency in [-n/2, n/2).
  int signed_freq(int i) const { return i <= n_ / 2 ? i : i - n_; }
  /// f -> f * pi / L.
  double wavenumber(int f) const { return f * pi / L_; }
  /// Wavenumber used by odd-order derivatives: the Nyquist mode is zeroed so
  /// real fields stay real and match the symmetric trig interpolant.
  double deriv_wavenumber(int i) const {
    return i == n_ / 2 ? 0.0 : wavenumber(signed_freq(i));
  }

  /// Largest kept |signed frequency| under the 2/3 rule.
  int dealias_cutoff() const { return cutoff_; }
  bool mode_kept(int f1, int f2) const {
    return std::abs(f1) <= cutoff_ && std::abs(f2) <= cutoff_;
  }

  /// Unnormalized forward transform; `out` has spec_size() entries.
  void forward(const double* in, std::complex<double>* out) const;
  /// Normalized inverse transform. Destroys `in` (FFTW c2r semantics).
  void inverse(std::complex<double>* in, double* out) const;

  /// Flat index of the node at the spatial origin, or -1 if r >= h/2 there.
  std::ptrdiff_t origin_node() const;

 private:
  Grid(int n, double L);
  int n_;
  double L_, h_;
  int cutoff_;
  fftw_plan_s* plan_r2c_ = nullptr;
  fftw_plan_s* plan_c2r_ = nullptr;
};

/// Real scalar field bound to a grid. Value semantics; operations that
/// combine fields require the same grid object.
class Field {
 public:
  Field() = default;
  explicit Field(GridPtr g, double fill = 0.0)
      : grid_(std::move(g)), v_(grid_ ? grid_->size() : 0, fill) {}

  bool empty() const { return !grid_; }
  const Grid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  std::size_t size() const { return v_.size(); }

  double* data() { return v_.data(); }
  const double* data() const { return v_.data(); }
  double& operator[](std::size_t k) { return v_[k]; }
  double operator[](std::size_t k) const { return v_[k]; }
  double& at(int i, int j) { return v_[std::size_t(i) * grid_->n() + j]; }
  double at(int i, int j) const { return v_[std::size_t(i) * grid_->n() + j]; }

  Field& operator+=(const Field& o);
  Field& operator-=(const Field& o);
  Field& operator*=(double a);
  /// this += a * o
  Field& axpy(double a, const Field& o);

 private:
  GridPtr grid_;
  std::vector<double> v_;
};

/// Spectrum in the r2c layout belonging to a grid.
class Spectrum {
 public:
  Spectrum() = default;
  explicit Spectrum(GridPtr g)
      : grid_(std::move(g)), c_(grid_ ? grid_->spec_size() : 0) {}

  const Grid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  std::size_t size() const { return c_.size(); }
  std::complex<double>* data() { return c_.data(); }
  const std::complex<double>* data() const { return c_.data(); }
  std::complex<double>& at(int i, int j2) {
    return c_[std::size_t(i) * grid_->spec_cols() + j2];
  }
  std::complex<double> at(int i, int j2) const {
    return c_[std::size_t(i) * grid_->spec_cols() + j2];
  }

 private:
  GridPtr grid_;
  std::vector<std::complex<double>> c_;
};

Spectrum to_spectrum(const Field& f);
Field to_field(const Spectrum& s);

/// Exact spectral d/dx_axis, axis in {1, 2}.
Field spectral_derivative(const Field& f, int axis);
/// Mixed spatial derivative d1^b d2^c from a precomputed spectrum.
Field spectral_mixed_derivative(const Spectrum& s, int b, int c);
Field laplacian(const Field& f);

/// h^2 * sum of nodal values (the torus trapezoid rule).
double integrate(const Field& f);
double sup_norm(const Field& f);
double l2_norm(const Field& f);  // sqrt(integrate(f^2))

/// 2/3-rule projector. Idempotent; commutes with spectral derivatives.
Field dealias(const Field& f);
void dealias_inplace(Spectrum& s);

/// Pointwise product followed by the dealias projector.
Field dealiased_product(const Field& a, const Field& b);

/// Parseval sum: (1/n^2) sum_k weight_k |F_k|^2 with r2c double counting,
/// equal to sum_x f(x)^2. Exposed for tests.
double parseval_sum(const Spectrum& s);

/// Nodal coordinate values x_axis, axis in {1, 2}.
Field coordinate_field(const GridPtr& g, int axis);
/// Nodal radius |x|.
Field radius_field(const GridPtr& g);

}  // namespace wkg
