#include "wkg/grid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>

#include "wkg/common.hpp"

namespace wkg {

Grid::Grid(int n, double L) : n_(n), L_(L), h_(2.0 * L / n) {
  // Keep |f| <= floor((2/3) * (n/2)); the Nyquist mode always falls out.
  cutoff_ = (2 * (n_ / 2)) / 3;

  // Plans are created on scratch buffers and reused on caller arrays via the
  // new-array interface. FFTW_UNALIGNED so std::vector storage is always
  // acceptable; FFTW_ESTIMATE keeps planning deterministic.
  std::vector<double> rbuf(size());
  std::vector<std::complex<double>> cbuf(spec_size());
  auto* cb = reinterpret_cast<fftw_complex*>(cbuf.data());
  plan_r2c_ = fftw_plan_dft_r2c_2d(n_, n_, rbuf.data(), cb,
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
  plan_c2r_ = fftw_plan_dft_c2r_2d(n_, n_, cb, rbuf.data(),
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (!plan_r2c_ || !plan_c2r_) fail_internal("fftw plan creation failed");
}

Grid::~Grid() {
  if (plan_c2r_) fftw_destroy_plan(plan_c2r_);
  if (plan_r2c_) fftw_destroy_plan(plan_r2c_);
}

GridPtr Grid::make(int n, double L) {
  require(n >= 8, "grid.n must be >= 8");
  require(n % 2 == 0, "grid.n must be even");
  require(L > 0.0, "grid.L must be positive");
  return GridPtr(new Grid(n, L));
}

void Grid::forward(const double* in, std::complex<double>* out) const {
  fftw_execute_dft_r2c(plan_r2c_, const_cast<double*>(in),
                       reinterpret_cast<fftw_complex*>(out));
}

void Grid::inverse(std::complex<double>* in, double* out) const {
  fftw_execute_dft_c2r(plan_c2r_, reinterpret_cast<fftw_complex*>(in), out);
  const double scale = 1.0 / double(size());
  for (std::size_t k = 0; k < size(); ++k) out[k] *= scale;
}

std::ptrdiff_t Grid::origin_node() const {
  // Nodes sit at -L + i*h; the origin is hit exactly when i = j = n/2.
  const int i0 = n_ / 2;
  if (std::abs(node(i0)) < 0.5 * h_)
    return std::ptrdiff_t(i0) * n_ + i0;
  return -1;
}

static void check_same_grid(const Field& a, const Field& b) {
  if (&a.grid() != &b.grid()) fail("fields live on different grids");
}

Field& Field::operator+=(const Field& o) {
  check_same_grid(*this, o);
  for (std::size_t k = 0; k < v_.size(); ++k) v_[k] += o.v_[k];
  return *this;
}

Field& Field::operator-=(const Field& o) {
  check_same_grid(*this, o);
  for (std::size_t k = 0; k < v_.size(); ++k) v_[k] -= o.v_[k];
  return *this;
}

Field& Field::operator*=(double a) {
  for (double& x : v_) x *= a;
  return *this;
}

Field& Field::axpy(double a, const Field& o) {
  check_same_grid(*this, o);
  for (std::size_t k = 0; k < v_.size(); ++k) v_[k] += a * o.v_[k];
  return *this;
}

Spectrum to_spectrum(const Field& f) {
  require(!f.empty(), "empty field");
  Spectrum s(f.grid_ptr());
  f.grid().forward(f.data(), s.data());
  return s;
}

Field to_field(const Spectrum& s) {
  Spectrum scratch = s;  // c2r destroys its input
  Field f(s.grid_ptr());
  s.grid().inverse(scratch.data(), f.data());
  return f;
}

Field spectral_derivative(const Field& f, int axis) {
  require(axis == 1 || axis == 2, "derivative axis must be 1 or 2");
  Spectrum s = to_spectrum(f);
  const Grid& g = f.grid();
  const int cols = g.spec_cols();
  for (int i = 0; i < g.n(); ++i) {
    const double k1 = g.deriv_wavenumber(i);
    for (int j = 0; j < cols; ++j) {
      const double k = axis == 1 ? k1 : g.deriv_wavenumber(j);
      s.data()[std::size_t(i) * cols + j] *= std::complex<double>(0.0, k);
    }
  }
  Field out(f.grid_ptr());
  g.inverse(s.data(), out.data());
  return out;
}

Field spectral_mixed_derivative(const Spectrum& sp, int b, int c) {
  const Grid& g = sp.grid();
  Spectrum s = sp;
  const int cols = g.spec_cols();
  for (int i = 0; i < g.n(); ++i) {
    const std::complex<double> m1 =
        std::pow(std::complex<double>(0.0, g.deriv_wavenumber(i)), b);
    for (int j = 0; j < cols; ++j) {
      const std::complex<double> m2 =
          std::pow(std::complex<double>(0.0, g.deriv_wavenumber(j)), c);
      s.data()[std::size_t(i) * cols + j] *= m1 * m2;
    }
  }
  Field out(sp.grid_ptr());
  g.inverse(s.data(), out.data());
  return out;
}

Field laplacian(const Field& f) {
  Spectrum s = to_spectrum(f);
  const Grid& g = f.grid();
  const int cols = g.spec_cols();
  for (int i = 0; i < g.n(); ++i) {
    // |k|^2 is even in k, so the true Nyquist wavenumber is kept here.
    const double k1 = g.wavenumber(g.signed_freq(i));
    for (int j = 0; j < cols; ++j) {
      const double k2 = g.wavenumber(j);  // r2c columns are already >= 0
      s.data()[std::size_t(i) * cols + j] *= -(k1 * k1 + k2 * k2);
    }
  }
  Field out(f.grid_ptr());
  g.inverse(s.data(), out.data());
  return out;
}

double integrate(const Field& f) {
  require(!f.empty(), "empty field");
  double acc = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) acc += f[k];
  return acc * sqr(f.grid().h());
}

double sup_norm(const Field& f) {
  double m = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) m = std::max(m, std::abs(f[k]));
  return m;
}

double l2_norm(const Field& f) {
  double acc = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) acc += sqr(f[k]);
  return std::sqrt(acc * sqr(f.grid().h()));
}

void dealias_inplace(Spectrum& s) {
  const Grid& g = s.grid();
  const int cols = g.spec_cols();
  for (int i = 0; i < g.n(); ++i) {
    const int f1 = g.signed_freq(i);
    for (int j = 0; j < cols; ++j) {
      if (!g.mode_kept(f1, j)) s.data()[std::size_t(i) * cols + j] = 0.0;
    }
  }
}

Field dealias(const Field& f) {
  Spectrum s = to_spectrum(f);
  dealias_inplace(s);
  Field out(f.grid_ptr());
  f.grid().inverse(s.data(), out.data());
  return out;
}

Field dealiased_product(const Field& a, const Field& b) {
  check_same_grid(a, b);
  Field p(a.grid_ptr());
  for (std::size_t k = 0; k < p.size(); ++k) p[k] = a[k] * b[k];
  return dealias(p);
}

Field coordinate_field(const GridPtr& g, int axis) {
  require(axis == 1 || axis == 2, "coordinate axis must be 1 or 2");
  Field out(g);
  for (int i = 0; i < g->n(); ++i)
    for (int j = 0; j < g->n(); ++j)
      out.at(i, j) = g->node(axis == 1 ? i : j);
  return out;
}

Field radius_field(const GridPtr& g) {
  Field out(g);
  for (int i = 0; i < g->n(); ++i)
    for (int j = 0; j < g->n(); ++j)
      out.at(i, j) = std::hypot(g->node(i), g->node(j));
  return out;
}

double parseval_sum(const Spectrum& s) {
  const Grid& g = s.grid();
  const int cols = g.spec_cols();
  double acc = 0.0;
  for (int i = 0; i < g.n(); ++i) {
    for (int j = 0; j < cols; ++j) {
      const double w = (j == 0 || j == g.n() / 2) ? 1.0 : 2.0;
      acc += w * std::norm(s.at(i, j));
    }
  }
  return acc / double(g.size());
}

}  // namespace wkg
