#include "wkg/propagate.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/trapezoidal.hpp>
#include <cmath>
#include <utility>

#include "wkg/common.hpp"

namespace wkg {

AuxiliaryStates make_aux(const FieldState& s) {
  const GridPtr& g = s.grid_ptr();
  AuxiliaryStates a;
  a.t = s.t;
  a.free_part = WavePair(g);
  a.free_part.u = s.w;
  a.free_part.ut = s.wt;
  a.cubic_part = WavePair(g);
  for (int i = 0; i < 3; ++i) {
    a.psi[i] = WavePair(g);
    a.phi[i] = WavePair(g);
  }
  a.div_psi = WavePair(g);
  a.div_phi = WavePair(g);

  // d^a psi_a and d_a phi^a start with velocity F_0 resp. H^0 pushed through
  // the zero data of the forced pairs.
  const Decomposition d = divergence_decomposition(s);
  a.div_psi.ut = d.f_lower[0];
  a.div_psi.ut *= -1.0;
  a.div_phi.ut = d.h_upper[0];
  return a;
}

Field reconstruct_carrier(const AuxiliaryStates& a) {
  Field out = a.free_part.u;
  out += a.cubic_part.u;
  out += a.div_psi.u;
  out += a.div_phi.u;
  return out;
}

Field reconstruct_pairwise(const AuxiliaryStates& a) {
  Field out = a.free_part.u;
  out += a.cubic_part.u;
  out -= a.psi[0].ut;
  out += spectral_derivative(a.psi[1].u, 1);
  out += spectral_derivative(a.psi[2].u, 2);
  out += a.phi[0].ut;
  out += spectral_derivative(a.phi[1].u, 1);
  out += spectral_derivative(a.phi[2].u, 2);
  return out;
}

Propagator::Propagator(GridPtr g) : grid_(std::move(g)) {
  require(grid_ != nullptr, "propagator needs a grid");
}

const Propagator::Multipliers& Propagator::multipliers(double dt) const {
  auto it = cache_.find(dt);
  if (it != cache_.end()) return it->second;

  const Grid& g = *grid_;
  Multipliers m;
  const std::size_t ns = g.spec_size();
  m.wave_cos.resize(ns);
  m.wave_sinc.resize(ns);
  m.wave_msin.resize(ns);
  m.kg_cos.resize(ns);
  m.kg_sinc.resize(ns);
  m.kg_msin.resize(ns);

  std::size_t k = 0;
  for (int i = 0; i < g.n(); ++i) {
    const double k1 = g.wavenumber(g.signed_freq(i));
    for (int j2 = 0; j2 < g.spec_cols(); ++j2, ++k) {
      const double k2 = g.wavenumber(j2);
      const double s2 = k1 * k1 + k2 * k2;
      const double s = std::sqrt(s2);
      if (s == 0.0) {
        m.wave_cos[k] = 1.0;
        m.wave_sinc[k] = dt;  // the mean grows linearly under the free flow
        m.wave_msin[k] = 0.0;
      } else {
        m.wave_cos[k] = std::cos(s * dt);
        m.wave_sinc[k] = std::sin(s * dt) / s;
        m.wave_msin[k] = -s * std::sin(s * dt);
      }
      const double om = std::sqrt(1.0 + s2);
      m.kg_cos[k] = std::cos(om * dt);
      m.kg_sinc[k] = std::sin(om * dt) / om;
      m.kg_msin[k] = -om * std::sin(om * dt);
    }
  }
  return cache_.emplace(dt, std::move(m)).first->second;
}

void Propagator::flow(Field& u, Field& ut, double dt, bool kg) const {
  require(u.grid_ptr() == grid_ && ut.grid_ptr() == grid_,
          "field grid does not match the propagator grid");
  const Multipliers& m = multipliers(dt);
  const std::vector<double>& c = kg ? m.kg_cos : m.wave_cos;
  const std::vector<double>& sc = kg ? m.kg_sinc : m.wave_sinc;
  const std::vector<double>& ms = kg ? m.kg_msin : m.wave_msin;

  Spectrum su = to_spectrum(u);
  Spectrum sut = to_spectrum(ut);
  for (std::size_t k = 0; k < su.size(); ++k) {
    const std::complex<double> a = su.data()[k];
    const std::complex<double> b = sut.data()[k];
    su.data()[k] = c[k] * a + sc[k] * b;
    sut.data()[k] = ms[k] * a + c[k] * b;
  }
  u = to_field(su);
  ut = to_field(sut);
}

void Propagator::wave_flow(Field& u, Field& ut, double dt) const {
  flow(u, ut, dt, false);
}

void Propagator::kg_flow(Field& u, Field& ut, double dt) const {
  flow(u, ut, dt, true);
}

void Propagator::step_impl(FieldState& s, AuxiliaryStates* aux,
                           double dt) const {
  require(s.grid_ptr() == grid_, "state grid does not match the propagator");
  if (aux)
    require(aux->t == s.t, "companion pairs are not at the state time");
  const double half = 0.5 * dt;

  const auto kick = [&] {
    // The sources depend on wt and vt, so a plain increment would cost an
    // order of accuracy. Explicit midpoint in the velocity slots keeps the
    // split second order; the companion kicks read the same midpoint state,
    // which keeps their telescoped sum equal to the main kick exactly.
    const double quarter = 0.5 * half;
    const Rhs r0 = rhs(s);
    s.wt.axpy(quarter, r0.fw);
    s.vt.axpy(quarter, r0.fv);
    const Rhs r = rhs(s);
    if (aux) {
      const Decomposition d = divergence_decomposition(s);
      aux->cubic_part.ut.axpy(half, d.g);
      for (int i = 0; i < 3; ++i) {
        aux->psi[i].ut.axpy(half, d.f_lower[i]);
        aux->phi[i].ut.axpy(half, d.h_upper[i]);
      }
      aux->div_psi.ut.axpy(half, d.div_f);
      aux->div_phi.ut.axpy(half, d.div_h);
    }
    s.wt.axpy(-quarter, r0.fw);
    s.vt.axpy(-quarter, r0.fv);
    s.wt.axpy(half, r.fw);
    s.vt.axpy(half, r.fv);
  };

  kick();
  flow(s.w, s.wt, dt, false);
  flow(s.v, s.vt, dt, true);
  if (aux) {
    flow(aux->free_part.u, aux->free_part.ut, dt, false);
    flow(aux->cubic_part.u, aux->cubic_part.ut, dt, false);
    for (int i = 0; i < 3; ++i) {
      flow(aux->psi[i].u, aux->psi[i].ut, dt, false);
      flow(aux->phi[i].u, aux->phi[i].ut, dt, false);
    }
    flow(aux->div_psi.u, aux->div_psi.ut, dt, false);
    flow(aux->div_phi.u, aux->div_phi.ut, dt, false);
    aux->t = s.t + dt;
  }
  s.t += dt;
  kick();
  check_state_sane(s);
}

void Propagator::step(FieldState& s, double dt) const {
  step_impl(s, nullptr, dt);
}

void Propagator::step_with_aux(FieldState& s, AuxiliaryStates& aux,
                               double dt) const {
  step_impl(s, &aux, dt);
}

double safe_horizon(double box_half_width, double data_radius) {
  return std::max(0.0, box_half_width - data_radius);
}

namespace {

using boost::math::quadrature::gauss_kronrod;
using boost::math::quadrature::trapezoidal;

/// Average of p(|x + rho w|) over unit vectors w, at |x| = r. The integrand
/// is smooth and periodic in the angle, where the doubling trapezoid rule
/// converges spectrally.
double ring_average(const std::function<double(double)>& p, double r,
                    double rho, double tol) {
  const auto f = [&](double phi) {
    const double s2 = r * r + rho * rho + 2.0 * r * rho * std::cos(phi);
    return p(std::sqrt(std::max(0.0, s2)));
  };
  return trapezoidal(f, 0.0, pi, tol, 20) / pi;
}

/// Average of w . grad u0(x + rho w) for a radial profile with derivative
/// du0. Smooth radial data has du0(s)/s bounded near zero.
double ring_average_directional(const std::function<double(double)>& du0,
                                double r, double rho, double tol) {
  const auto f = [&](double phi) {
    const double cph = std::cos(phi);
    const double s2 = r * r + rho * rho + 2.0 * r * rho * cph;
    const double s = std::sqrt(std::max(0.0, s2));
    if (s < 1e-14) return 0.0;
    return du0(s) * (rho + r * cph) / s;
  };
  return trapezoidal(f, 0.0, pi, tol, 20) / pi;
}

}  // namespace

double free_wave_from_velocity(const std::function<double(double)>& u1,
                               double t, double r, double tol) {
  if (t == 0.0) return 0.0;
  const double inner_tol = 0.1 * tol;
  const auto f = [&](double th) {
    const double sth = std::sin(th);
    return sth * ring_average(u1, r, t * sth, inner_tol);
  };
  return t * gauss_kronrod<double, 15>::integrate(f, 0.0, 0.5 * pi, 10, tol);
}

double free_wave_from_data(const std::function<double(double)>& u0,
                           const std::function<double(double)>& du0, double t,
                           double r, double tol) {
  if (t == 0.0) return u0(r);
  const double inner_tol = 0.1 * tol;
  const auto fm = [&](double th) {
    const double sth = std::sin(th);
    return sth * ring_average(u0, r, t * sth, inner_tol);
  };
  const auto fn = [&](double th) {
    const double sth = std::sin(th);
    return sth * sth * ring_average_directional(du0, r, t * sth, inner_tol);
  };
  const double m = gauss_kronrod<double, 15>::integrate(fm, 0.0, 0.5 * pi, 10, tol);
  const double nn = gauss_kronrod<double, 15>::integrate(fn, 0.0, 0.5 * pi, 10, tol);
  return m + t * nn;
}

}  // namespace wkg
