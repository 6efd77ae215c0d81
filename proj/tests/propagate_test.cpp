#include <doctest.h>

#include <cmath>

#include "support/oracles.hpp"
#include "wkg/propagate.hpp"

using namespace wkg;

namespace {

double sup_diff(const Field& a, const Field& b) {
  Field d = a;
  d -= b;
  return sup_norm(d);
}

}  // namespace

TEST_CASE("wave flow advances a lattice mode by the dispersion phase") {
  const GridPtr g = Grid::make(64, 8.0);
  const double k1 = g->wavenumber(3), k2 = g->wavenumber(-2);
  const double kk = std::hypot(k1, k2);
  Field u(g), ut(g);
  for (int i = 0; i < g->n(); ++i)
    for (int j = 0; j < g->n(); ++j)
      u.at(i, j) = std::cos(k1 * g->node(i) + k2 * g->node(j));
  const Field u0 = u;
  const Propagator prop(g);
  double t = 0.0;
  for (int s = 0; s < 10; ++s) {
    prop.wave_flow(u, ut, 0.21);
    t += 0.21;
  }
  double worst = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k)
    worst = std::max(worst, std::abs(u[k] - std::cos(kk * t) * u0[k]));
  CHECK(worst < 1e-12);
}

TEST_CASE("the wave mean grows linearly in time") {
  const GridPtr g = Grid::make(32, 4.0);
  Field u(g, 0.75), ut(g, -0.5);
  const Propagator prop(g);
  prop.wave_flow(u, ut, 0.4);
  CHECK(sup_diff(u, Field(g, 0.75 - 0.5 * 0.4)) < 1e-14);
  CHECK(sup_diff(ut, Field(g, -0.5)) < 1e-14);
}

TEST_CASE("the klein gordon mean oscillates at unit frequency") {
  const GridPtr g = Grid::make(32, 4.0);
  Field u(g, 1.0), ut(g);
  const Propagator prop(g);
  double t = 0.0;
  for (int s = 0; s < 16; ++s) {
    prop.kg_flow(u, ut, 0.125);
    t += 0.125;
  }
  CHECK(sup_diff(u, Field(g, std::cos(t))) < 1e-13);
  CHECK(sup_diff(ut, Field(g, -std::sin(t))) < 1e-13);
}

TEST_CASE("flows invert under negated time steps") {
  FieldState s = wkg::testing::coupled_state(48, 16.0);
  const Field w0 = s.w, v0 = s.v;
  const Propagator prop(s.grid_ptr());
  prop.wave_flow(s.w, s.wt, 0.37);
  prop.wave_flow(s.w, s.wt, -0.37);
  prop.kg_flow(s.v, s.vt, 0.37);
  prop.kg_flow(s.v, s.vt, -0.37);
  CHECK(sup_diff(s.w, w0) < 1e-14);
  CHECK(sup_diff(s.v, v0) < 1e-14);
}

TEST_CASE("a step with zero couplings is the pure linear flow") {
  FieldState s = wkg::testing::coupled_state(48, 16.0);
  s.couplings = CouplingTensors{};
  FieldState manual = s;
  const Propagator prop(s.grid_ptr());
  prop.step(s, 0.1);
  prop.wave_flow(manual.w, manual.wt, 0.1);
  prop.kg_flow(manual.v, manual.vt, 0.1);
  CHECK(sup_diff(s.w, manual.w) == 0.0);
  CHECK(sup_diff(s.v, manual.v) == 0.0);
  CHECK(s.t == 0.1);
}

TEST_CASE("companion evolution leaves the main trajectory untouched") {
  FieldState a = wkg::testing::coupled_state(48, 16.0);
  FieldState b = a;
  AuxiliaryStates aux = make_aux(b);
  const Propagator prop(a.grid_ptr());
  const double dt = 0.5 * a.grid().h();
  for (int k = 0; k < 5; ++k) {
    prop.step(a, dt);
    prop.step_with_aux(b, aux, dt);
  }
  CHECK(sup_diff(a.w, b.w) == 0.0);
  CHECK(sup_diff(a.wt, b.wt) == 0.0);
  CHECK(sup_diff(a.v, b.v) == 0.0);
  CHECK(sup_diff(a.vt, b.vt) == 0.0);
  CHECK(aux.t == b.t);
}

TEST_CASE("companions start from the decomposition of the initial state") {
  FieldState s = wkg::testing::coupled_state(48, 16.0);
  const AuxiliaryStates aux = make_aux(s);
  CHECK(sup_diff(aux.free_part.u, s.w) == 0.0);
  CHECK(sup_diff(aux.free_part.ut, s.wt) == 0.0);
  CHECK(sup_norm(aux.cubic_part.u) == 0.0);
  const Decomposition d = divergence_decomposition(s);
  Field neg_f0 = d.f_lower[0];
  neg_f0 *= -1.0;
  CHECK(sup_diff(aux.div_psi.ut, neg_f0) == 0.0);
  CHECK(sup_diff(aux.div_phi.ut, d.h_upper[0]) == 0.0);
  for (int i = 0; i < 3; ++i) CHECK(sup_norm(aux.psi[i].u) == 0.0);
}

TEST_CASE("the carrier reconstruction tracks w to roundoff") {
  // no bump on the Klein-Gordon value slot, so the carrier data is exact;
  // the triple products in the cubic source need the finer grid
  FieldState s = wkg::testing::coupled_state(192, 16.0);
  AuxiliaryStates aux = make_aux(s);
  const Propagator prop(s.grid_ptr());
  const double dt = 0.5 * s.grid().h();
  for (int k = 0; k < 24; ++k) prop.step_with_aux(s, aux, dt);
  const double rel =
      sup_diff(reconstruct_carrier(aux), s.w) / sup_norm(s.w);
  CHECK(rel < 1e-12);
  // the pairwise contraction only reproduces w to the splitting order
  const double rel_pair =
      sup_diff(reconstruct_pairwise(aux), s.w) / sup_norm(s.w);
  CHECK(rel_pair < 1e-2);
  CHECK(rel_pair > rel);
}

TEST_CASE("safe horizon subtracts the data radius") {
  CHECK(safe_horizon(32.0, 10.5) == 21.5);
  CHECK(safe_horizon(4.0, 9.0) == 0.0);
}

TEST_CASE("free wave quadratures match the Fourier-Bessel values") {
  for (const auto& p : wkg::testing::free_wave_velocity_points) {
    const double got =
        free_wave_from_velocity([](double r) { return std::exp(-r * r); },
                                p.t, p.r);
    CHECK(std::abs(got - p.value) < 1e-8);
  }
  const auto u0 = [](double r) { return std::exp(-r * r); };
  const auto du0 = [](double r) { return -2.0 * r * std::exp(-r * r); };
  for (const auto& p : wkg::testing::free_wave_data_points) {
    const double got = free_wave_from_data(u0, du0, p.t, p.r);
    CHECK(std::abs(got - p.value) < 1e-8);
  }
  CHECK(free_wave_from_data(u0, du0, 0.0, 1.3) == u0(1.3));
  CHECK(free_wave_from_velocity(u0, 0.0, 1.3) == 0.0);
}

TEST_CASE("mismatched grids are rejected") {
  FieldState s = wkg::testing::coupled_state(32, 16.0);
  const Propagator prop(Grid::make(64, 8.0));
  CHECK_THROWS(prop.step(s, 0.1));
}
