#include <doctest.h>

#include <cmath>

#include "support/oracles.hpp"
#include "wkg/nullforms.hpp"

using namespace wkg;

namespace {

double sup_diff(const Field& a, const Field& b) {
  Field d = a;
  d -= b;
  return sup_norm(d);
}

/// Deterministic smooth "random" jet: incommensurate mode mixtures.
Jet scrambled_jet(const GridPtr& g, int salt) {
  Jet j{Field(g), Field(g), Field(g), Field(g)};
  Field* slots[4] = {&j.value, &j.dt, &j.d1, &j.d2};
  for (int s = 0; s < 4; ++s)
    for (int i = 0; i < g->n(); ++i)
      for (int jj = 0; jj < g->n(); ++jj) {
        const double x = g->node(i), y = g->node(jj);
        slots[s]->at(i, jj) =
            std::sin((1 + s) * 0.7 * x + 0.3 * salt) *
                std::cos((2 - s * 0.5) * 0.4 * y - 0.2 * salt) +
            0.3 * std::cos(0.9 * x * 0.5 + 1.3 * y * 0.5 + s + salt);
      }
  return j;
}

}  // namespace

TEST_CASE("metric raises the time index with a sign") {
  const GridPtr g = Grid::make(32, 4.0);
  const Jet j = scrambled_jet(g, 1);
  CHECK(&j.deriv(0) == &j.dt);
  CHECK(&j.deriv(1) == &j.d1);
  CHECK(&j.deriv(2) == &j.d2);
}

TEST_CASE("q0 is symmetric in its two slots") {
  const GridPtr g = Grid::make(32, 4.0);
  const Jet m = scrambled_jet(g, 1), n = scrambled_jet(g, 2);
  CHECK(sup_diff(q0(m, n), q0(n, m)) == 0.0);
}

TEST_CASE("q0 of a jet with itself has the expected sign pattern") {
  const GridPtr g = Grid::make(32, 4.0);
  Jet m = scrambled_jet(g, 3);
  // kill the spatial slots: q0 = -dt^2 <= 0 pointwise before dealiasing
  m.d1 *= 0.0;
  m.d2 *= 0.0;
  Field expect(g);
  for (std::size_t k = 0; k < expect.size(); ++k)
    expect[k] = -m.dt[k] * m.dt[k];
  CHECK(sup_diff(q0(m, m), dealias(expect)) < 1e-14);
}

TEST_CASE("qab is antisymmetric in both the slots and the indices") {
  const GridPtr g = Grid::make(32, 4.0);
  const Jet m = scrambled_jet(g, 4), n = scrambled_jet(g, 5);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      Field swapped = qab(a, b, n, m);
      swapped *= -1.0;
      CHECK(sup_diff(qab(a, b, m, n), swapped) == 0.0);
      Field flipped = qab(b, a, m, n);
      flipped *= -1.0;
      CHECK(sup_diff(qab(a, b, m, n), flipped) == 0.0);
    }
  CHECK(sup_norm(qab(1, 1, m, n)) == 0.0);
}

TEST_CASE("symmetric coefficient parts are inert") {
  const GridPtr g = Grid::make(32, 4.0);
  const Jet m = scrambled_jet(g, 6), n = scrambled_jet(g, 7);
  double sym[3][3];
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) sym[a][b] = 0.25 * (a + 1) * (b + 1);
  const Field with_sym = nonlinearity_bilinear(m, n, 1.0, sym, false);
  double zero[3][3] = {};
  const Field without = nonlinearity_bilinear(m, n, 1.0, zero, false);
  CHECK(sup_diff(with_sym, without) < 1e-13);
}

TEST_CASE("zero couplings give zero right-hand sides") {
  FieldState s = wkg::testing::coupled_state(32, 16.0);
  s.couplings = CouplingTensors{};
  const Rhs r = rhs(s);
  CHECK(sup_norm(r.fw) == 0.0);
  CHECK(sup_norm(r.fv) == 0.0);
}

TEST_CASE("breaking the null structure swaps q0 for the bad product") {
  FieldState s = wkg::testing::coupled_state(48, 16.0);
  const Rhs intact = rhs(s);
  s.couplings.break_null_structure = true;
  const Rhs broken = rhs(s);

  const Jet w = first_jet(s, Target::w), v = first_jet(s, Target::v);
  Field bad(s.grid_ptr());
  for (std::size_t k = 0; k < bad.size(); ++k) bad[k] = w.dt[k] * v.dt[k];
  Field expect_delta = dealias(bad);
  expect_delta -= q0(w, v);
  expect_delta *= s.couplings.c1;

  Field delta = broken.fw;
  delta -= intact.fw;
  CHECK(sup_diff(delta, expect_delta) < 1e-13);
}

TEST_CASE("the divergence decomposition matches the nonlinearity") {
  // resolved enough that the dealias tail of the products is negligible
  FieldState s = wkg::testing::coupled_state(192, 16.0);
  const DecompositionResidual res = decomposition_residual(s);
  CHECK(res.scale > 0.0);
  CHECK(res.rel_sup < 1e-10);
}

TEST_CASE("decomposition pieces vanish without wave couplings") {
  FieldState s = wkg::testing::coupled_state(32, 16.0);
  s.couplings.c1 = 0.0;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) s.couplings.c1ab[a][b] = 0.0;
  const Decomposition d = divergence_decomposition(s);
  CHECK(sup_norm(d.g) == 0.0);
  for (int a = 0; a < 3; ++a) {
    CHECK(sup_norm(d.f_lower[a]) == 0.0);
    CHECK(sup_norm(d.h_upper[a]) == 0.0);
  }
  CHECK(sup_norm(d.div_f) == 0.0);
  CHECK(sup_norm(d.div_h) == 0.0);
}
