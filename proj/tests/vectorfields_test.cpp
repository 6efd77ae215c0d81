#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "support/oracles.hpp"
#include "wkg/propagate.hpp"
#include "wkg/vectorfields.hpp"

using namespace wkg;

namespace {

double sup_diff(const Field& a, const Field& b) {
  Field d = a;
  d -= b;
  return sup_norm(d);
}

FieldState evolved_state(int n, double box, double t_end) {
  FieldState s = wkg::testing::coupled_state(n, box);
  const Propagator prop(s.grid_ptr());
  const double dt = 0.5 * s.grid().h();
  while (s.t < t_end - 1e-12) prop.step(s, dt);
  return s;
}

}  // namespace

TEST_CASE("canonical word counts match the multiset numbers") {
  CHECK(canonical_words(0).size() == 1);
  CHECK(canonical_words(1).size() == 7);
  CHECK(canonical_words(2).size() == 28);
  CHECK(canonical_words(3).size() == 84);
  // non-decreasing and unique
  const auto words = canonical_words(3);
  std::set<std::string> labels;
  for (const GammaWord& w : words) {
    CHECK(std::is_sorted(w.begin(), w.end()));
    labels.insert(word_label(w));
  }
  CHECK(labels.size() == words.size());
}

TEST_CASE("word labels") {
  CHECK(word_label({}) == "1");
  CHECK(word_label({Gen::dt}) == "dt");
  CHECK(word_label({Gen::boost1, Gen::rot}) == "H1.Om");
  CHECK(gen_label(Gen::scale) == "S");
}

TEST_CASE("table entries enumerate mixed derivatives without collision") {
  const GridPtr g = Grid::make(16, 4.0);
  DerivTable u(g, 0.0, 3);
  CHECK(DerivTable::count(0) == 1);
  CHECK(DerivTable::count(1) == 4);
  CHECK(DerivTable::count(2) == 10);
  CHECK(DerivTable::count(3) == 20);
  std::set<const Field*> seen;
  for (int a = 0; a + 0 <= 3; ++a)
    for (int b = 0; a + b <= 3; ++b)
      for (int c = 0; a + b + c <= 3; ++c) seen.insert(&u.at(a, b, c));
  CHECK(seen.size() == DerivTable::count(3));
  CHECK_THROWS(u.at(2, 1, 1));   // total order 4
  CHECK_THROWS(u.at(-1, 0, 0));  // negative
}

TEST_CASE("build_tables reproduces the state and its equation of motion") {
  const FieldState s = evolved_state(96, 16.0, 0.5);
  const StateTables t = build_tables(s, 2);
  CHECK(sup_diff(t.w.at(0, 0, 0), s.w) == 0.0);
  CHECK(sup_diff(t.w.at(1, 0, 0), s.wt) == 0.0);
  CHECK(sup_diff(t.v.at(0, 0, 0), s.v) == 0.0);
  CHECK(sup_diff(t.w.at(0, 1, 0), spectral_derivative(s.w, 1)) == 0.0);
  CHECK(sup_diff(t.v.at(0, 0, 1), spectral_derivative(s.v, 2)) == 0.0);

  const Rhs r = rhs(s);
  Field wtt = laplacian(s.w);
  wtt += r.fw;
  CHECK(sup_diff(t.w.at(2, 0, 0), wtt) == 0.0);
  Field vtt = laplacian(s.v);
  vtt -= s.v;
  vtt += r.fv;
  CHECK(sup_diff(t.v.at(2, 0, 0), vtt) == 0.0);
}

TEST_CASE("rotation annihilates a radial snapshot") {
  const GridPtr g = Grid::make(96, 16.0);
  InitialDataSpec init;
  Bump b;
  b.target = Target::w;
  b.amplitude = 0.4;
  b.width = 1.3;
  init.bumps.push_back(b);
  const FieldState s = build_initial_state(g, init, {});
  const StateTables t = build_tables(s, 1);
  const DerivTable rot = apply_generator(t.w, Gen::rot);
  CHECK(sup_norm(rot.at(0, 0, 0)) < 1e-11);
}

TEST_CASE("generator values match their defining combinations") {
  const FieldState s = evolved_state(64, 16.0, 0.5);
  const StateTables tab = build_tables(s, 2);
  const Field x1 = coordinate_field(s.grid_ptr(), 1);
  const Field x2 = coordinate_field(s.grid_ptr(), 2);
  const double t = s.t;

  Field rot_expect(s.grid_ptr());
  Field h1_expect(s.grid_ptr());
  Field sc_expect(s.grid_ptr());
  const Field& ut = tab.w.at(1, 0, 0);
  const Field& u1 = tab.w.at(0, 1, 0);
  const Field& u2 = tab.w.at(0, 0, 1);
  for (std::size_t k = 0; k < x1.size(); ++k) {
    rot_expect[k] = x1[k] * u2[k] - x2[k] * u1[k];
    h1_expect[k] = t * u1[k] + x1[k] * ut[k];
    sc_expect[k] = t * ut[k] + x1[k] * u1[k] + x2[k] * u2[k];
  }
  const double scale = sup_norm(ut) + sup_norm(u1) + sup_norm(u2);
  CHECK(sup_diff(apply_generator(tab.w, Gen::rot).at(0, 0, 0), rot_expect) <
        1e-13 * scale);
  CHECK(sup_diff(apply_generator(tab.w, Gen::boost1).at(0, 0, 0), h1_expect) <
        1e-13 * scale);
  CHECK(sup_diff(apply_generator(tab.w, Gen::scale).at(0, 0, 0), sc_expect) <
        1e-13 * scale);
}

TEST_CASE("word application composes left to right") {
  const FieldState s = evolved_state(64, 16.0, 0.5);
  const StateTables tab = build_tables(s, 2);
  const GammaWord w = {Gen::boost1, Gen::rot};
  const DerivTable once = word_table(w, tab.w);
  const DerivTable steps =
      apply_generator(apply_generator(tab.w, Gen::boost1), Gen::rot);
  CHECK(sup_diff(once.at(0, 0, 0), steps.at(0, 0, 0)) == 0.0);
  CHECK(sup_diff(apply_word(w, s, Target::w), steps.at(0, 0, 0)) == 0.0);
}

TEST_CASE("commutators with the wave operator vanish on tables") {
  const FieldState s = evolved_state(96, 16.0, 1.0);
  const StateTables tab = build_tables(s, 3);
  Field box = tab.w.at(0, 2, 0);
  box += tab.w.at(0, 0, 2);
  box -= tab.w.at(2, 0, 0);
  const double scale = std::max(sup_norm(box), 1e-300);
  for (Gen g : commuting_family())
    CHECK(commutator_residual(g, tab.w) < 1e-8 * scale);
  CHECK(commutator_residual(Gen::scale, tab.w) < 1e-8 * scale);
}

TEST_CASE("derivatives are reconstructed from the symmetry fields") {
  const FieldState s = evolved_state(96, 16.0, 1.0);
  const StateTables tab = build_tables(s, 2);
  const RepresentationCheck rep = representation_check(tab.w);
  CHECK(rep.checked > 0);
  CHECK(rep.max_rel_dt < 1e-6);
  CHECK(rep.max_rel_d1 < 1e-6);
  CHECK(rep.max_rel_d2 < 1e-6);
  CHECK(rep.max_rel_good < 1e-6);
}

TEST_CASE("good derivatives drop the singular weight at the origin node") {
  const FieldState s = evolved_state(64, 16.0, 0.5);
  const Jet j = first_jet(s, Target::w);
  const GoodDerivative g1 = good_derivative(j, 1);
  REQUIRE(g1.excluded_node >= 0);
  // x_i / r is indeterminate there, so only the plain derivative remains
  CHECK(g1.field[std::size_t(g1.excluded_node)] ==
        j.d1[std::size_t(g1.excluded_node)]);
  // elsewhere it equals (x_i/r) dt + d_i
  const Field r = radius_field(s.grid_ptr());
  const Field x1 = coordinate_field(s.grid_ptr(), 1);
  double worst = 0.0;
  for (std::size_t k = 0; k < r.size(); ++k) {
    if (std::ptrdiff_t(k) == g1.excluded_node) continue;
    const double expect = x1[k] / r[k] * j.dt[k] + j.d1[k];
    worst = std::max(worst, std::abs(g1.field[k] - expect));
  }
  CHECK(worst < 1e-14);
}

TEST_CASE("the hessian operator identity holds on evolved states") {
  const FieldState s = evolved_state(96, 16.0, 1.1);
  const HessianCheck hc = hessian_decay_check(s);
  CHECK(hc.fw_sup > 0.0);
  CHECK(hc.identity_rel < 1e-8);
  CHECK(hc.ratio_max > 0.0);
  CHECK(std::isfinite(hc.ratio_max));
}

TEST_CASE("tables below the required order are rejected") {
  const FieldState s = evolved_state(32, 16.0, 0.5);
  const StateTables tab = build_tables(s, 2);
  CHECK_THROWS(commutator_residual(Gen::rot, tab.w));  // needs order 3
  CHECK_THROWS(build_tables(s, 6));                    // above the cap
}
