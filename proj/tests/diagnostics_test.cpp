#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "support/oracles.hpp"
#include "wkg/diagnostics.hpp"
#include "wkg/runconfig.hpp"

using namespace wkg;

namespace {

FieldState gaussian_value_state(const GridPtr& g, Target target, double a,
                                double w) {
  InitialDataSpec init;
  Bump b;
  b.target = target;
  b.amplitude = a;
  b.width = w;
  init.bumps.push_back(b);
  return build_initial_state(g, init, {});
}

}  // namespace

TEST_CASE("wave energy of a gaussian is pi a^2, independent of the width") {
  const GridPtr g = Grid::make(128, 24.0);
  for (const double w : {1.0, 1.7}) {
    const FieldState s = gaussian_value_state(g, Target::w, 0.1, w);
    const double e = energy_wave(first_jet(s, Target::w));
    CHECK(std::abs(e - pi * 0.01) < 1e-10);
  }
}

TEST_CASE("klein gordon energy adds the mass term") {
  const GridPtr g = Grid::make(128, 16.0);
  const double a = 0.2, w = 1.3;
  const FieldState s = gaussian_value_state(g, Target::v, a, w);
  const double exact = pi * a * a * (1.0 + w * w / 2.0);
  CHECK(std::abs(energy_kg(first_jet(s, Target::v)) - exact) <
        1e-10 * exact);
}

TEST_CASE("conformal charge of a static gaussian is half the mass term") {
  // at t = 0: (Su + u)^2 = (r u' + u)^2 integrates to pi a^2 w^2 / 2
  const GridPtr g = Grid::make(128, 16.0);
  const double a = 0.15, w = 1.2;
  const FieldState s = gaussian_value_state(g, Target::w, a, w);
  const StateTables tab = build_tables(s, 1);
  const double exact = pi * a * a * w * w / 2.0;
  CHECK(std::abs(conformal_energy(tab.w) - exact) < 1e-10 * exact);
}

TEST_CASE("weighted sup of the value applies the t + r bracket") {
  const GridPtr g = Grid::make(32, 8.0);
  Field u(g);
  u.at(20, 12) = -2.0;  // single spike
  const double r = std::hypot(g->node(20), g->node(12));
  const double t = 3.0;
  const double expect = std::sqrt(1.0 + (t + r) * (t + r)) * 2.0;
  CHECK(weighted_sup_value(u, t) == doctest::Approx(expect).epsilon(1e-14));
}

TEST_CASE("ghost antiderivative values are pinned") {
  CHECK(std::abs(ghost_q(7.0, 7.0) - wkg::testing::ghost_q_cone) < 1e-12);
  CHECK(std::abs(ghost_q(0.0, 1.0) - wkg::testing::ghost_q_one) < 1e-12);
  CHECK(ghost_q(10.0, 3.0) < ghost_q(10.0, 4.0));  // increasing in r
  CHECK(ghost_q(4.0, 1.0) == ghost_q(13.0, 10.0));  // depends on r - t only
}

TEST_CASE("decay fits recover a pure power law") {
  std::vector<double> t, v;
  for (int k = 1; k <= 40; ++k) {
    t.push_back(0.5 * k);
    v.push_back(7.0 * std::pow(0.5 * k, -1.3));
  }
  const DecayFit f = fit_decay(t, v, 4.0);
  CHECK(std::abs(f.slope + 1.3) < 1e-12);
  CHECK(std::abs(f.intercept - std::log(7.0)) < 1e-12);
  CHECK(f.samples == 33);
  // nonpositive values and early times are skipped
  v[0] = 0.0;
  const DecayFit g = fit_decay(t, v, 4.0);
  CHECK(g.samples == 33);
}

TEST_CASE("the pointwise null ratio stays under the structural bound") {
  const FieldState s = wkg::testing::coupled_state(64, 16.0);
  const NullRatio nr = nullform_pointwise_ratio(s);
  CHECK(nr.ratio <= 4.0);
  CHECK(nr.ratio > 0.0);
}

TEST_CASE("the record stream serializes and restores exactly") {
  RunConfig cfg;
  cfg.n = 64;
  cfg.box = 16.0;
  cfg.couplings = wkg::testing::test_couplings();
  cfg.init = wkg::testing::test_data(1.0);
  cfg.diag.word_cap = 1;
  cfg.diag.track_reconstruction = false;

  DiagnosticsSuite suite(cfg.diag);
  FieldState s = build_initial_state(Grid::make(cfg.n, cfg.box), cfg.init,
                                     cfg.couplings);
  const Propagator prop(s.grid_ptr());
  const double horizon = safe_horizon(cfg.box, data_radius(cfg.init));
  suite.record(s, nullptr, horizon);
  for (int rec = 0; rec < 3; ++rec) {
    for (int k = 0; k < 2; ++k) prop.step(s, 0.125);
    s.t = 0.25 * (rec + 1);
    suite.record(s, nullptr, horizon);
  }

  DiagnosticsSuite copy(cfg.diag);
  copy.restore(suite.serialize());
  REQUIRE(copy.rows().size() == suite.rows().size());
  for (std::size_t i = 0; i < suite.rows().size(); ++i)
    CHECK(copy.rows()[i] == suite.rows()[i]);

  // both continue identically after the roundtrip
  for (int k = 0; k < 2; ++k) prop.step(s, 0.125);
  s.t = 1.0;
  FieldState s2 = s;
  suite.record(s, nullptr, horizon);
  copy.record(s2, nullptr, horizon);
  CHECK(copy.rows().back() == suite.rows().back());
}

TEST_CASE("records demand strictly increasing times") {
  DiagnosticsConfig cfg;
  cfg.word_cap = 0;
  cfg.track_words = false;
  cfg.track_sobolev = false;
  cfg.track_decomposition = false;
  DiagnosticsSuite suite(cfg);
  FieldState s = wkg::testing::coupled_state(32, 16.0);
  suite.record(s, nullptr, 10.0);
  CHECK_THROWS(suite.record(s, nullptr, 10.0));  // same t again
}

TEST_CASE("reconstruction tracking needs companion states") {
  DiagnosticsConfig cfg;
  cfg.word_cap = 0;
  cfg.track_words = false;
  cfg.track_sobolev = false;
  cfg.track_decomposition = false;
  cfg.track_reconstruction = true;
  DiagnosticsSuite suite(cfg);
  FieldState s = wkg::testing::coupled_state(32, 16.0);
  CHECK_THROWS(suite.record(s, nullptr, 10.0));
}

TEST_CASE("csv output is stable and exact") {
  const std::string path =
      (std::filesystem::temp_directory_path() / "wkg2d_test_csv.csv").string();
  const std::vector<std::string> cols = {"t", "value"};
  const std::vector<std::vector<double>> rows = {
      {0.0, 1.0 / 3.0}, {0.5, 1e-300}, {1.0, -7.25}};
  write_csv(path, cols, rows);
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  CHECK(line == "t,value");
  std::getline(in, line);
  CHECK(line == "0,0.33333333333333331");
  std::getline(in, line);
  CHECK(line == "0.5,1e-300");
  std::getline(in, line);
  CHECK(line == "1,-7.25");
  std::filesystem::remove(path);
}

TEST_CASE("the svg plot contains one polyline per series") {
  const std::string path =
      (std::filesystem::temp_directory_path() / "wkg2d_test_plot.svg")
          .string();
  std::vector<PlotSeries> series = {
      {"a", {1.0, 2.0, 4.0}, {1.0, 0.5, 0.25}},
      {"b", {1.0, 2.0, 4.0}, {2.0, 2.0, 2.0}},
  };
  write_loglog_svg(path, "test", series);
  std::ifstream in(path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  CHECK(text.find("<svg") != std::string::npos);
  std::size_t count = 0, pos = 0;
  while ((pos = text.find("<polyline", pos)) != std::string::npos) {
    ++count;
    pos += 9;
  }
  CHECK(count >= 2);
  CHECK(text.find(">a<") != std::string::npos);
  CHECK(text.find(">b<") != std::string::npos);
  std::filesystem::remove(path);
}
