#include "wkg/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <fstream>
#include <optional>
#include <ostream>
#include <utility>

#include <json.hpp>

#include "wkg/common.hpp"
#include "wkg/vectorfields.hpp"

namespace wkg {

using ordered_json = nlohmann::ordered_json;

RunPaths run_paths(const RunConfig& cfg) {
  RunPaths p;
  const char* env = std::getenv("WKG2D_OUTPUT_DIR");
  p.dir = env && *env ? env : cfg.output_dir;
  const std::string base = p.dir + "/" + cfg.run_name;
  p.csv = base + ".csv";
  p.summary = base + ".summary.json";
  p.checkpoint = base + ".ckpt";
  p.decay_svg = base + ".decay.svg";
  p.energy_svg = base + ".energies.svg";
  return p;
}

namespace {

std::vector<std::pair<std::string, Field*>> aux_slots(AuxiliaryStates& a) {
  std::vector<std::pair<std::string, Field*>> v = {
      {"aux.free.u", &a.free_part.u},     {"aux.free.ut", &a.free_part.ut},
      {"aux.cubic.u", &a.cubic_part.u},   {"aux.cubic.ut", &a.cubic_part.ut},
      {"aux.divpsi.u", &a.div_psi.u},     {"aux.divpsi.ut", &a.div_psi.ut},
      {"aux.divphi.u", &a.div_phi.u},     {"aux.divphi.ut", &a.div_phi.ut},
  };
  for (int i = 0; i < 3; ++i) {
    const std::string n = std::to_string(i);
    v.emplace_back("aux.psi" + n + ".u", &a.psi[i].u);
    v.emplace_back("aux.psi" + n + ".ut", &a.psi[i].ut);
    v.emplace_back("aux.phi" + n + ".u", &a.phi[i].u);
    v.emplace_back("aux.phi" + n + ".ut", &a.phi[i].ut);
  }
  return v;
}

void save_run_checkpoint(const std::string& path, const FieldState& s,
                         const DiagnosticsSuite& suite,
                         const SmallnessReport& small,
                         std::optional<AuxiliaryStates>& aux) {
  CheckpointExtras ex;
  ex.sections.emplace_back("diag", suite.serialize());
  ex.sections.emplace_back(
      "smallness",
      std::vector<double>{small.data_sum, small.velocity_sum, small.total});
  if (aux)
    for (auto& [tag, field] : aux_slots(*aux))
      ex.sections.emplace_back(
          tag, std::vector<double>(field->data(),
                                   field->data() + field->size()));
  save_checkpoint(path, s, ex);
}

/// Advances from record index `rec_start` to the end of the run, recording
/// at every boundary and checkpointing at the configured cadence.
void evolve_loop(const RunConfig& cfg, const RunPaths& paths, FieldState& s,
                 std::optional<AuxiliaryStates>& aux, DiagnosticsSuite& suite,
                 const SmallnessReport& small, int rec_start, double horizon,
                 std::ostream* log) {
  const double dt = cfg.dt();
  const int spr = int(std::round(cfg.record_every / dt));
  const int nrec = int(std::round(cfg.t_final / cfg.record_every));
  const int ckpt_stride =
      cfg.checkpoint_every > 0.0
          ? int(std::round(cfg.checkpoint_every / cfg.record_every))
          : 0;
  Propagator prop(s.grid_ptr());

  for (int rec = rec_start + 1; rec <= nrec; ++rec) {
    for (int k = 0; k < spr; ++k) {
      if (aux)
        prop.step_with_aux(s, *aux, dt);
      else
        prop.step(s, dt);
    }
    // pin the record time exactly so restarts accumulate the same bytes
    const double texact = rec * cfg.record_every;
    if (std::abs(s.t - texact) > 1e-6)
      fail_internal("record time drifted away from the cadence");
    s.t = texact;
    if (aux) aux->t = texact;
    suite.record(s, aux ? &*aux : nullptr, horizon);
    if (log) {
      const auto& row = suite.rows().back();
      *log << "t=" << texact << "  sup_w=" << row[suite.column("sup_w")]
           << "  sup_v=" << row[suite.column("sup_v")] << "\n";
    }
    if (ckpt_stride && rec % ckpt_stride == 0) {
      std::filesystem::create_directories(paths.dir);
      save_run_checkpoint(paths.checkpoint, s, suite, small, aux);
      if (log) *log << "checkpoint written at t=" << texact << "\n";
    }
  }
}

}  // namespace

RunResult run_simulation(const RunConfig& cfg, std::ostream* log) {
  validate(cfg);
  const RunPaths paths = run_paths(cfg);
  const GridPtr grid = Grid::make(cfg.n, cfg.box);
  FieldState s = build_initial_state(grid, cfg.init, cfg.couplings);
  const double horizon = safe_horizon(cfg.box, data_radius(cfg.init));
  if (log && cfg.t_final > horizon)
    *log << "note: the run continues past the wrap-around horizon t="
         << horizon << "; later records are annotated\n";

  const SmallnessReport small = smallness_norms(s, 2);
  DiagnosticsSuite suite(cfg.diag);
  std::optional<AuxiliaryStates> aux;
  if (cfg.evolve_companions) aux = make_aux(s);

  suite.record(s, aux ? &*aux : nullptr, horizon);
  evolve_loop(cfg, paths, s, aux, suite, small, 0, horizon, log);
  return RunResult{std::move(s), std::move(suite), horizon, small, false};
}

RunResult resume_simulation(const RunConfig& cfg, const std::string& checkpoint,
                            std::ostream* log) {
  validate(cfg);
  const RunPaths paths = run_paths(cfg);
  auto [s, ex] = load_checkpoint(checkpoint);
  require(s.grid().n() == cfg.n && s.grid().L() == cfg.box,
          "checkpoint grid does not match the configuration");
  {
    const CouplingTensors& a = s.couplings;
    const CouplingTensors& b = cfg.couplings;
    bool same = a.c1 == b.c1 && a.c2 == b.c2 &&
                a.break_null_structure == b.break_null_structure;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        same = same && a.c1ab[i][j] == b.c1ab[i][j] &&
               a.c2ab[i][j] == b.c2ab[i][j];
    require(same, "checkpoint couplings do not match the configuration");
  }
  const double rec_real = s.t / cfg.record_every;
  const int rec = int(std::round(rec_real));
  require(std::abs(rec_real - rec) <= 1e-9 * std::max(1.0, rec_real),
          "checkpoint is not at a record boundary");

  const double horizon = safe_horizon(cfg.box, data_radius(cfg.init));
  DiagnosticsSuite suite(cfg.diag);
  const std::vector<double>* diag = ex.find("diag");
  require(diag != nullptr, "checkpoint has no diagnostics section");
  suite.restore(*diag);

  const std::vector<double>* sm = ex.find("smallness");
  require(sm != nullptr && sm->size() == 3,
          "checkpoint has no smallness section");
  const SmallnessReport small{(*sm)[0], (*sm)[1], (*sm)[2]};

  std::optional<AuxiliaryStates> aux;
  if (cfg.evolve_companions) {
    aux.emplace();
    aux->free_part = WavePair(s.grid_ptr());
    aux->cubic_part = WavePair(s.grid_ptr());
    for (int i = 0; i < 3; ++i) {
      aux->psi[i] = WavePair(s.grid_ptr());
      aux->phi[i] = WavePair(s.grid_ptr());
    }
    aux->div_psi = WavePair(s.grid_ptr());
    aux->div_phi = WavePair(s.grid_ptr());
    aux->t = s.t;
    for (auto& [tag, field] : aux_slots(*aux)) {
      const std::vector<double>* sec = ex.find(tag);
      require(sec != nullptr && sec->size() == field->size(),
              "checkpoint is missing companion section " + tag);
      std::copy(sec->begin(), sec->end(), field->data());
    }
  }

  if (log) *log << "resuming at t=" << s.t << "\n";
  evolve_loop(cfg, paths, s, aux, suite, small, rec, horizon, log);
  return RunResult{std::move(s), std::move(suite), horizon, small, true};
}

namespace {

ordered_json config_json(const RunConfig& c) {
  ordered_json j;
  j["grid"] = {{"n", c.n}, {"box", c.box}};
  j["time"] = {{"dt_factor", c.dt_factor},
               {"t_final", c.t_final},
               {"record_every", c.record_every},
               {"checkpoint_every", c.checkpoint_every}};
  ordered_json cj;
  cj["c1"] = c.couplings.c1;
  cj["c2"] = c.couplings.c2;
  for (int which = 0; which < 2; ++which) {
    ordered_json rows = ordered_json::array();
    for (int a = 0; a < 3; ++a) {
      ordered_json row = ordered_json::array();
      for (int b = 0; b < 3; ++b)
        row.push_back(which == 0 ? c.couplings.c1ab[a][b]
                                 : c.couplings.c2ab[a][b]);
      rows.push_back(row);
    }
    cj[which == 0 ? "c1_ab" : "c2_ab"] = rows;
  }
  cj["break_null"] = c.couplings.break_null_structure;
  j["couplings"] = cj;

  ordered_json init;
  init["seed"] = c.init.seed;
  init["random_bumps"] = c.init.random_bumps;
  ordered_json bumps = ordered_json::array();
  for (const Bump& b : c.init.bumps) {
    ordered_json bj;
    bj["target"] = b.target == Target::w ? "w" : "v";
    bj["kind"] =
        b.kind == Bump::Kind::gaussian ? "gaussian" : "modulated_gaussian";
    bj["velocity"] = b.velocity;
    bj["amplitude"] = b.amplitude;
    bj["center"] = {b.center[0], b.center[1]};
    bj["width"] = b.width;
    bj["mod_k"] = {b.mod_k[0], b.mod_k[1]};
    bj["phase"] = b.phase;
    bumps.push_back(bj);
  }
  init["bumps"] = bumps;
  j["init"] = init;

  j["diagnostics"] = {{"word_cap", c.diag.word_cap},
                      {"delta", c.diag.delta},
                      {"delta0", c.diag.delta0},
                      {"track_words", c.diag.track_words},
                      {"track_sobolev", c.diag.track_sobolev},
                      {"track_decomposition", c.diag.track_decomposition},
                      {"track_reconstruction", c.diag.track_reconstruction},
                      {"evolve_companions", c.evolve_companions}};
  j["output"] = {{"dir", c.output_dir},
                 {"name", c.run_name},
                 {"svg", c.write_svg}};
  return j;
}

ordered_json fit_json(const DecayFit& f, double t_min) {
  return {{"slope", f.slope},
          {"intercept", f.intercept},
          {"samples", f.samples},
          {"t_min", t_min}};
}

}  // namespace

void write_outputs(const RunConfig& cfg, const RunResult& result,
                   const RunPaths& paths) {
  std::filesystem::create_directories(paths.dir);
  const DiagnosticsSuite& suite = result.diagnostics;
  write_csv(paths.csv, suite.columns(), suite.rows());

  const auto& rows = suite.rows();
  const auto series = [&](const std::string& name) {
    const std::size_t c = suite.column(name);
    std::vector<double> v(rows.size());
    for (std::size_t k = 0; k < rows.size(); ++k) v[k] = rows[k][c];
    return v;
  };
  const std::vector<double> times = series("t");
  const std::vector<double> supw = series("sup_w");
  const std::vector<double> supv = series("sup_v");

  const double t_min_fit =
      cfg.t_final >= 20.0 ? 10.0 : 0.5 * cfg.t_final;
  const DecayFit fw = fit_decay(times, supw, t_min_fit);
  const DecayFit fv = fit_decay(times, supv, t_min_fit);

  ordered_json j;
  j["config"] = config_json(cfg);
  j["resumed"] = result.resumed;
  j["horizon"] = result.horizon;
  j["smallness"] = {{"data_sum", result.smallness.data_sum},
                    {"velocity_sum", result.smallness.velocity_sum},
                    {"total", result.smallness.total}};
  j["final"] = {{"t", result.state.t},
                {"sup_w", sup_norm(result.state.w)},
                {"sup_v", sup_norm(result.state.v)}};
  j["decay"] = {{"sup_w", fit_json(fw, t_min_fit)},
                {"sup_v", fit_json(fv, t_min_fit)}};

  const auto max_col = [&](const std::string& name) {
    const std::size_t c = suite.column(name);
    double m = 0.0;
    for (const auto& row : rows) m = std::max(m, row[c]);
    return m;
  };
  ordered_json peaks;
  peaks["nullform_ratio"] = max_col("nullform_ratio");
  if (cfg.diag.track_decomposition) {
    peaks["decomp_abs"] = max_col("decomp_abs");
    peaks["decomp_rel"] = max_col("decomp_rel");
  }
  if (cfg.diag.track_reconstruction) {
    peaks["recon_carrier_rel"] = max_col("recon_carrier_rel");
    peaks["recon_pairwise_rel"] = max_col("recon_pairwise_rel");
  }
  j["peaks"] = peaks;

  ordered_json boots = ordered_json::array();
  for (const auto& line : suite.bootstrap_report(5.0))
    boots.push_back({{"name", line.name},
                     {"baseline", line.baseline},
                     {"peak", line.peak},
                     {"ratio", line.ratio}});
  j["bootstrap"] = boots;

  std::ofstream out(paths.summary, std::ios::binary);
  require(out.good(), "cannot open " + paths.summary + " for writing");
  out << j.dump(2) << "\n";
  require(out.good(), "write to " + paths.summary + " failed");

  if (cfg.write_svg) {
    std::vector<PlotSeries> decay = {
        {"sup_w", times, supw},
        {"sup_v", times, supv},
        {"sup_dw_weighted", times, series("sup_dw_weighted")}};
    write_loglog_svg(paths.decay_svg, cfg.run_name + ": sup norms", decay);
    if (cfg.diag.track_words) {
      std::vector<PlotSeries> en = {{"Ew[1]", times, series("Ew[1]")},
                                    {"ESw[1]", times, series("ESw[1]")},
                                    {"Gw[1]", times, series("Gw[1]")},
                                    {"E1v[1]", times, series("E1v[1]")}};
      write_loglog_svg(paths.energy_svg, cfg.run_name + ": energies", en);
    }
  }
}

// --------------------------------------------------------------------------
// verify suites

namespace {

int report(std::ostream& out, const std::string& name, bool ok, double value) {
  out << (ok ? "ok:   " : "FAIL: ") << name << "  (" << value << ")\n";
  return ok ? 0 : 1;
}

void small_couplings(CouplingTensors& c) {
  c.c1 = 1.0;
  c.c2 = 1.0;
  c.c1ab[0][1] = 1.0;
  c.c1ab[1][2] = 0.5;
  c.c2ab[0][2] = 1.0;
  c.c2ab[1][2] = 0.5;
}

InitialDataSpec narrow_data(double scale) {
  InitialDataSpec init;
  Bump b;
  b.target = Target::w;
  b.amplitude = 1e-2 * scale;
  b.width = 1.5;
  init.bumps.push_back(b);
  b.velocity = true;
  b.amplitude = 5e-3 * scale;
  b.center[0] = 0.5;
  b.center[1] = -0.25;
  b.width = 1.4;
  init.bumps.push_back(b);
  b.target = Target::v;
  b.amplitude = 1e-2 * scale;
  b.center[0] = -0.4;
  b.center[1] = 0.3;
  b.width = 1.2;
  init.bumps.push_back(b);
  return init;
}

}  // namespace

int verify_identities(std::ostream& out) {
  int fails = 0;

  const GridPtr grid = Grid::make(192, 16.0);
  CouplingTensors cp;
  small_couplings(cp);
  FieldState s = build_initial_state(grid, narrow_data(1.0), cp);
  const Propagator prop(grid);
  const double dt = 0.5 * grid->h();
  while (s.t < 1.5 - 1e-12) prop.step(s, dt);

  const StateTables tables = build_tables(s, 3);
  {
    Field box = tables.w.at(0, 2, 0);
    box += tables.w.at(0, 0, 2);
    box -= tables.w.at(2, 0, 0);
    const double scale = std::max(sup_norm(box), 1e-300);
    double worst = 0.0;
    for (Gen g : commuting_family())
      worst = std::max(worst, commutator_residual(g, tables.w) / scale);
    worst = std::max(worst, commutator_residual(Gen::scale, tables.w) / scale);
    fails += report(out, "commutators on the evolved wave field", worst <= 1e-8,
                    worst);
  }
  {
    const RepresentationCheck rep = representation_check(tables.w);
    const double worst = std::max({rep.max_rel_dt, rep.max_rel_d1,
                                   rep.max_rel_d2, rep.max_rel_good});
    fails += report(out, "derivative representation identities", worst <= 1e-6,
                    worst);
  }
  {
    const DecompositionResidual res = decomposition_residual(s);
    fails += report(out, "divergence decomposition residual",
                    res.rel_sup <= 1e-8, res.rel_sup);
  }
  {
    const HessianCheck hc = hessian_decay_check(s);
    fails += report(out, "second derivative operator identity",
                    hc.identity_rel <= 1e-6, hc.identity_rel);
  }
  {
    const double q = ghost_q(7.0, 7.0);
    const double err = std::abs(q - 2.622057554292120);
    fails += report(out, "ghost weight normalization", err <= 1e-9, err);
  }
  {
    const NullRatio nr = nullform_pointwise_ratio(s);
    fails += report(out, "pointwise null form bound", nr.ratio <= 4.0,
                    nr.ratio);
  }
  return fails;
}

int verify_oracles(std::ostream& out) {
  int fails = 0;
  const GridPtr grid = Grid::make(128, 16.0);
  const double dt = 0.5 * grid->h();
  const Propagator prop(grid);

  const auto probe = [&](const FieldState& s,
                         const std::function<double(double)>& exact) {
    double worst = 0.0;
    const int n = grid->n();
    const int pts[3][2] = {{n / 2, n / 2}, {n / 2 + 8, n / 2}, {n / 2 + 10, n / 2 + 6}};
    for (const auto& p : pts) {
      const double x1 = grid->node(p[0]);
      const double x2 = grid->node(p[1]);
      const double r = std::hypot(x1, x2);
      worst = std::max(worst, std::abs(s.w.at(p[0], p[1]) - exact(r)));
    }
    return worst;
  };

  {
    InitialDataSpec init;
    Bump b;
    b.target = Target::w;
    b.velocity = true;
    b.amplitude = 1.0;
    b.width = 1.0;
    init.bumps.push_back(b);
    FieldState s = build_initial_state(grid, init, {});
    for (int k = 0; k < 32; ++k) prop.step(s, dt);
    const auto u1 = [](double r) { return std::exp(-r * r); };
    const double worst = probe(
        s, [&](double r) { return free_wave_from_velocity(u1, s.t, r); });
    fails += report(out, "free wave against the velocity-data quadrature",
                    worst <= 1e-5, worst);
  }
  {
    InitialDataSpec init;
    Bump b;
    b.target = Target::w;
    b.amplitude = 1.0;
    b.width = 1.0;
    init.bumps.push_back(b);
    FieldState s = build_initial_state(grid, init, {});
    for (int k = 0; k < 32; ++k) prop.step(s, dt);
    const auto u0 = [](double r) { return std::exp(-r * r); };
    const auto du0 = [](double r) { return -2.0 * r * std::exp(-r * r); };
    const double worst = probe(
        s, [&](double r) { return free_wave_from_data(u0, du0, s.t, r); });
    fails += report(out, "free wave against the position-data quadrature",
                    worst <= 1e-5, worst);
  }
  {
    // one Fourier mode under the Klein-Gordon flow
    const double k1 = grid->wavenumber(3), k2 = grid->wavenumber(4);
    const double om = std::sqrt(1.0 + k1 * k1 + k2 * k2);
    Field v(grid), vt(grid);
    for (int i = 0; i < grid->n(); ++i)
      for (int j = 0; j < grid->n(); ++j)
        v.at(i, j) = std::cos(k1 * grid->node(i) + k2 * grid->node(j));
    const Field v0 = v;
    double t = 0.0;
    for (int k = 0; k < 40; ++k) {
      prop.kg_flow(v, vt, 0.1);
      t += 0.1;
    }
    double worst = 0.0;
    for (std::size_t k = 0; k < v.size(); ++k)
      worst = std::max(worst, std::abs(v[k] - std::cos(om * t) * v0[k]));
    fails += report(out, "single-mode Klein-Gordon flow", worst <= 1e-10,
                    worst);
  }
  {
    InitialDataSpec init;
    Bump b;
    b.target = Target::w;
    b.velocity = true;
    b.amplitude = 1.0;
    b.width = 1.0;
    init.bumps.push_back(b);
    FieldState s = build_initial_state(grid, init, {});
    const double e0 = energy_wave(first_jet(s, Target::w));
    for (int k = 0; k < 200; ++k) prop.step(s, dt);
    const double e1 = energy_wave(first_jet(s, Target::w));
    const double drift = std::abs(e1 - e0) / e0;
    fails += report(out, "free wave energy conservation", drift <= 1e-11,
                    drift);
  }
  {
    // the kicks vanish without couplings, so the reversal is exact
    FieldState s = build_initial_state(grid, narrow_data(1.0), {});
    const Field w0 = s.w;
    for (int k = 0; k < 100; ++k) prop.step(s, dt);
    for (int k = 0; k < 100; ++k) prop.step(s, -dt);
    Field diff = s.w;
    diff -= w0;
    const double err = sup_norm(diff) / std::max(sup_norm(w0), 1e-300);
    fails += report(out, "linear-part time reversibility", err <= 1e-12, err);
  }
  {
    // split-step convergence: halving dt divides the error by about four
    CouplingTensors cp;
    small_couplings(cp);
    const auto evolve = [&](double step_dt) {
      FieldState s = build_initial_state(grid, narrow_data(100.0), cp);
      while (s.t < 2.0 - 1e-12) prop.step(s, step_dt);
      return s.w;
    };
    const Field ref = evolve(dt / 8.0);
    const auto err = [&](const Field& w) {
      Field d = w;
      d -= ref;
      return sup_norm(d);
    };
    const double e1 = err(evolve(dt));
    const double e2 = err(evolve(dt / 2.0));
    const double ratio = e1 / e2;
    fails += report(out, "second order splitting error",
                    ratio >= 3.2 && ratio <= 4.8, ratio);
  }
  return fails;
}

int verify_decay(std::ostream& out) {
  int fails = 0;
  RunConfig cfg;
  cfg.n = 256;
  cfg.box = 64.0;
  cfg.t_final = 40.0;
  cfg.record_every = 1.0;
  small_couplings(cfg.couplings);
  Bump b;
  b.target = Target::w;
  b.amplitude = 1e-3;
  b.width = 2.5;
  cfg.init.bumps.push_back(b);
  b.velocity = true;
  b.amplitude = 5e-4;
  b.center[0] = 1.0;
  b.center[1] = -0.5;
  cfg.init.bumps.push_back(b);
  b.target = Target::v;
  b.amplitude = 1e-3;
  b.center[0] = -0.8;
  b.center[1] = 0.6;
  cfg.init.bumps.push_back(b);
  cfg.diag.word_cap = 0;
  cfg.diag.track_words = false;
  cfg.diag.track_sobolev = false;
  cfg.diag.track_decomposition = false;
  cfg.write_svg = false;

  const RunResult res = run_simulation(cfg, nullptr);
  const auto& rows = res.diagnostics.rows();
  std::vector<double> t, sw, sv;
  const std::size_t cw = res.diagnostics.column("sup_w");
  const std::size_t cv = res.diagnostics.column("sup_v");
  for (const auto& row : rows) {
    t.push_back(row[0]);
    sw.push_back(row[cw]);
    sv.push_back(row[cv]);
  }
  const DecayFit fw = fit_decay(t, sw, 10.0);
  const DecayFit fv = fit_decay(t, sv, 10.0);
  fails += report(out, "wave sup norm decay rate",
                  std::abs(fw.slope + 0.5) <= 0.25, fw.slope);
  fails += report(out, "Klein-Gordon sup norm decay rate",
                  std::abs(fv.slope + 1.0) <= 0.3, fv.slope);
  return fails;
}

}  // namespace wkg
