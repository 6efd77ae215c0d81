#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "support/oracles.hpp"
#include "wkg/runner.hpp"

using namespace wkg;

namespace {

RunConfig tiny_config(const std::string& name) {
  RunConfig cfg;
  cfg.n = 64;
  cfg.box = 16.0;
  cfg.t_final = 1.0;
  cfg.record_every = 0.5;
  cfg.couplings = wkg::testing::test_couplings();
  cfg.init = wkg::testing::test_data(1.0);
  cfg.diag.word_cap = 1;
  cfg.output_dir =
      (std::filesystem::temp_directory_path() / "wkg2d_runner_test").string();
  cfg.run_name = name;
  return cfg;
}

}  // namespace

TEST_CASE("paths derive from the config and honor the environment override") {
  RunConfig cfg = tiny_config("alpha");
  const RunPaths p = run_paths(cfg);
  CHECK(p.csv == cfg.output_dir + "/alpha.csv");
  CHECK(p.summary == cfg.output_dir + "/alpha.summary.json");
  CHECK(p.checkpoint == cfg.output_dir + "/alpha.ckpt");

  ::setenv("WKG2D_OUTPUT_DIR", "/elsewhere", 1);
  const RunPaths q = run_paths(cfg);
  ::unsetenv("WKG2D_OUTPUT_DIR");
  CHECK(q.csv == "/elsewhere/alpha.csv");
  CHECK(q.dir == "/elsewhere");
}

TEST_CASE("a short run records the expected rows and columns") {
  const RunConfig cfg = tiny_config("short");
  const RunResult res = run_simulation(cfg);
  CHECK(res.state.t == 1.0);
  CHECK(res.diagnostics.rows().size() == 3);  // t = 0, 0.5, 1
  CHECK(!res.resumed);
  CHECK(res.horizon > 0.0);
  CHECK(res.smallness.total > 0.0);
  const auto& cols = res.diagnostics.columns();
  for (const char* name :
       {"t", "sup_w", "sup_v", "nullform_ratio", "Ew[1]", "ghost[Om.2]"})
    CHECK(std::find(cols.begin(), cols.end(), name) != cols.end());
  CHECK(res.diagnostics.rows().back()[0] == 1.0);
}

TEST_CASE("outputs land on disk and the summary parses") {
  RunConfig cfg = tiny_config("files");
  const RunResult res = run_simulation(cfg);
  const RunPaths p = run_paths(cfg);
  write_outputs(cfg, res, p);
  CHECK(std::filesystem::exists(p.csv));
  CHECK(std::filesystem::exists(p.summary));
  CHECK(std::filesystem::exists(p.decay_svg));
  CHECK(std::filesystem::exists(p.energy_svg));

  std::ifstream in(p.summary);
  const nlohmann::json j = nlohmann::json::parse(in);
  CHECK(j["config"]["grid"]["n"] == 64);
  CHECK(j["final"]["t"] == 1.0);
  CHECK(j["decay"]["sup_w"]["t_min"] == 0.5);  // half of a short run
  CHECK(j["resumed"] == false);
  CHECK(j["peaks"]["nullform_ratio"].get<double>() <= 4.0);

  std::ifstream csv(p.csv);
  std::string header;
  std::getline(csv, header);
  CHECK(header.substr(0, 2) == "t,");
  std::filesystem::remove_all(cfg.output_dir);
}

TEST_CASE("resume demands a matching configuration") {
  RunConfig cfg = tiny_config("strict");
  cfg.checkpoint_every = 0.5;
  const RunPaths p = run_paths(cfg);
  (void)run_simulation(cfg);
  REQUIRE(std::filesystem::exists(p.checkpoint));

  RunConfig other = cfg;
  other.n = 32;
  CHECK_THROWS(resume_simulation(other, p.checkpoint));
  other = cfg;
  other.couplings.c1 = 2.0;
  CHECK_THROWS(resume_simulation(other, p.checkpoint));
  other = cfg;
  other.record_every = 0.75;  // t = 1 checkpoint is not on this cadence
  other.t_final = 1.5;
  CHECK_THROWS(resume_simulation(other, p.checkpoint));

  RunConfig more = cfg;
  more.t_final = 1.5;
  const RunResult res = resume_simulation(more, p.checkpoint);
  CHECK(res.resumed);
  CHECK(res.state.t == 1.5);
  CHECK(res.diagnostics.rows().size() == 4);
  std::filesystem::remove_all(cfg.output_dir);
}

TEST_CASE("runs past the horizon are annotated, not rejected") {
  RunConfig cfg = tiny_config("late");
  cfg.t_final = 6.0;  // the horizon is box - data radius, a bit over 4
  cfg.record_every = 1.0;
  cfg.diag.word_cap = 0;
  cfg.diag.track_words = false;
  cfg.diag.track_sobolev = false;
  cfg.diag.track_decomposition = false;
  // narrow the box so the horizon falls inside the run
  cfg.box = 8.0;
  cfg.n = 32;
  cfg.init.bumps.resize(1);
  cfg.init.bumps[0].width = 0.8;
  const RunResult res = run_simulation(cfg);
  const std::size_t c = res.diagnostics.column("beyond_horizon");
  CHECK(res.diagnostics.rows().front()[c] == 0.0);
  CHECK(res.diagnostics.rows().back()[c] == 1.0);
}
