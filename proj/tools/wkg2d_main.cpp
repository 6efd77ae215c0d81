// wkg2d: pseudo-spectral evolution and diagnostics for the coupled
// wave / Klein-Gordon system on a periodic plane.

#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wkg/runconfig.hpp"
#include "wkg/runner.hpp"

namespace {

struct CommonOpts {
  std::string preset;
  std::string config_file;
  std::vector<std::string> overrides;
  std::string out_dir;
  std::string name;
  bool quiet = false;
};

void add_common(CLI::App& sub, CommonOpts& o) {
  sub.add_option("--preset", o.preset, "start from a named preset")
      ->check(CLI::IsMember(wkg::preset_names()));
  sub.add_option("--config", o.config_file, "key = value configuration file");
  sub.add_option("--set", o.overrides,
                 "override one key, e.g. --set grid.n=512 (repeatable)");
  sub.add_option("--out", o.out_dir, "output directory");
  sub.add_option("--name", o.name, "output file stem");
  sub.add_flag("--quiet", o.quiet, "suppress progress lines");
}

wkg::RunConfig assemble(const CommonOpts& o) {
  wkg::RunConfig cfg;
  if (!o.preset.empty()) cfg = wkg::preset(o.preset);
  if (!o.config_file.empty()) cfg = wkg::load_config_file(o.config_file, cfg);
  for (const std::string& kv : o.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos)
      wkg::fail("--set expects key=value, got '" + kv + "'");
    wkg::apply_override(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (!o.out_dir.empty()) cfg.output_dir = o.out_dir;
  if (!o.name.empty()) cfg.run_name = o.name;
  wkg::validate(cfg);
  return cfg;
}

int finish(const wkg::RunConfig& cfg, const wkg::RunResult& result) {
  const wkg::RunPaths paths = wkg::run_paths(cfg);
  wkg::write_outputs(cfg, result, paths);
  std::cout << "final t=" << result.state.t
            << "  sup_w=" << wkg::sup_norm(result.state.w)
            << "  sup_v=" << wkg::sup_norm(result.state.v) << "\n"
            << "wrote " << paths.csv << "\n"
            << "wrote " << paths.summary << "\n";
  if (cfg.write_svg) std::cout << "wrote " << paths.decay_svg << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"coupled wave / Klein-Gordon simulator"};
  app.require_subcommand(1);

  CommonOpts run_opts;
  CLI::App* run = app.add_subcommand("run", "evolve from t = 0");
  add_common(*run, run_opts);

  CommonOpts resume_opts;
  std::string checkpoint;
  CLI::App* resume =
      app.add_subcommand("resume", "continue from a checkpoint file");
  add_common(*resume, resume_opts);
  resume->add_option("--checkpoint", checkpoint, "checkpoint to continue")
      ->required();

  std::string suite = "all";
  CLI::App* verify = app.add_subcommand("verify", "run the self checks");
  verify->add_option("--suite", suite, "identities, oracles, decay or all")
      ->check(CLI::IsMember({"identities", "oracles", "decay", "all"}));

  CLI::App* schema =
      app.add_subcommand("print-config-schema", "list every configuration key");

  try {
    app.parse(argc, argv);

    if (schema->parsed()) {
      std::cout << wkg::schema_text();
      return 0;
    }
    if (run->parsed()) {
      const wkg::RunConfig cfg = assemble(run_opts);
      const wkg::RunResult result =
          wkg::run_simulation(cfg, run_opts.quiet ? nullptr : &std::cerr);
      return finish(cfg, result);
    }
    if (resume->parsed()) {
      const wkg::RunConfig cfg = assemble(resume_opts);
      const wkg::RunResult result = wkg::resume_simulation(
          cfg, checkpoint, resume_opts.quiet ? nullptr : &std::cerr);
      return finish(cfg, result);
    }
    if (verify->parsed()) {
      int fails = 0;
      if (suite == "identities" || suite == "all")
        fails += wkg::verify_identities(std::cout);
      if (suite == "oracles" || suite == "all")
        fails += wkg::verify_oracles(std::cout);
      if (suite == "decay" || suite == "all")
        fails += wkg::verify_decay(std::cout);
      std::cout << (fails == 0 ? "all checks passed"
                               : std::to_string(fails) + " check(s) failed")
                << "\n";
      return fails == 0 ? 0 : 1;
    }
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
