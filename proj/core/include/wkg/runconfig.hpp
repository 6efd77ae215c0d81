#pragma once
/// Run configuration: flat sectioned key = value files, two built-in
/// presets, dotted-key overrides, and a printable schema. The schema table
/// is the single source of truth; the parser, the override path and the
/// printed documentation all read from it.

#include <string>
#include <vector>

#include "wkg/diagnostics.hpp"
#include "wkg/fields.hpp"

namespace wkg {

struct RunConfig {
  // [grid]
  int n = 256;
  double box = 32.0;  // fields live on [-box, box)^2

  // [time]
  double dt_factor = 0.5;        // dt = dt_factor * h
  double t_final = 20.0;
  double record_every = 0.5;     // must be an integer number of steps
  double checkpoint_every = 0.0; // 0 disables; multiple of record_every

  // [couplings]
  CouplingTensors couplings;

  // [init] and [bump.N]
  InitialDataSpec init;

  // [diagnostics]
  DiagnosticsConfig diag;
  bool evolve_companions = false;

  // [output]
  std::string output_dir = "out";
  std::string run_name = "run";
  bool write_svg = true;

  double h() const { return 2.0 * box / n; }
  double dt() const { return dt_factor * h(); }
};

/// One schema row; `section` uses "bump.<k>" for the indexed bump sections.
struct ConfigKey {
  std::string section, key, type, doc;
};
const std::vector<ConfigKey>& config_schema();

/// Human-readable schema listing, one line per key.
std::string schema_text();

std::vector<std::string> preset_names();
/// "default-eps" or "theorem-decay"; fails on anything else.
RunConfig preset(const std::string& name);

/// Parses file content on top of `base`. The first [bump.N] section in the
/// text clears any bumps inherited from the base. Unknown keys fail with a
/// nearest-match suggestion.
RunConfig parse_config_text(const std::string& text, RunConfig base);
RunConfig load_config_file(const std::string& path, RunConfig base);

/// Applies one "section.key=value" override ("bump.0.amplitude=0.01"
/// addresses bump 0; index == current count appends a default bump).
void apply_override(RunConfig& cfg, const std::string& dotted,
                    const std::string& value);

/// Cross-field checks: cadences divide evenly, reconstruction tracking has
/// companions enabled, and so on. Fails with a message on violation.
void validate(const RunConfig& cfg);

}  // namespace wkg
