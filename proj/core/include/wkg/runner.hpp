#pragma once
/// Orchestration: the record/checkpoint evolution loop, resume, output
/// writing, and the self-check suites behind the verify command.

#include <iosfwd>
#include <string>

#include "wkg/diagnostics.hpp"
#include "wkg/propagate.hpp"
#include "wkg/runconfig.hpp"

namespace wkg {

/// Output locations derived from the config. WKG2D_OUTPUT_DIR, when set,
/// replaces the directory (and nothing else).
struct RunPaths {
  std::string dir, csv, summary, checkpoint, decay_svg, energy_svg;
};
RunPaths run_paths(const RunConfig& cfg);

struct RunResult {
  FieldState state;  // at t_final
  DiagnosticsSuite diagnostics;
  double horizon = 0.0;
  SmallnessReport smallness;
  bool resumed = false;
};

/// Evolves from t = 0. Records at the configured cadence (including t = 0),
/// writes checkpoints when enabled, stops with an error on blow-up.
RunResult run_simulation(const RunConfig& cfg, std::ostream* log = nullptr);

/// Continues a checkpointed run under the same configuration; the restored
/// rows plus the new ones match an uninterrupted run byte for byte.
RunResult resume_simulation(const RunConfig& cfg, const std::string& checkpoint,
                            std::ostream* log = nullptr);

/// CSV, summary JSON, optional SVG plots.
void write_outputs(const RunConfig& cfg, const RunResult& result,
                   const RunPaths& paths);

/// Self-check suites: one "ok:"/"FAIL:" line per check; returns the number
/// of failures.
int verify_identities(std::ostream& out);
int verify_oracles(std::ostream& out);
int verify_decay(std::ostream& out);

}  // namespace wkg
