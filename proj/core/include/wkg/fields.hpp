#pragma once
/// Evolution state for the coupled wave / Klein-Gordon pair, initial data
/// construction, data smallness norms, and the checkpoint container.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "wkg/grid.hpp"

namespace wkg {

/// Constant coefficients multiplying the null forms on each equation.
/// Only the antisymmetric part of the [3][3] tensors is dynamically active.
struct CouplingTensors {
  double c1 = 0.0;        // Q0 coefficient, wave equation
  double c2 = 0.0;        // Q0 coefficient, KG equation
  double c1ab[3][3] = {}; // Q_{ab} coefficients, wave equation
  double c2ab[3][3] = {}; // Q_{ab} coefficients, KG equation
  /// Diagnostic A/B switch: replace Q0 by the plain product dt(w)*dt(v).
  bool break_null_structure = false;
};

enum class Target { w, v };

struct Bump {
  enum class Kind { gaussian, modulated_gaussian };
  Kind kind = Kind::gaussian;
  Target target = Target::w;
  /// false: contributes to the field value; true: to its time derivative.
  bool velocity = false;
  double amplitude = 0.0;
  double center[2] = {0.0, 0.0};
  double width = 1.0;
  /// modulated_gaussian only: cos(mod_k . (x - center) + phase) factor.
  double mod_k[2] = {0.0, 0.0};
  double phase = 0.0;
};

struct InitialDataSpec {
  std::vector<Bump> bumps;
  std::uint64_t seed = 0;
  /// Extra seeded gaussian bumps appended deterministically (half on w,
  /// half on v velocity slots).
  int random_bumps = 0;
};

/// Effective support radius: largest |x| where any bump exceeds 1e-12.
double data_radius(const InitialDataSpec& spec);

struct FieldState {
  double t = 0.0;
  Field w, wt, v, vt;
  CouplingTensors couplings;

  const GridPtr& grid_ptr() const { return w.grid_ptr(); }
  const Grid& grid() const { return w.grid(); }
};

/// Builds the t = 0 state. Fails if the data support radius reaches L/2.
FieldState build_initial_state(const GridPtr& grid, const InitialDataSpec& spec,
                               const CouplingTensors& couplings);

/// Trips the blow-up detector: any |value| > 1e6 or non-finite entry.
void check_state_sane(const FieldState& s);

/// Weighted data norms measuring the smallness parameter. Sums run over all
/// distinct mixed spatial derivatives of total order k <= order_cap:
///   value slots:    min(L1, L2) of <x>^k d^m w0   +  L2 of <x>^{k+1} log(2+|x|) d^m v0
///   velocity slots: min(L1, L2) of <x>^{k+1} d^m w1 + L2 of <x>^{k+2} log(2+|x|) d^m v1
struct SmallnessReport {
  double data_sum = 0.0;      // (w0, v0) part
  double velocity_sum = 0.0;  // (w1, v1) part
  double total = 0.0;
};
SmallnessReport smallness_norms(const FieldState& s, int order_cap);

/// Checkpoint container: fixed header (version, n, L, t, coupling tensors),
/// the four field arrays as row-major little-endian f64, then tagged
/// auxiliary sections (doubles) so resumed runs can restore accumulators and
/// co-evolved states.
struct CheckpointExtras {
  std::vector<std::pair<std::string, std::vector<double>>> sections;

  const std::vector<double>* find(const std::string& tag) const;
};

void save_checkpoint(const std::string& path, const FieldState& s,
                     const CheckpointExtras& extras = {});
/// Reconstructs the grid from the header.
std::pair<FieldState, CheckpointExtras> load_checkpoint(const std::string& path);

}  // namespace wkg
