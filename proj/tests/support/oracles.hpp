#pragma once
// Reference values frozen from independent closed forms, plus the small
// state builders shared by the test binaries.
//
// Free wave values come from the radial Fourier-Bessel representation: for
// data (u0, u1) = (e^{-r^2}, 0) or (0, e^{-r^2}) the solution is
//   u(t, r) = int_0^inf m(kt) J_0(kr) e^{-k^2/4} / 2 dk,
// with m = cos for position data and m(kt) = sin(kt) (after the 1/k from
// the propagator cancels against the measure) for velocity data. The ghost
// values are incomplete beta integrals. All digits checked at 25-digit
// working precision.

#include "wkg/fields.hpp"
#include "wkg/grid.hpp"

namespace wkg::testing {

struct RadialPoint {
  double t, r, value;
};

// data (0, e^{-r^2})
inline constexpr RadialPoint free_wave_velocity_points[] = {
    {3.0, 0.0, 0.17827103061055829},
    {3.0, 1.7, 0.23623048786201831},
    {5.0, 4.2, 0.19566059785723672},
};

// data (e^{-r^2}, 0)
inline constexpr RadialPoint free_wave_data_points[] = {
    {3.0, 0.0, -0.069626183663349724},
    {3.0, 1.7, -0.12223805607627964},
    {5.0, 4.2, -0.049947662729757495},
};

// integral of <s>^{-3/2} over s < b
inline constexpr double ghost_q_cone = 2.622057554292120;  // b = 0
inline constexpr double ghost_q_one = 3.4529537704730517;  // b = 1

/// Couplings with every structural slot exercised: both Q0 terms and an
/// antisymmetric-relevant pattern in the Q_{ab} tensors.
inline CouplingTensors test_couplings() {
  CouplingTensors c;
  c.c1 = 1.0;
  c.c2 = 1.0;
  c.c1ab[0][1] = 1.0;
  c.c1ab[1][2] = 0.5;
  c.c2ab[0][2] = 1.0;
  c.c2ab[1][2] = 0.5;
  return c;
}

/// Three off-center bumps covering both targets and both slots, scaled.
inline InitialDataSpec test_data(double scale) {
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

inline FieldState coupled_state(int n, double box, double scale = 1.0) {
  return build_initial_state(Grid::make(n, box), test_data(scale),
                             test_couplings());
}

}  // namespace wkg::testing
