#pragma once

#include <array>
#include <functional>
#include <map>
#include <memory>

#include "wkg/fields.hpp"
#include "wkg/grid.hpp"
#include "wkg/nullforms.hpp"

// Time integration. The linear halves of both equations are solved exactly
// in Fourier space, so the only stepping error comes from the Strang split
// around the nonlinear kicks. Auxiliary forced-wave pairs can be co-evolved
// with kicks read off the main trajectory at the same times, which keeps the
// source decomposition and its resummation consistent with the main field to
// roundoff rather than to the splitting order.

namespace wkg {

/// One scalar wave or Klein-Gordon pair (value and velocity slot).
struct WavePair {
  Field u;
  Field ut;

  WavePair() = default;
  WavePair(const GridPtr& g) : u(g), ut(g) {}
};

/// Companion fields for the source decomposition of the wave component:
/// free part, cubic part, one forced pair per decomposition slot, and two
/// carrier pairs holding the contracted divergences directly.
struct AuxiliaryStates {
  WavePair free_part;            // data of w, no source
  WavePair cubic_part;           // source G
  std::array<WavePair, 3> psi;   // sources F_alpha
  std::array<WavePair, 3> phi;   // sources H^alpha
  WavePair div_psi;              // source d^alpha F_alpha, velocity -F_0(0)
  WavePair div_phi;              // source d_alpha H^alpha, velocity +H^0(0)
  double t = 0.0;
};

/// Sets up companion pairs from the state the decomposition starts at.
AuxiliaryStates make_aux(const FieldState& s);

/// free + cubic + div carriers; matches the evolved w to roundoff when the
/// initial Klein-Gordon profile vanishes (so the carrier data is exact).
Field reconstruct_carrier(const AuxiliaryStates& a);

/// free + cubic + d^alpha psi_alpha + d_alpha phi^alpha with the contractions
/// formed from the evolved pairs; accurate to the splitting order only.
Field reconstruct_pairwise(const AuxiliaryStates& a);

class Propagator {
 public:
  explicit Propagator(GridPtr g);

  /// Exact free wave flow by dt (negative dt runs backwards).
  void wave_flow(Field& u, Field& ut, double dt) const;

  /// Exact free Klein-Gordon flow by dt.
  void kg_flow(Field& u, Field& ut, double dt) const;

  /// One Strang step: half kick, exact drift, half kick.
  void step(FieldState& s, double dt) const;

  /// Same main trajectory byte for byte, with companion pairs kicked by the
  /// decomposition sources evaluated on the main states.
  void step_with_aux(FieldState& s, AuxiliaryStates& aux, double dt) const;

  const GridPtr& grid_ptr() const { return grid_; }

 private:
  struct Multipliers {
    std::vector<double> wave_cos, wave_sinc, wave_msin;
    std::vector<double> kg_cos, kg_sinc, kg_msin;
  };
  const Multipliers& multipliers(double dt) const;
  void flow(Field& u, Field& ut, double dt, bool kg) const;
  void step_impl(FieldState& s, AuxiliaryStates* aux, double dt) const;

  GridPtr grid_;
  mutable std::map<double, Multipliers> cache_;
};

/// Largest time with no wrap-around contamination inside |x| <= radius of
/// interest, for data supported in |x| <= data_radius on the [-L, L) torus.
double safe_horizon(double box_half_width, double data_radius);

/// Free wave value at radius r from radial velocity data u1(|x|), by the
/// plane Poisson formula reduced to a two dimensional quadrature.
double free_wave_from_velocity(const std::function<double(double)>& u1,
                               double t, double r, double tol = 1e-10);

/// Free wave value at radius r from radial position data u0 with derivative
/// du0; the time derivative of the spherical mean term is taken analytically.
double free_wave_from_data(const std::function<double(double)>& u0,
                           const std::function<double(double)>& du0, double t,
                           double r, double tol = 1e-10);

}  // namespace wkg
