#pragma once
/// Null forms on first-derivative jets, the coupled right-hand sides, and
/// the divergence decomposition of the wave nonlinearity together with its
/// pointwise residual.
///
/// Index conventions: alpha, beta run over {0, 1, 2} with 0 = time; the
/// metric is diag(-1, 1, 1), so d^0 = -d_0.

#include "wkg/fields.hpp"
#include "wkg/grid.hpp"

namespace wkg {

/// Value and first derivatives of a scalar at a fixed time.
struct Jet {
  Field value, dt, d1, d2;

  const Field& deriv(int alpha) const;  // alpha in {0, 1, 2}
};

/// Jet of an evolved field: dt comes from the stored time-derivative slot,
/// spatial entries are spectral.
Jet first_jet(const FieldState& s, Target which);

/// Q0(m, n) = -dt(m) dt(n) + d1(m) d1(n) + d2(m) d2(n), dealiased.
Field q0(const Jet& m, const Jet& n);

/// Q_{ab}(m, n) = d_a(m) d_b(n) - d_a(n) d_b(m), dealiased.
Field qab(int a, int b, const Jet& m, const Jet& n);

/// Bilinear extension of one equation's nonlinearity: the same coefficient
/// pattern with the two jet slots supplied independently. This is what the
/// product rule produces when the rhs is differentiated in time. No dealias.
Field nonlinearity_bilinear(const Jet& mslot, const Jet& nslot, double c_q0,
                            const double cab[3][3], bool break_null);

/// Dealiased nonlinearities for both equations:
///   -box w     = fw = C1 Q0(w,v) + C1^{ab} Q_{ab}(w,v)
///   -box v + v = fv = C2 Q0(w,v) + C2^{ab} Q_{ab}(w,v)
/// With couplings.break_null_structure, Q0 is replaced by dt(w) dt(v).
struct Rhs {
  Field fw, fv;
};
Rhs rhs(const FieldState& s);

/// Pieces of the identity
///   C1 Q0 + C1^{ab} Q_{ab} = d^a F_a + d_a H^a + G
/// evaluated on the current state, with every time derivative eliminated
/// through the equation of motion (wtt = lap w + fw).
struct Decomposition {
  Field f_lower[3];  // F_alpha  (index down)
  Field h_upper[3];  // H^alpha  (index up)
  Field g;           // quartic remainder
  Field div_f;       // d^a F_a, time part expanded by the product rule
  Field div_h;       // d_a H^a
};
Decomposition divergence_decomposition(const FieldState& s);

/// sup |lhs - (div_f + div_h + g)| and the same relative to sup |lhs|,
/// where lhs is the raw (pre-dealias) wave nonlinearity.
struct DecompositionResidual {
  double abs_sup = 0.0;
  double rel_sup = 0.0;
  double scale = 0.0;
};
DecompositionResidual decomposition_residual(const FieldState& s);

}  // namespace wkg
