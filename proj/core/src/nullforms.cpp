#include "wkg/nullforms.hpp"

#include <cmath>

#include "wkg/common.hpp"

namespace wkg {

const Field& Jet::deriv(int alpha) const {
  switch (alpha) {
    case 0: return dt;
    case 1: return d1;
    case 2: return d2;
  }
  fail("jet derivative index must be 0, 1 or 2");
}

Jet first_jet(const FieldState& s, Target which) {
  const Field& u = which == Target::w ? s.w : s.v;
  const Field& ut = which == Target::w ? s.wt : s.vt;
  Jet j;
  j.value = u;
  j.dt = ut;
  j.d1 = spectral_derivative(u, 1);
  j.d2 = spectral_derivative(u, 2);
  return j;
}

namespace {

Field q0_raw(const Jet& m, const Jet& n) {
  Field out(m.value.grid_ptr());
  for (std::size_t k = 0; k < out.size(); ++k)
    out[k] = -m.dt[k] * n.dt[k] + m.d1[k] * n.d1[k] + m.d2[k] * n.d2[k];
  return out;
}

Field qab_raw(int a, int b, const Jet& m, const Jet& n) {
  const Field& ma = m.deriv(a);
  const Field& mb = m.deriv(b);
  const Field& na = n.deriv(a);
  const Field& nb = n.deriv(b);
  Field out(m.value.grid_ptr());
  for (std::size_t k = 0; k < out.size(); ++k)
    out[k] = ma[k] * nb[k] - na[k] * mb[k];
  return out;
}

}  // namespace

Field nonlinearity_bilinear(const Jet& mslot, const Jet& nslot, double c_q0,
                            const double cab[3][3], bool break_null) {
  Field out(mslot.value.grid_ptr());
  if (c_q0 != 0.0) {
    if (break_null) {
      for (std::size_t k = 0; k < out.size(); ++k)
        out[k] = c_q0 * mslot.dt[k] * nslot.dt[k];
    } else {
      out = q0_raw(mslot, nslot);
      out *= c_q0;
    }
  }
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      if (a == b || cab[a][b] == 0.0) continue;
      out.axpy(cab[a][b], qab_raw(a, b, mslot, nslot));
    }
  return out;
}

namespace {

Field nonlinearity_raw(const Jet& jw, const Jet& jv, double c_q0,
                       const double cab[3][3], bool break_null) {
  return nonlinearity_bilinear(jw, jv, c_q0, cab, break_null);
}

}  // namespace

Field q0(const Jet& m, const Jet& n) { return dealias(q0_raw(m, n)); }

Field qab(int a, int b, const Jet& m, const Jet& n) {
  require(a >= 0 && a <= 2 && b >= 0 && b <= 2, "qab indices must be in {0,1,2}");
  return dealias(qab_raw(a, b, m, n));
}

Rhs rhs(const FieldState& s) {
  const Jet jw = first_jet(s, Target::w);
  const Jet jv = first_jet(s, Target::v);
  Rhs r;
  r.fw = dealias(nonlinearity_raw(jw, jv, s.couplings.c1, s.couplings.c1ab,
                                  s.couplings.break_null_structure));
  r.fv = dealias(nonlinearity_raw(jw, jv, s.couplings.c2, s.couplings.c2ab,
                                  s.couplings.break_null_structure));
  return r;
}

namespace {

struct DecompositionWork {
  Decomposition d;
  Field lhs_raw;  // C1 Q0 + C1^{ab} Q_{ab}, no projector
};

DecompositionWork decomposition_work(const FieldState& s) {
  require(!s.couplings.break_null_structure,
          "divergence decomposition requires the intact null structure");
  const GridPtr& gp = s.grid_ptr();
  const double c1 = s.couplings.c1;

  const Jet jw = first_jet(s, Target::w);
  const Jet jv = first_jet(s, Target::v);

  DecompositionWork wk;
  wk.lhs_raw =
      nonlinearity_raw(jw, jv, c1, s.couplings.c1ab, false);

  // Equation of motion eliminates wtt; the projected rhs is what step() uses.
  const Field fw = dealias(wk.lhs_raw);
  Field wtt = laplacian(s.w);
  wtt += fw;
  const Field dt_dw[3] = {wtt, spectral_derivative(s.wt, 1),
                          spectral_derivative(s.wt, 2)};

  // mult1 = c1 v + (c1^2/2) v^2,   dmult1 = its time derivative
  // mult2 =    v + (c1/2)  v^2,    dmult2 = its time derivative
  Field mult1(gp), dmult1(gp), mult2(gp), dmult2(gp);
  for (std::size_t k = 0; k < mult1.size(); ++k) {
    const double v = s.v[k], vt = s.vt[k];
    mult1[k] = c1 * v + 0.5 * c1 * c1 * v * v;
    dmult1[k] = c1 * vt + c1 * c1 * v * vt;
    mult2[k] = v + 0.5 * c1 * v * v;
    dmult2[k] = vt + c1 * v * vt;
  }

  auto hadamard = [&](const Field& a, const Field& b) {
    Field out(gp);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = a[k] * b[k];
    return out;
  };

  for (int a = 0; a < 3; ++a) wk.d.f_lower[a] = hadamard(mult1, jw.deriv(a));

  double A[3][3];
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      A[a][b] = s.couplings.c1ab[b][a] - s.couplings.c1ab[a][b];

  for (int a = 0; a < 3; ++a) {
    wk.d.h_upper[a] = Field(gp);
    for (int b = 0; b < 3; ++b)
      if (A[a][b] != 0.0) wk.d.h_upper[a].axpy(A[a][b], hadamard(mult2, jw.deriv(b)));
  }

  // g = (c1^2/2) v^2 (C1 Q0 + C1^{ab} Q_{ab})
  wk.d.g = Field(gp);
  for (std::size_t k = 0; k < wk.d.g.size(); ++k)
    wk.d.g[k] = 0.5 * c1 * c1 * s.v[k] * s.v[k] * wk.lhs_raw[k];

  // d^a F_a = -d_t F_0 + d_i F_i ; the time part by the product rule.
  Field dtF0 = hadamard(dmult1, jw.dt);
  dtF0 += hadamard(mult1, wtt);
  wk.d.div_f = spectral_derivative(wk.d.f_lower[1], 1);
  wk.d.div_f += spectral_derivative(wk.d.f_lower[2], 2);
  wk.d.div_f -= dtF0;

  // d_a H^a = d_t H^0 + d_i H^i.
  Field dtH0(gp);
  for (int b = 0; b < 3; ++b) {
    if (A[0][b] == 0.0) continue;
    Field term = hadamard(dmult2, jw.deriv(b));
    term += hadamard(mult2, dt_dw[b]);
    dtH0.axpy(A[0][b], term);
  }
  wk.d.div_h = dtH0;
  wk.d.div_h += spectral_derivative(wk.d.h_upper[1], 1);
  wk.d.div_h += spectral_derivative(wk.d.h_upper[2], 2);

  return wk;
}

}  // namespace

Decomposition divergence_decomposition(const FieldState& s) {
  return decomposition_work(s).d;
}

DecompositionResidual decomposition_residual(const FieldState& s) {
  DecompositionWork wk = decomposition_work(s);
  DecompositionResidual r;
  r.scale = sup_norm(wk.lhs_raw);
  Field res = wk.lhs_raw;
  res -= wk.d.div_f;
  res -= wk.d.div_h;
  res -= wk.d.g;
  r.abs_sup = sup_norm(res);
  r.rel_sup = r.scale > 0.0 ? r.abs_sup / r.scale : 0.0;
  return r;
}

}  // namespace wkg
