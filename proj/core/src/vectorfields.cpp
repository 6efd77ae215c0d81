#include "wkg/vectorfields.hpp"

#include <algorithm>
#include <cmath>

#include "wkg/common.hpp"

namespace wkg {

const std::vector<Gen>& commuting_family() {
  static const std::vector<Gen> fam = {Gen::dt,  Gen::d1,     Gen::d2,
                                       Gen::rot, Gen::boost1, Gen::boost2};
  return fam;
}

std::string gen_label(Gen g) {
  switch (g) {
    case Gen::dt: return "dt";
    case Gen::d1: return "d1";
    case Gen::d2: return "d2";
    case Gen::rot: return "Om";
    case Gen::boost1: return "H1";
    case Gen::boost2: return "H2";
    case Gen::scale: return "S";
  }
  fail_internal("bad generator value");
}

std::string word_label(const GammaWord& w) {
  if (w.empty()) return "1";
  std::string s;
  for (std::size_t k = 0; k < w.size(); ++k) {
    if (k) s += '.';
    s += gen_label(w[k]);
  }
  return s;
}

std::vector<GammaWord> canonical_words(int cap) {
  require(cap >= 0 && cap <= 3, "word length cap must be in [0, 3]");
  const auto& fam = commuting_family();
  std::vector<GammaWord> words;
  words.push_back({});
  GammaWord cur;
  auto rec = [&](auto&& self, int remaining, std::size_t start) -> void {
    if (remaining == 0) {
      words.push_back(cur);
      return;
    }
    for (std::size_t k = start; k < fam.size(); ++k) {
      cur.push_back(fam[k]);
      self(self, remaining - 1, k);
      cur.pop_back();
    }
  };
  for (int len = 1; len <= cap; ++len) rec(rec, len, 0);
  return words;
}

// --------------------------------------------------------------------------
// DerivTable

namespace {

std::size_t level_offset(int s) {
  return std::size_t(s) * (s + 1) * (s + 2) / 6;
}

std::size_t entry_index(int a, int b, int c) {
  const int s = a + b + c;
  return level_offset(s) + std::size_t(a) * (2 * s - a + 3) / 2 + b;
}

}  // namespace

DerivTable::DerivTable(GridPtr g, double t, int order)
    : grid_(std::move(g)), t_(t), order_(order), e_(count(order)) {
  require(order >= 0, "table order must be non-negative");
}

std::size_t DerivTable::count(int order) { return level_offset(order + 1); }

Field& DerivTable::at(int a, int b, int c) {
  return const_cast<Field&>(std::as_const(*this).at(a, b, c));
}

const Field& DerivTable::at(int a, int b, int c) const {
  if (a < 0 || b < 0 || c < 0 || a + b + c > order_)
    fail_internal("derivative table entry out of range");
  return e_[entry_index(a, b, c)];
}

Jet to_jet(const DerivTable& u) {
  require(u.order() >= 1, "jet view needs a table of order >= 1");
  Jet j;
  j.value = u.at(0, 0, 0);
  j.dt = u.at(1, 0, 0);
  j.d1 = u.at(0, 1, 0);
  j.d2 = u.at(0, 0, 1);
  return j;
}

StateTables build_tables(const FieldState& s, int order) {
  require(order >= 0 && order <= 5, "table order must be in [0, 5]");
  const GridPtr& gp = s.grid_ptr();
  const auto& cp = s.couplings;
  const bool br = cp.break_null_structure;

  // dt^a slices first; every time derivative comes from the equations.
  std::vector<Field> Tw(order + 1), Tv(order + 1);
  Tw[0] = s.w;
  Tv[0] = s.v;
  if (order >= 1) {
    Tw[1] = s.wt;
    Tv[1] = s.vt;
  }

  // Jets of the dt^a slices, filled as the slices become available. The m-th
  // time derivative of the nonlinearity is the binomial sum of bilinear terms
  // B(dt^j w, dt^{m-j} v), which only needs slices up to m + 1.
  std::vector<Jet> jws, jvs;
  if (order >= 2) {
    jws.push_back(first_jet(s, Target::w));
    jvs.push_back(first_jet(s, Target::v));
  }
  for (int k = 2; k <= order; ++k) {
    const int m = k - 2;
    while (int(jws.size()) <= m) {
      const int a = int(jws.size());
      Jet ja;
      ja.value = Tw[a];
      ja.dt = Tw[a + 1];
      ja.d1 = spectral_derivative(Tw[a], 1);
      ja.d2 = spectral_derivative(Tw[a], 2);
      jws.push_back(std::move(ja));
      Jet jb;
      jb.value = Tv[a];
      jb.dt = Tv[a + 1];
      jb.d1 = spectral_derivative(Tv[a], 1);
      jb.d2 = spectral_derivative(Tv[a], 2);
      jvs.push_back(std::move(jb));
    }
    Field fw(gp), fv(gp);
    double binom = 1.0;
    for (int j = 0; j <= m; ++j) {
      Field bw = nonlinearity_bilinear(jws[j], jvs[m - j], cp.c1, cp.c1ab, br);
      fw.axpy(binom, bw);
      Field bv = nonlinearity_bilinear(jws[j], jvs[m - j], cp.c2, cp.c2ab, br);
      fv.axpy(binom, bv);
      binom = binom * (m - j) / (j + 1);
    }
    Tw[k] = laplacian(Tw[k - 2]);
    Tw[k] += dealias(fw);
    Tv[k] = laplacian(Tv[k - 2]);
    Tv[k] -= Tv[k - 2];
    Tv[k] += dealias(fv);
  }

  StateTables st{DerivTable(gp, s.t, order), DerivTable(gp, s.t, order)};
  for (int which = 0; which < 2; ++which) {
    const std::vector<Field>& T = which == 0 ? Tw : Tv;
    DerivTable& out = which == 0 ? st.w : st.v;
    for (int a = 0; a <= order; ++a) {
      out.at(a, 0, 0) = T[a];
      if (a == order) continue;
      const Spectrum sp = to_spectrum(T[a]);
      for (int b = 0; b <= order - a; ++b)
        for (int c = 0; c <= order - a - b; ++c) {
          if (b == 0 && c == 0) continue;
          out.at(a, b, c) = spectral_mixed_derivative(sp, b, c);
        }
    }
  }
  return st;
}

DerivTable apply_generator(const DerivTable& u, Gen g) {
  require(u.order() >= 1, "apply_generator needs a table of order >= 1");
  const GridPtr& gp = u.grid_ptr();
  const double t = u.t();
  const int K = u.order() - 1;
  DerivTable out(gp, t, K);

  const bool needs_x = g == Gen::rot || g == Gen::boost1 || g == Gen::boost2 ||
                       g == Gen::scale;
  Field x1, x2;
  if (needs_x) {
    x1 = coordinate_field(gp, 1);
    x2 = coordinate_field(gp, 2);
  }

  for (int sum = 0; sum <= K; ++sum)
    for (int a = 0; a <= sum; ++a)
      for (int b = 0; a + b <= sum; ++b) {
        const int c = sum - a - b;
        Field& dst = out.at(a, b, c);
        switch (g) {
          case Gen::dt:
            dst = u.at(a + 1, b, c);
            break;
          case Gen::d1:
            dst = u.at(a, b + 1, c);
            break;
          case Gen::d2:
            dst = u.at(a, b, c + 1);
            break;
          case Gen::rot: {
            // d^m (x1 d2 u - x2 d1 u), product rule on the coordinates
            const Field& u2 = u.at(a, b, c + 1);
            const Field& u1 = u.at(a, b + 1, c);
            dst = Field(gp);
            for (std::size_t k = 0; k < dst.size(); ++k)
              dst[k] = x1[k] * u2[k] - x2[k] * u1[k];
            if (b > 0) dst.axpy(double(b), u.at(a, b - 1, c + 1));
            if (c > 0) dst.axpy(-double(c), u.at(a, b + 1, c - 1));
            break;
          }
          case Gen::boost1: {
            const Field& udt = u.at(a + 1, b, c);
            dst = u.at(a, b + 1, c);
            dst *= t;
            for (std::size_t k = 0; k < dst.size(); ++k)
              dst[k] += x1[k] * udt[k];
            if (a > 0) dst.axpy(double(a), u.at(a - 1, b + 1, c));
            if (b > 0) dst.axpy(double(b), u.at(a + 1, b - 1, c));
            break;
          }
          case Gen::boost2: {
            const Field& udt = u.at(a + 1, b, c);
            dst = u.at(a, b, c + 1);
            dst *= t;
            for (std::size_t k = 0; k < dst.size(); ++k)
              dst[k] += x2[k] * udt[k];
            if (a > 0) dst.axpy(double(a), u.at(a - 1, b, c + 1));
            if (c > 0) dst.axpy(double(c), u.at(a + 1, b, c - 1));
            break;
          }
          case Gen::scale: {
            const Field& u1 = u.at(a, b + 1, c);
            const Field& u2 = u.at(a, b, c + 1);
            dst = u.at(a + 1, b, c);
            dst *= t;
            for (std::size_t k = 0; k < dst.size(); ++k)
              dst[k] += x1[k] * u1[k] + x2[k] * u2[k];
            if (sum > 0) dst.axpy(double(sum), u.at(a, b, c));
            break;
          }
        }
      }
  return out;
}

DerivTable word_table(const GammaWord& w, const DerivTable& base) {
  require(base.order() >= int(w.size()),
          "base table order too low for this word");
  DerivTable cur = base;
  for (Gen g : w) cur = apply_generator(cur, g);
  return cur;
}

Field apply_word(const GammaWord& w, const FieldState& s, Target which) {
  require(w.size() <= 3, "words longer than 3 are not supported");
  StateTables st = build_tables(s, int(w.size()));
  const DerivTable& base = which == Target::w ? st.w : st.v;
  return word_table(w, base).at(0, 0, 0);
}

GoodDerivative good_derivative(const Jet& j, int i) {
  require(i == 1 || i == 2, "good derivative index must be 1 or 2");
  const GridPtr& gp = j.value.grid_ptr();
  const Field r = radius_field(gp);
  const Field xi = coordinate_field(gp, i);
  const Field& di = i == 1 ? j.d1 : j.d2;

  GoodDerivative out;
  out.field = Field(gp);
  out.excluded_node = gp->origin_node();
  const double rmin = 0.5 * gp->h();
  for (std::size_t k = 0; k < r.size(); ++k) {
    const double weight = r[k] < rmin ? 0.0 : xi[k] / r[k];
    out.field[k] = weight * j.dt[k] + di[k];
  }
  return out;
}

double commutator_residual(Gen g, const DerivTable& u) {
  require(u.order() >= 3, "commutator check needs a table of order >= 3");
  const GridPtr& gp = u.grid_ptr();

  // box u as a table of order u.order() - 2
  DerivTable boxu(gp, u.t(), u.order() - 2);
  for (int sum = 0; sum <= u.order() - 2; ++sum)
    for (int a = 0; a <= sum; ++a)
      for (int b = 0; a + b <= sum; ++b) {
        const int c = sum - a - b;
        Field f = u.at(a, b + 2, c);
        f += u.at(a, b, c + 2);
        f -= u.at(a + 2, b, c);
        boxu.at(a, b, c) = std::move(f);
      }

  const DerivTable gu = apply_generator(u, g);
  Field box_gu = gu.at(0, 2, 0);
  box_gu += gu.at(0, 0, 2);
  box_gu -= gu.at(2, 0, 0);

  Field g_boxu = apply_generator(boxu, g).at(0, 0, 0);

  Field res = box_gu;
  res -= g_boxu;
  if (g == Gen::scale) res.axpy(-2.0, boxu.at(0, 0, 0));
  return sup_norm(res);
}

RepresentationCheck representation_check(const DerivTable& u) {
  require(u.order() >= 1, "representation check needs a table of order >= 1");
  const double t = u.t();
  require(t > 0.0, "representation check needs t > 0");
  const GridPtr& gp = u.grid_ptr();
  const Grid& g = *gp;

  const Field& ut = u.at(1, 0, 0);
  const Field& u1 = u.at(0, 1, 0);
  const Field& u2 = u.at(0, 0, 1);
  const Field x1 = coordinate_field(gp, 1);
  const Field x2 = coordinate_field(gp, 2);
  const Field r = radius_field(gp);

  const double scale_t = std::max(sup_norm(ut), 1e-300);
  const double scale_1 = std::max(sup_norm(u1), 1e-300);
  const double scale_2 = std::max(sup_norm(u2), 1e-300);
  double scale_g = 1e-300;

  const double cone_margin = 0.1 * sqr(jbracket(t)) * g.h();
  const double rmin = 0.5 * g.h();

  RepresentationCheck rep;

  // first pass for the good-derivative scale
  std::vector<double> gd1(r.size()), gd2(r.size());
  for (std::size_t k = 0; k < r.size(); ++k) {
    if (r[k] < rmin) continue;
    gd1[k] = (x1[k] / r[k]) * ut[k] + u1[k];
    gd2[k] = (x2[k] / r[k]) * ut[k] + u2[k];
    scale_g = std::max({scale_g, std::abs(gd1[k]), std::abs(gd2[k])});
  }

  for (std::size_t k = 0; k < r.size(); ++k) {
    const double D = t * t - r[k] * r[k];
    const double S = t * ut[k] + x1[k] * u1[k] + x2[k] * u2[k];
    const double H1 = t * u1[k] + x1[k] * ut[k];
    const double H2 = t * u2[k] + x2[k] * ut[k];
    const double Om = x1[k] * u2[k] - x2[k] * u1[k];

    if (std::abs(D) > cone_margin) {
      const double rec_t = (t * S - x1[k] * H1 - x2[k] * H2) / D;
      const double rec_1 = (t * H1 - x1[k] * S + x2[k] * Om) / D;
      const double rec_2 = (t * H2 - x2[k] * S - x1[k] * Om) / D;
      rep.max_rel_dt = std::max(rep.max_rel_dt, std::abs(rec_t - ut[k]) / scale_t);
      rep.max_rel_d1 = std::max(rep.max_rel_d1, std::abs(rec_1 - u1[k]) / scale_1);
      rep.max_rel_d2 = std::max(rep.max_rel_d2, std::abs(rec_2 - u2[k]) / scale_2);
      ++rep.checked;
    } else {
      ++rep.excluded;
    }

    if (r[k] >= rmin) {
      const double q = r[k] - t;
      const double f1r = (H1 + q * u1[k]) / r[k];
      const double f2r = (H2 + q * u2[k]) / r[k];
      const double f1t = (H1 - (x1[k] / r[k]) * q * ut[k]) / t;
      const double f2t = (H2 - (x2[k] / r[k]) * q * ut[k]) / t;
      const double d1 = std::max(std::abs(f1r - gd1[k]), std::abs(f1t - gd1[k]));
      const double d2 = std::max(std::abs(f2r - gd2[k]), std::abs(f2t - gd2[k]));
      rep.max_rel_good = std::max(rep.max_rel_good, std::max(d1, d2) / scale_g);
    }
  }
  return rep;
}

HessianCheck hessian_decay_check(const FieldState& s) {
  require(s.t >= 1.0, "hessian check needs t >= 1");
  const GridPtr& gp = s.grid_ptr();
  const double t = s.t;

  const StateTables st = build_tables(s, 2);
  const DerivTable& W = st.w;
  const Field fw = rhs(s).fw;

  const DerivTable V1 = apply_generator(W, Gen::boost1);
  const DerivTable V2 = apply_generator(W, Gen::boost2);

  const Field x1 = coordinate_field(gp, 1);
  const Field x2 = coordinate_field(gp, 2);
  const Field r = radius_field(gp);

  HessianCheck out;
  out.fw_sup = sup_norm(fw);

  double abs_res = 0.0;
  {
    const Field& wtt = W.at(2, 0, 0);
    const Field& wt = W.at(1, 0, 0);
    const Field& w1 = W.at(0, 1, 0);
    const Field& w2 = W.at(0, 0, 1);
    const Field& dtH1 = V1.at(1, 0, 0);
    const Field& dtH2 = V2.at(1, 0, 0);
    const Field& d1H1 = V1.at(0, 1, 0);
    const Field& d2H2 = V2.at(0, 0, 1);
    for (std::size_t k = 0; k < r.size(); ++k) {
      const double lhs = ((t - r[k]) * (t + r[k]) / (t * t)) * wtt[k] +
                         (x1[k] * dtH1[k] + x2[k] * dtH2[k]) / (t * t) -
                         (d1H1[k] + d2H2[k]) / t + 2.0 * wt[k] / t -
                         (x1[k] * w1[k] + x2[k] * w2[k]) / (t * t);
      abs_res = std::max(abs_res, std::abs(lhs - fw[k]));
    }
  }
  out.identity_rel = abs_res / std::max(out.fw_sup, 1e-300);

  // <t-r> |ddw| against first derivatives of all length <= 1 words plus t|fw|
  std::vector<Field> denom_parts;
  auto euclid = [&](const DerivTable& tab) {
    Field e(gp);
    const Field& a = tab.at(1, 0, 0);
    const Field& b = tab.at(0, 1, 0);
    const Field& c = tab.at(0, 0, 1);
    for (std::size_t k = 0; k < e.size(); ++k)
      e[k] = std::sqrt(sqr(a[k]) + sqr(b[k]) + sqr(c[k]));
    return e;
  };
  Field denom = euclid(W);
  for (Gen g : {Gen::dt, Gen::d1, Gen::d2, Gen::rot, Gen::boost1, Gen::boost2,
                Gen::scale})
    denom += euclid(apply_generator(W, g));
  for (std::size_t k = 0; k < denom.size(); ++k)
    denom[k] += t * std::abs(fw[k]);

  double denom_max = sup_norm(denom);
  const double denom_floor = 1e-12 * std::max(denom_max, 1e-300);
  for (std::size_t k = 0; k < r.size(); ++k) {
    if (r[k] > 2.0 * t || denom[k] < denom_floor) continue;
    const double dd =
        std::max({std::abs(W.at(2, 0, 0)[k]), std::abs(W.at(1, 1, 0)[k]),
                  std::abs(W.at(1, 0, 1)[k]), std::abs(W.at(0, 2, 0)[k]),
                  std::abs(W.at(0, 1, 1)[k]), std::abs(W.at(0, 0, 2)[k])});
    const double ratio = jbracket(t - r[k]) * dd / denom[k];
    out.ratio_max = std::max(out.ratio_max, ratio);
  }
  return out;
}

}  // namespace wkg
