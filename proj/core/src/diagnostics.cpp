#include "wkg/diagnostics.hpp"

#include <algorithm>
#include <boost/math/special_functions/beta.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <unordered_map>
#include <utility>

#include "wkg/common.hpp"

namespace wkg {

double energy_wave(const Jet& u) {
  const Field& a = u.dt;
  const Field& b = u.d1;
  const Field& c = u.d2;
  double sum = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k)
    sum += sqr(a[k]) + sqr(b[k]) + sqr(c[k]);
  return sum * sqr(a.grid().h());
}

double energy_kg(const Jet& u) {
  double sum = 0.0;
  for (std::size_t k = 0; k < u.value.size(); ++k) sum += sqr(u.value[k]);
  return energy_wave(u) + sum * sqr(u.value.grid().h());
}

double conformal_energy(const DerivTable& u) {
  require(u.order() >= 1, "conformal energy needs a table of order >= 1");
  const GridPtr& gp = u.grid_ptr();
  const double t = u.t();
  const Field& val = u.at(0, 0, 0);
  const Field& ut = u.at(1, 0, 0);
  const Field& u1 = u.at(0, 1, 0);
  const Field& u2 = u.at(0, 0, 1);
  const Field x1 = coordinate_field(gp, 1);
  const Field x2 = coordinate_field(gp, 2);

  double sum = 0.0;
  for (std::size_t k = 0; k < val.size(); ++k) {
    const double su = t * ut[k] + x1[k] * u1[k] + x2[k] * u2[k];
    const double om = x1[k] * u2[k] - x2[k] * u1[k];
    const double h1 = t * u1[k] + x1[k] * ut[k];
    const double h2 = t * u2[k] + x2[k] * ut[k];
    sum += sqr(su + val[k]) + sqr(om) + sqr(h1) + sqr(h2);
  }
  return sum * sqr(gp->h());
}

double weighted_sup_gradient(const Jet& u, double t) {
  const Field r = radius_field(u.value.grid_ptr());
  const double tfac = std::sqrt(jbracket(t));
  double sup = 0.0;
  for (std::size_t k = 0; k < r.size(); ++k) {
    const double g =
        std::sqrt(sqr(u.dt[k]) + sqr(u.d1[k]) + sqr(u.d2[k]));
    sup = std::max(sup, tfac * std::pow(jbracket(t - r[k]), 0.75) * g);
  }
  return sup;
}

double weighted_sup_value(const Field& u, double t) {
  const Field r = radius_field(u.grid_ptr());
  double sup = 0.0;
  for (std::size_t k = 0; k < r.size(); ++k)
    sup = std::max(sup, jbracket(t + r[k]) * std::abs(u[k]));
  return sup;
}

NullRatio nullform_pointwise_ratio(const FieldState& s) {
  const Jet jw = first_jet(s, Target::w);
  const Jet jv = first_jet(s, Target::v);

  const double zero_cab[3][3] = {};
  const Field q0 = nonlinearity_bilinear(jw, jv, 1.0, zero_cab, false);
  Field qab[3];
  {
    const int pairs[3][2] = {{0, 1}, {0, 2}, {1, 2}};
    for (int p = 0; p < 3; ++p) {
      double cab[3][3] = {};
      cab[pairs[p][0]][pairs[p][1]] = 1.0;
      qab[p] = nonlinearity_bilinear(jw, jv, 0.0, cab, false);
    }
  }

  const Field g1w = good_derivative(jw, 1).field;
  const Field g2w = good_derivative(jw, 2).field;
  const Field g1v = good_derivative(jv, 1).field;
  const Field g2v = good_derivative(jv, 2).field;
  const std::ptrdiff_t origin = s.grid().origin_node();

  std::vector<double> denom(q0.size());
  double denom_max = 0.0;
  for (std::size_t k = 0; k < q0.size(); ++k) {
    const double dw = std::sqrt(sqr(jw.dt[k]) + sqr(jw.d1[k]) + sqr(jw.d2[k]));
    const double dv = std::sqrt(sqr(jv.dt[k]) + sqr(jv.d1[k]) + sqr(jv.d2[k]));
    const double gw = std::sqrt(sqr(g1w[k]) + sqr(g2w[k]));
    const double gv = std::sqrt(sqr(g1v[k]) + sqr(g2v[k]));
    denom[k] = gw * dv + dw * gv;
    denom_max = std::max(denom_max, denom[k]);
  }

  NullRatio out;
  const double floor = 1e-8 * denom_max;
  for (std::size_t k = 0; k < q0.size(); ++k) {
    if (std::ptrdiff_t(k) == origin || denom[k] <= floor) {
      ++out.skipped;
      continue;
    }
    const double num = std::max({std::abs(q0[k]), std::abs(qab[0][k]),
                                 std::abs(qab[1][k]), std::abs(qab[2][k])});
    out.ratio = std::max(out.ratio, num / denom[k]);
  }
  return out;
}

double ghost_q(double t, double r) {
  // x = 1/(1 + s^2) turns the tail integral into an incomplete beta:
  //   int_{-inf}^{b <= 0} <s>^{-3/2} ds = B(1/(1+b^2); 1/4, 1/2) / 2
  const double b = r - t;
  const auto lower_tail = [](double s) {
    return 0.5 * boost::math::beta(0.25, 0.5, 1.0 / (1.0 + s * s));
  };
  if (b <= 0.0) return lower_tail(b);
  return boost::math::beta(0.25, 0.5) - lower_tail(-b);
}

double sobolev_ratio(const DerivTable& u) {
  require(u.order() >= 2, "the pointwise-decay ratio needs order >= 2");
  const GridPtr& gp = u.grid_ptr();
  const double t = u.t();

  const Field r = radius_field(gp);
  const Field& val = u.at(0, 0, 0);
  double num = 0.0;
  for (std::size_t k = 0; k < val.size(); ++k)
    num = std::max(num, std::sqrt(jbracket(t + r[k]) * jbracket(t - r[k])) *
                            std::abs(val[k]));

  std::vector<Gen> gens = commuting_family();
  gens.push_back(Gen::scale);
  double denom = 0.0;
  const auto visit = [&](auto&& self, const DerivTable& tab, std::size_t start,
                         int depth) -> void {
    denom += l2_norm(tab.at(0, 0, 0));
    if (depth == 2) return;
    for (std::size_t gi = start; gi < gens.size(); ++gi)
      self(self, apply_generator(tab, gens[gi]), gi, depth + 1);
  };
  visit(visit, u, 0, 0);

  if (denom < 1e-300) return 0.0;
  return num / denom;
}

DecayFit fit_decay(const std::vector<double>& t, const std::vector<double>& v,
                   double t_min) {
  require(t.size() == v.size(), "decay fit needs matching series lengths");
  DecayFit fit;
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (t[k] < t_min || t[k] <= 0.0 || v[k] <= 0.0) continue;
    const double x = std::log(t[k]);
    const double y = std::log(v[k]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++fit.samples;
  }
  if (fit.samples < 2) return fit;
  const double n = fit.samples;
  const double var = sxx - sx * sx / n;
  if (var <= 0.0) return fit;
  fit.slope = (sxy - sx * sy / n) / var;
  fit.intercept = (sy - fit.slope * sx) / n;
  return fit;
}

// --------------------------------------------------------------------------
// DiagnosticsSuite

DiagnosticsSuite::DiagnosticsSuite(const DiagnosticsConfig& cfg) : cfg_(cfg) {
  require(cfg.word_cap >= 0 && cfg.word_cap <= 3, "word cap must be in [0, 3]");
  require(cfg.delta > 0.0 && cfg.delta0 > 0.0, "exponents must be positive");
  words_ = canonical_words(cfg.word_cap);

  columns_ = {"t",     "beyond_horizon",  "excluded_nodes", "sup_w",
              "sup_v", "sup_dw_weighted", "nullform_ratio"};
  if (cfg.track_sobolev) {
    columns_.push_back("sobolev_w");
    columns_.push_back("sobolev_v");
  }
  if (cfg.track_decomposition) {
    columns_.push_back("decomp_abs");
    columns_.push_back("decomp_rel");
  }
  if (cfg.track_reconstruction) {
    columns_.push_back("recon_carrier_rel");
    columns_.push_back("recon_pairwise_rel");
  }
  if (cfg.track_words) {
    for (const GammaWord& w : words_) {
      const std::string l = word_label(w);
      columns_.push_back("Ew[" + l + "]");
      columns_.push_back("ESw[" + l + "]");
      columns_.push_back("Gw[" + l + "]");
      columns_.push_back("E1v[" + l + "]");
      columns_.push_back("supv[" + l + "]");
      columns_.push_back("ghost[" + l + ".1]");
      columns_.push_back("ghost[" + l + ".2]");
    }
    ghost_accum_.assign(words_.size() * 2, 0.0);
    prev_integrand_.assign(words_.size() * 2, 0.0);
  }
}

std::size_t DiagnosticsSuite::column(const std::string& name) const {
  const auto it = std::find(columns_.begin(), columns_.end(), name);
  require(it != columns_.end(), "no diagnostics column named " + name);
  return std::size_t(it - columns_.begin());
}

const std::vector<double>& DiagnosticsSuite::record(const FieldState& s,
                                                    const AuxiliaryStates* aux,
                                                    double horizon) {
  const double t = s.t;
  if (have_prev_)
    require(t > prev_t_, "records must be taken at increasing times");

  std::vector<double> row(columns_.size(), 0.0);
  std::size_t col = 0;
  row[col++] = t;
  row[col++] = t > horizon * (1.0 + 1e-12) ? 1.0 : 0.0;

  const Jet jw = first_jet(s, Target::w);
  const Jet jv = first_jet(s, Target::v);
  const NullRatio nr = nullform_pointwise_ratio(s);
  row[col++] = double(nr.skipped);
  row[col++] = sup_norm(s.w);
  row[col++] = sup_norm(s.v);
  row[col++] = weighted_sup_gradient(jw, t);
  row[col++] = nr.ratio;

  StateTables tables;
  const bool need_tables = cfg_.track_words || cfg_.track_sobolev;
  if (need_tables)
    tables = build_tables(s, cfg_.track_words ? cfg_.word_cap + 2 : 2);

  if (cfg_.track_sobolev) {
    row[col++] = sobolev_ratio(tables.w);
    row[col++] = sobolev_ratio(tables.v);
  }
  if (cfg_.track_decomposition) {
    const DecompositionResidual res = decomposition_residual(s);
    row[col++] = res.abs_sup;
    row[col++] = res.rel_sup;
  }
  if (cfg_.track_reconstruction) {
    require(aux != nullptr, "reconstruction tracking needs companion pairs");
    require(aux->t == t, "companion pairs are not at the state time");
    const double scale = std::max(sup_norm(s.w), 1e-300);
    Field carrier = reconstruct_carrier(*aux);
    carrier -= s.w;
    row[col++] = sup_norm(carrier) / scale;
    Field pairwise = reconstruct_pairwise(*aux);
    pairwise -= s.w;
    row[col++] = sup_norm(pairwise) / scale;
  }

  if (cfg_.track_words) {
    const Field r = radius_field(s.grid_ptr());
    const double h2 = sqr(s.grid().h());
    const double tweight = std::pow(jbracket(t), -cfg_.delta0);
    std::vector<double> integrand(words_.size() * 2, 0.0);

    std::unordered_map<std::string, std::size_t> windex;
    for (std::size_t wi = 0; wi < words_.size(); ++wi)
      windex[word_label(words_[wi])] = wi;
    const std::size_t word_col0 = col;

    const auto emit = [&](const GammaWord& word, const DerivTable& tw,
                          const DerivTable& tv) {
      const std::size_t wi = windex.at(word_label(word));
      std::size_t c = word_col0 + 7 * wi;
      const Jet jwI = to_jet(tw);
      const Jet jvI = to_jet(tv);
      row[c++] = energy_wave(jwI);
      row[c++] = energy_wave(to_jet(apply_generator(tw, Gen::scale)));
      row[c++] = conformal_energy(tw);
      row[c++] = energy_kg(jvI);
      row[c++] = weighted_sup_value(tv.at(0, 0, 0), t);
      for (int i = 1; i <= 2; ++i) {
        const Field gd = good_derivative(jvI, i).field;
        const Field& val = jvI.value;
        double sum = 0.0;
        for (std::size_t k = 0; k < val.size(); ++k)
          sum += (sqr(val[k]) + sqr(gd[k])) *
                 std::pow(jbracket(r[k] - t), -1.5);
        integrand[2 * wi + (i - 1)] = tweight * h2 * sum;
      }
    };

    const auto& fam = commuting_family();
    const auto visit = [&](auto&& self, const DerivTable& tw,
                           const DerivTable& tv, GammaWord& word,
                           std::size_t start) -> void {
      emit(word, tw, tv);
      if (int(word.size()) == cfg_.word_cap) return;
      for (std::size_t gi = start; gi < fam.size(); ++gi) {
        word.push_back(fam[gi]);
        self(self, apply_generator(tw, fam[gi]), apply_generator(tv, fam[gi]),
             word, gi);
        word.pop_back();
      }
    };
    GammaWord word;
    visit(visit, tables.w, tables.v, word, 0);

    if (have_prev_) {
      const double dt = t - prev_t_;
      for (std::size_t k = 0; k < ghost_accum_.size(); ++k)
        ghost_accum_[k] += 0.5 * (prev_integrand_[k] + integrand[k]) * dt;
    }
    prev_integrand_ = integrand;
    for (std::size_t wi = 0; wi < words_.size(); ++wi) {
      row[word_col0 + 7 * wi + 5] = ghost_accum_[2 * wi];
      row[word_col0 + 7 * wi + 6] = ghost_accum_[2 * wi + 1];
    }
  }

  have_prev_ = true;
  prev_t_ = t;
  rows_.push_back(std::move(row));
  return rows_.back();
}

std::vector<double> DiagnosticsSuite::serialize() const {
  std::vector<double> blob;
  blob.push_back(double(columns_.size()));
  blob.push_back(double(rows_.size()));
  blob.push_back(have_prev_ ? 1.0 : 0.0);
  blob.push_back(prev_t_);
  blob.push_back(double(ghost_accum_.size()));
  blob.insert(blob.end(), ghost_accum_.begin(), ghost_accum_.end());
  blob.insert(blob.end(), prev_integrand_.begin(), prev_integrand_.end());
  for (const auto& row : rows_) blob.insert(blob.end(), row.begin(), row.end());
  return blob;
}

void DiagnosticsSuite::restore(const std::vector<double>& blob) {
  require(blob.size() >= 5, "diagnostics blob too short");
  std::size_t p = 0;
  const std::size_t ncols = std::size_t(blob[p++]);
  const std::size_t nrows = std::size_t(blob[p++]);
  require(ncols == columns_.size(),
          "diagnostics blob does not match the configured columns");
  have_prev_ = blob[p++] != 0.0;
  prev_t_ = blob[p++];
  const std::size_t ng = std::size_t(blob[p++]);
  require(ng == ghost_accum_.size(), "ghost accumulator size mismatch");
  require(blob.size() == 5 + 2 * ng + nrows * ncols,
          "diagnostics blob has the wrong length");
  for (std::size_t k = 0; k < ng; ++k) ghost_accum_[k] = blob[p++];
  for (std::size_t k = 0; k < ng; ++k) prev_integrand_[k] = blob[p++];
  rows_.assign(nrows, std::vector<double>(ncols));
  for (auto& row : rows_)
    for (double& x : row) x = blob[p++];
}

std::vector<DiagnosticsSuite::BootstrapLine> DiagnosticsSuite::bootstrap_report(
    double t_baseline) const {
  std::vector<BootstrapLine> lines;
  std::size_t first = rows_.size();
  for (std::size_t k = 0; k < rows_.size(); ++k)
    if (rows_[k][0] >= t_baseline) {
      first = k;
      break;
    }
  if (first == rows_.size()) return lines;

  const double d = cfg_.delta;
  std::vector<std::pair<std::string, std::function<double(const std::vector<double>&)>>>
      series;
  const std::size_t c_supw = column("sup_w");
  const std::size_t c_supdw = column("sup_dw_weighted");
  series.emplace_back("supw_scaled", [=](const std::vector<double>& r) {
    return std::sqrt(jbracket(r[0])) * r[c_supw];
  });
  series.emplace_back("supdw_weighted", [=](const std::vector<double>& r) {
    return r[c_supdw];
  });
  if (cfg_.track_words) {
    std::vector<std::size_t> ew, esw, gw, e1v, supv, ghost;
    for (const GammaWord& w : words_) {
      const std::string l = word_label(w);
      ew.push_back(column("Ew[" + l + "]"));
      esw.push_back(column("ESw[" + l + "]"));
      gw.push_back(column("Gw[" + l + "]"));
      e1v.push_back(column("E1v[" + l + "]"));
      supv.push_back(column("supv[" + l + "]"));
      ghost.push_back(column("ghost[" + l + ".1]"));
      ghost.push_back(column("ghost[" + l + ".2]"));
    }
    const auto sum_sqrt = [](const std::vector<double>& r,
                             const std::vector<std::size_t>& cols) {
      double s = 0.0;
      for (std::size_t c : cols) s += std::sqrt(std::max(0.0, r[c]));
      return s;
    };
    const auto sum_plain = [](const std::vector<double>& r,
                              const std::vector<std::size_t>& cols) {
      double s = 0.0;
      for (std::size_t c : cols) s += r[c];
      return s;
    };
    series.emplace_back("Ew_scaled", [=](const std::vector<double>& r) {
      return std::pow(jbracket(r[0]), -d) * sum_sqrt(r, ew);
    });
    series.emplace_back("ESw_scaled", [=](const std::vector<double>& r) {
      return std::pow(jbracket(r[0]), -0.5 - 2.0 * d) * sum_sqrt(r, esw);
    });
    series.emplace_back("Gw_scaled", [=](const std::vector<double>& r) {
      return std::pow(jbracket(r[0]), -0.5 - 2.0 * d) * sum_sqrt(r, gw);
    });
    series.emplace_back("E1v_scaled", [=](const std::vector<double>& r) {
      return std::pow(jbracket(r[0]), -d) * sum_sqrt(r, e1v);
    });
    series.emplace_back("supv_sum", [=](const std::vector<double>& r) {
      return sum_plain(r, supv);
    });
    series.emplace_back("ghost_total", [=](const std::vector<double>& r) {
      return sum_plain(r, ghost);
    });
  }

  for (const auto& [name, eval] : series) {
    BootstrapLine line;
    line.name = name;
    line.baseline = eval(rows_[first]);
    line.peak = line.baseline;
    for (std::size_t k = first; k < rows_.size(); ++k)
      line.peak = std::max(line.peak, eval(rows_[k]));
    line.ratio = line.baseline > 0.0
                     ? line.peak / line.baseline
                     : (line.peak > 0.0
                            ? std::numeric_limits<double>::infinity()
                            : 1.0);
    lines.push_back(std::move(line));
  }
  return lines;
}

// --------------------------------------------------------------------------
// Output

namespace {

std::string num17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string num2(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  return buf;
}

}  // namespace

void write_csv(const std::string& path, const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows) {
  std::ofstream out(path, std::ios::binary);
  require(out.good(), "cannot open " + path + " for writing");
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (c) out << ',';
    out << columns[c];
  }
  out << '\n';
  for (const auto& row : rows) {
    require(row.size() == columns.size(), "row width does not match header");
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out << ',';
      out << num17(row[c]);
    }
    out << '\n';
  }
  require(out.good(), "write to " + path + " failed");
}

void write_loglog_svg(const std::string& path, const std::string& title,
                      const std::vector<PlotSeries>& series) {
  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                  "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
  const double W = 760, H = 480;
  const double ml = 70, mr = 170, mt = 42, mb = 52;

  double lx0 = 1e300, lx1 = -1e300, ly0 = 1e300, ly1 = -1e300;
  for (const auto& s : series)
    for (std::size_t k = 0; k < s.x.size() && k < s.y.size(); ++k) {
      if (!(s.x[k] > 0.0) || !(s.y[k] > 0.0)) continue;
      if (!std::isfinite(s.x[k]) || !std::isfinite(s.y[k])) continue;
      lx0 = std::min(lx0, std::log10(s.x[k]));
      lx1 = std::max(lx1, std::log10(s.x[k]));
      ly0 = std::min(ly0, std::log10(s.y[k]));
      ly1 = std::max(ly1, std::log10(s.y[k]));
    }
  if (lx0 > lx1) {
    lx0 = 0.0;
    lx1 = 1.0;
  }
  if (ly0 > ly1) {
    ly0 = 0.0;
    ly1 = 1.0;
  }
  if (lx1 - lx0 < 1e-9) lx1 = lx0 + 1.0;
  if (ly1 - ly0 < 1e-9) ly1 = ly0 + 1.0;
  const double padx = 0.04 * (lx1 - lx0), pady = 0.06 * (ly1 - ly0);
  lx0 -= padx;
  lx1 += padx;
  ly0 -= pady;
  ly1 += pady;

  const auto px = [&](double lx) {
    return ml + (lx - lx0) / (lx1 - lx0) * (W - ml - mr);
  };
  const auto py = [&](double ly) {
    return H - mb - (ly - ly0) / (ly1 - ly0) * (H - mt - mb);
  };

  std::ofstream out(path, std::ios::binary);
  require(out.good(), "cannot open " + path + " for writing");
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W
      << "\" height=\"" << H << "\" viewBox=\"0 0 " << W << " " << H
      << "\">\n";
  out << "<rect width=\"" << W << "\" height=\"" << H
      << "\" fill=\"white\"/>\n";
  out << "<text x=\"" << (ml + (W - ml - mr) / 2) << "\" y=\"24\" "
      << "text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">"
      << title << "</text>\n";

  // decade grid
  for (int e = int(std::ceil(lx0)); e <= int(std::floor(lx1)); ++e) {
    const double x = px(e);
    out << "<line x1=\"" << num2(x) << "\" y1=\"" << num2(py(ly0))
        << "\" x2=\"" << num2(x) << "\" y2=\"" << num2(py(ly1))
        << "\" stroke=\"#dddddd\"/>\n";
    out << "<text x=\"" << num2(x) << "\" y=\"" << num2(H - mb + 18)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"11\">1e"
        << e << "</text>\n";
  }
  for (int e = int(std::ceil(ly0)); e <= int(std::floor(ly1)); ++e) {
    const double y = py(e);
    out << "<line x1=\"" << num2(px(lx0)) << "\" y1=\"" << num2(y)
        << "\" x2=\"" << num2(px(lx1)) << "\" y2=\"" << num2(y)
        << "\" stroke=\"#dddddd\"/>\n";
    out << "<text x=\"" << num2(ml - 6) << "\" y=\"" << num2(y + 4)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
           "font-size=\"11\">1e"
        << e << "</text>\n";
  }
  out << "<rect x=\"" << num2(px(lx0)) << "\" y=\"" << num2(py(ly1))
      << "\" width=\"" << num2(px(lx1) - px(lx0)) << "\" height=\""
      << num2(py(ly0) - py(ly1))
      << "\" fill=\"none\" stroke=\"black\"/>\n";

  for (std::size_t si = 0; si < series.size(); ++si) {
    const auto& s = series[si];
    const char* color = palette[si % (sizeof palette / sizeof *palette)];
    std::string pts;
    for (std::size_t k = 0; k < s.x.size() && k < s.y.size(); ++k) {
      if (!(s.x[k] > 0.0) || !(s.y[k] > 0.0)) continue;
      if (!std::isfinite(s.x[k]) || !std::isfinite(s.y[k])) continue;
      pts += num2(px(std::log10(s.x[k])));
      pts += ',';
      pts += num2(py(std::log10(s.y[k])));
      pts += ' ';
    }
    if (!pts.empty())
      out << "<polyline fill=\"none\" stroke=\"" << color
          << "\" stroke-width=\"1.5\" points=\"" << pts << "\"/>\n";
    const double ly = mt + 16.0 * double(si);
    out << "<line x1=\"" << num2(W - mr + 10) << "\" y1=\"" << num2(ly)
        << "\" x2=\"" << num2(W - mr + 34) << "\" y2=\"" << num2(ly)
        << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << num2(W - mr + 40) << "\" y=\"" << num2(ly + 4)
        << "\" font-family=\"sans-serif\" font-size=\"11\">" << s.name
        << "</text>\n";
  }
  out << "</svg>\n";
  require(out.good(), "write to " + path + " failed");
}

}  // namespace wkg
