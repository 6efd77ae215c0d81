#pragma once
/// Energies, weighted sup norms, the ghost-weight accumulators, decay fits,
/// and the record/report machinery that turns an evolution into CSV, SVG
/// and summary output.
///
/// A record is one flat row of doubles; the column list is fixed by the
/// configuration at construction, so identical runs write identical bytes.

#include <cstddef>
#include <string>
#include <vector>

#include "wkg/fields.hpp"
#include "wkg/grid.hpp"
#include "wkg/nullforms.hpp"
#include "wkg/propagate.hpp"
#include "wkg/vectorfields.hpp"

namespace wkg {

/// E(u) = integral of ut^2 + |grad u|^2.
double energy_wave(const Jet& u);

/// E1(u) = E(u) + integral of u^2.
double energy_kg(const Jet& u);

/// Conformal charge integral of (Su + u)^2 + (Om u)^2 + (H1 u)^2 + (H2 u)^2,
/// from a table of order >= 1.
double conformal_energy(const DerivTable& u);

/// sup over nodes of <t>^{1/2} <t - r>^{3/4} |grad_{t,x} u|.
double weighted_sup_gradient(const Jet& u, double t);

/// sup over nodes of <t + r> |u|.
double weighted_sup_value(const Field& u, double t);

/// Pointwise null-structure gauge: the largest nodewise value of
///   |Q(w, v)| / (|Gw| |dv| + |dw| |Gv|)
/// over Q0 and the three independent Q_{ab}, raw products. Nodes where the
/// denominator is below 1e-8 of its sup (and the origin node) are skipped
/// and counted.
struct NullRatio {
  double ratio = 0.0;
  std::size_t skipped = 0;
};
NullRatio nullform_pointwise_ratio(const FieldState& s);

/// q(t, r) = integral of <s>^{-3/2} over s < r - t (the ghost weight
/// antiderivative; q(t, t) = 2.6220575...).
double ghost_q(double t, double r);

/// sup <t+r>^{1/2} <t-r>^{1/2} |u| over the sum of L2 norms of all words of
/// length <= 2 (including S) applied to u; 0 when the denominator vanishes.
/// Needs a table of order >= 2.
double sobolev_ratio(const DerivTable& u);

/// Least squares slope of log(value) against log(t) for records with
/// t >= t_min and value > 0.
struct DecayFit {
  double slope = 0.0;
  double intercept = 0.0;
  int samples = 0;
};
DecayFit fit_decay(const std::vector<double>& t, const std::vector<double>& v,
                   double t_min);

struct DiagnosticsConfig {
  /// Word length cap over the commuting family for the per-word blocks
  /// (0..3). S-prefixed energies need derivative tables two orders higher.
  int word_cap = 2;
  double delta = 0.05;   // bootstrap scaling exponent
  double delta0 = 0.1;   // time weight inside the ghost accumulator
  bool track_words = true;
  bool track_sobolev = true;
  bool track_decomposition = true;
  bool track_reconstruction = false;  // needs co-evolved companion pairs
};

class DiagnosticsSuite {
 public:
  explicit DiagnosticsSuite(const DiagnosticsConfig& cfg);

  const DiagnosticsConfig& config() const { return cfg_; }
  const std::vector<std::string>& columns() const { return columns_; }
  /// Index of a named column; fails if absent.
  std::size_t column(const std::string& name) const;

  /// Appends one record at the state time and advances the ghost
  /// accumulators by the trapezoid rule. `aux` may be null unless
  /// reconstruction tracking is on. `horizon` marks rows past the
  /// wrap-around time.
  const std::vector<double>& record(const FieldState& s,
                                    const AuxiliaryStates* aux,
                                    double horizon);

  const std::vector<std::vector<double>>& rows() const { return rows_; }

  /// Serialized accumulator and row state, for checkpointing; restoring
  /// reproduces the byte stream of an uninterrupted run.
  std::vector<double> serialize() const;
  void restore(const std::vector<double>& blob);

  /// Boundedness report against the bootstrap-style scalings: each tracked
  /// series is reduced to its value at the first record with t >= t_baseline
  /// and the largest value afterwards.
  struct BootstrapLine {
    std::string name;
    double baseline = 0.0;
    double peak = 0.0;
    double ratio = 0.0;  // peak / baseline
  };
  std::vector<BootstrapLine> bootstrap_report(double t_baseline = 5.0) const;

 private:
  DiagnosticsConfig cfg_;
  std::vector<std::string> columns_;
  std::vector<GammaWord> words_;
  std::vector<std::vector<double>> rows_;
  // ghost trapezoid state: previous record time and integrands
  bool have_prev_ = false;
  double prev_t_ = 0.0;
  std::vector<double> prev_integrand_;
  std::vector<double> ghost_accum_;
};

/// Header plus %.17g rows, comma separated, newline \n. Deterministic.
void write_csv(const std::string& path,
               const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows);

struct PlotSeries {
  std::string name;
  std::vector<double> x, y;
};

/// Fixed-size log-log SVG plot. Points with nonpositive coordinates are
/// dropped. No timestamps or other run-varying bytes.
void write_loglog_svg(const std::string& path, const std::string& title,
                      const std::vector<PlotSeries>& series);

}  // namespace wkg
