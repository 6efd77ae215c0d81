#pragma once
/// Symmetry vector fields of the flat wave operator and the machinery for
/// applying products of them to evolved fields.
///
/// Generators, with the labels used in CSV columns:
///   dt, d1, d2   translations
///   Om           rotation            x1 d2 - x2 d1
///   H1, H2       hyperbolic boosts   t d_i + x_i dt
///   S            scaling             t dt + x1 d1 + x2 d2
///
/// Every time derivative of an evolved field is eliminated through the
/// equation of motion (never a time stencil): wtt = lap w + fw, and so on
/// for higher orders via the product rule on the nonlinearity.

#include <string>
#include <vector>

#include "wkg/fields.hpp"
#include "wkg/grid.hpp"
#include "wkg/nullforms.hpp"

namespace wkg {

enum class Gen { dt, d1, d2, rot, boost1, boost2, scale };

/// The six generators that commute with the wave operator (S is excluded;
/// it satisfies [box, S] = 2 box and is tracked separately).
const std::vector<Gen>& commuting_family();

std::string gen_label(Gen g);

/// A product of generators, applied left to right (element 0 acts first).
using GammaWord = std::vector<Gen>;

/// "H1.Om" style label; the empty word is "1".
std::string word_label(const GammaWord& w);

/// Canonical multi-index words over the commuting family with length <= cap:
/// identity first, then by length, lexicographic within a length,
/// non-decreasing generator sequences only.
std::vector<GammaWord> canonical_words(int cap);

/// Every mixed spacetime derivative d_t^a d_1^b d_2^c u with a+b+c <= order
/// of one scalar, at one fixed time. Order 1 is a first-derivative jet,
/// order 2 adds the Hessian entries.
class DerivTable {
 public:
  DerivTable() = default;
  DerivTable(GridPtr g, double t, int order);

  int order() const { return order_; }
  double t() const { return t_; }
  const GridPtr& grid_ptr() const { return grid_; }

  Field& at(int a, int b, int c);
  const Field& at(int a, int b, int c) const;

  static std::size_t count(int order);

 private:
  GridPtr grid_;
  double t_ = 0.0;
  int order_ = -1;
  std::vector<Field> e_;
};

/// First-derivative jet view of a table (order >= 1).
Jet to_jet(const DerivTable& u);

struct StateTables {
  DerivTable w, v;
};
/// Derivative tables of the evolved pair, order <= 5.
StateTables build_tables(const FieldState& s, int order);

/// Table of g(u) to order u.order() - 1. This is the jet-level application
/// of one vector field; coordinate factors are exact nodal values.
DerivTable apply_generator(const DerivTable& u, Gen g);

/// Table of the whole word (left to right), order base.order() - len(word).
DerivTable word_table(const GammaWord& w, const DerivTable& base);

/// Value of Gamma^word applied to the chosen evolved field.
Field apply_word(const GammaWord& w, const FieldState& s, Target which);

/// G_i u = (x_i / r) dt(u) + d_i(u). The node with r < h/2 (if any) gets
/// weight zero and is reported so sup statistics can skip it.
struct GoodDerivative {
  Field field;
  std::ptrdiff_t excluded_node = -1;
};
GoodDerivative good_derivative(const Jet& j, int i);

/// sup |box(g u) - g(box u) - (g == S ? 2 box u : 0)| for a table of order
/// >= 3 (analytic, hybrid, or PDE-substituted).
double commutator_residual(Gen g, const DerivTable& u);

/// Reconstructs dt(u) and d_i(u) from S, H_i, Om through the algebraic
/// representation identities, away from the light cone
/// (|t^2 - r^2| > 0.1 <t>^2 h), and compares the two alternative forms of
/// the good derivative against the direct one. Relative errors are against
/// the global sup of the reconstructed slot.
struct RepresentationCheck {
  double max_rel_dt = 0.0;
  double max_rel_d1 = 0.0;
  double max_rel_d2 = 0.0;
  double max_rel_good = 0.0;
  std::size_t checked = 0;
  std::size_t excluded = 0;
};
RepresentationCheck representation_check(const DerivTable& u);

/// Second derivatives of w through the operator identity
///   -box = ((t-r)(t+r)/t^2) dt dt + (x^i/t^2) dt H_i - (1/t) d^i H_i
///          + (2/t) dt - (x^i/t^2) d_i
/// identity_rel: sup |identity applied to w - fw| / sup |fw|.
/// ratio_max:    max over nodes r <= 2t of
///               <t-r> |ddw| / (sum_{|I|<=1} |d Gamma^I w| + t |fw|).
struct HessianCheck {
  double identity_rel = 0.0;
  double ratio_max = 0.0;
  double fw_sup = 0.0;
};
/// Requires s.t >= 1.
HessianCheck hessian_decay_check(const FieldState& s);

}  // namespace wkg
