#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qmcis/gauss_legendre.hpp"
#include "qmcis/sequences.hpp"
#include "qmcis/summation.hpp"

namespace qmcis {

/// A subset v of the coordinate indices {0,..,d-1}, as a bitmask.
struct Subset {
  std::uint32_t mask = 0;

  constexpr bool contains(std::size_t i) const noexcept { return (mask >> i) & 1u; }
  constexpr std::size_t size() const noexcept { return static_cast<std::size_t>(std::popcount(mask)); }
  constexpr bool empty() const noexcept { return mask == 0; }

  static constexpr Subset full(std::size_t d) noexcept {
    return {d >= 32 ? ~0u : (std::uint32_t{1} << d) - 1u};
  }
  std::vector<std::size_t> members() const {
    std::vector<std::size_t> out;
    for (std::uint32_t m = mask; m != 0; m &= m - 1) out.push_back(static_cast<std::size_t>(std::countr_zero(m)));
    return out;
  }
  friend constexpr bool operator==(Subset, Subset) = default;
};

/**
 * Unnormalized Dirichlet density on the d-simplex,
 *   u(x; alpha) = (1 - sum x_i)^(alpha_{d+1} - 1) * prod x_i^(alpha_i - 1)  on the simplex,
 * and 0 elsewhere in [0,1]^d. alpha has d+1 entries, each >= 1.
 */
class DirichletModel {
 public:
  explicit DirichletModel(std::vector<double> alpha) : alpha_(std::move(alpha)) {
    if (alpha_.size() < 2) throw std::invalid_argument("DirichletModel: alpha needs d+1 >= 2 entries");
    if (alpha_.size() - 1 > max_sequence_dimension)
      throw std::invalid_argument("DirichletModel: dimension must be <= 16");
    for (double a : alpha_)
      if (!std::isfinite(a) || a < 1.0) throw std::invalid_argument("DirichletModel: alpha entries must be >= 1");
  }

  /// alpha = (2,...,2,d), the family used in the convergence study.
  static DirichletModel standard(std::size_t d) {
    std::vector<double> a(d + 1, 2.0);
    a[d] = static_cast<double>(d);
    return DirichletModel(std::move(a));
  }

  std::size_t dim() const noexcept { return alpha_.size() - 1; }
  std::span<const double> alpha() const noexcept { return alpha_; }
  double alpha(std::size_t i) const noexcept { return alpha_[i]; }

  /// alpha_i >= 2 for i <= d and alpha_{d+1} >= d: the conditions under which
  /// the mixed-partial expansion holds and ||u||_D is finite.
  bool derivative_preconditions_hold() const noexcept {
    const std::size_t d = dim();
    for (std::size_t i = 0; i < d; ++i)
      if (alpha_[i] < 2.0) return false;
    return alpha_[d] >= static_cast<double>(d);
  }

  void require_derivative_preconditions() const {
    if (!derivative_preconditions_hold())
      throw std::invalid_argument(
          "DirichletModel: derivative operations need alpha_i >= 2 (i <= d) and alpha_{d+1} >= d");
  }

  friend bool operator==(const DirichletModel&, const DirichletModel&) = default;

 private:
  std::vector<double> alpha_;
};

namespace detail {

inline bool is_small_integer(double e) noexcept {
  return e == std::floor(e) && std::abs(e) <= 64.0;
}

inline double ipow(double b, int e) noexcept {
  double r = 1.0;
  for (; e > 0; e >>= 1, b *= b)
    if (e & 1) r *= b;
  return r;
}

/**
 * prod_i x_i^e_i * (1 - sum x)^e_{d} on the simplex, 0 off it. `exps` has d+1
 * entries and may go down to -1 for the shifted parameters of derivative
 * terms. Zero exponents contribute 1 (including 0^0). Integer exponents are
 * evaluated by repeated multiplication, others in log space.
 */
inline double dirichlet_kernel(std::span<const double> exps, std::span<const double> x,
                               bool integer_exponents) noexcept {
  const std::size_t d = x.size();
  double rest = 1.0;
  for (std::size_t i = 0; i < d; ++i) {
    if (x[i] < 0.0) return 0.0;
    rest -= x[i];
  }
  if (rest < 0.0) return 0.0;

  if (integer_exponents) {
    double r = 1.0;
    for (std::size_t i = 0; i <= d; ++i) {
      const double b = i < d ? x[i] : rest;
      const int e = static_cast<int>(exps[i]);
      if (e == 0) continue;
      if (b == 0.0) return e > 0 ? 0.0 : std::numeric_limits<double>::infinity();
      r *= e > 0 ? ipow(b, e) : 1.0 / ipow(b, -e);
    }
    return r;
  }

  double log_r = 0.0;
  for (std::size_t i = 0; i <= d; ++i) {
    const double b = i < d ? x[i] : rest;
    const double e = exps[i];
    if (e == 0.0) continue;
    if (b == 0.0) return e > 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    log_r += e * std::log(b);
  }
  return std::exp(log_r);
}

inline bool all_small_integers(std::span<const double> e) noexcept {
  return std::all_of(e.begin(), e.end(), is_small_integer);
}

}  // namespace detail

/// u(x; alpha). Zero outside the simplex and wherever a factor with positive
/// exponent vanishes.
inline double dirichlet_u(const DirichletModel& model, std::span<const double> x) {
  if (x.size() != model.dim()) throw std::invalid_argument("dirichlet_u: point dimension mismatch");
  std::vector<double> e(model.alpha().begin(), model.alpha().end());
  for (double& v : e) v -= 1.0;
  return detail::dirichlet_kernel(e, x, detail::all_small_integers(e));
}

/// log of prod Gamma(alpha_i) / Gamma(sum alpha_i).
inline double dirichlet_log_normalizer(const DirichletModel& model) {
  double s = 0.0;
  double lg = 0.0;
  for (double a : model.alpha()) {
    lg += std::lgamma(a);
    s += a;
  }
  return lg - std::lgamma(s);
}

/// Integral of u over [0,1]^d.
inline double dirichlet_normalizer(const DirichletModel& model) {
  return std::exp(dirichlet_log_normalizer(model));
}

/// Maximum of u, attained at the mode x_i = (alpha_i - 1) / sum_j (alpha_j - 1).
inline double dirichlet_sup(const DirichletModel& model) {
  const std::size_t d = model.dim();
  double total = 0.0;
  for (double a : model.alpha()) total += a - 1.0;
  if (total == 0.0) return 1.0;
  std::vector<double> mode(d);
  for (std::size_t i = 0; i < d; ++i) mode[i] = (model.alpha(i) - 1.0) / total;
  return dirichlet_u(model, mode);
}

/**
 * Mixed partial derivative d^|v| u / dx_v as the finite sum
 *
 *   sum_{k_v in {0,1}^|v|} c_{v,k} u(x; alpha - (k_v; 0; k_{d+1})),   k_{d+1} = |v| - sum k_v,
 *   c_{v,k} = (-1)^k_{d+1} prod_{j=1}^{k_{d+1}} (alpha_{d+1} - j) prod_{i in v} (alpha_i - 1)^k_i.
 *
 * Terms with a zero coefficient are dropped, so no term ever needs a negative
 * exponent of a vanishing factor.
 */
class PartialExpansion {
 public:
  struct Term {
    double coefficient;
    std::vector<double> exponents;  // d+1 entries
  };

  PartialExpansion(const DirichletModel& model, Subset v) : dim_(model.dim()), subset_(v) {
    model.require_derivative_preconditions();
    const std::size_t d = model.dim();
    if (v.mask >> d) throw std::invalid_argument("PartialExpansion: subset exceeds dimension");
    const auto members = v.members();
    const std::size_t m = members.size();
    for (std::uint32_t bits = 0; bits < (std::uint32_t{1} << m); ++bits) {
      const std::size_t k_last = m - static_cast<std::size_t>(std::popcount(bits));
      double c = (k_last % 2 == 0) ? 1.0 : -1.0;
      for (std::size_t j = 1; j <= k_last; ++j) c *= model.alpha(d) - static_cast<double>(j);
      std::vector<double> e(model.alpha().begin(), model.alpha().end());
      for (double& x : e) x -= 1.0;
      for (std::size_t t = 0; t < m; ++t) {
        if ((bits >> t) & 1u) {
          c *= model.alpha(members[t]) - 1.0;
          e[members[t]] -= 1.0;
        }
      }
      e[d] -= static_cast<double>(k_last);
      if (c == 0.0) continue;
      terms_.push_back({c, std::move(e)});
    }
    integer_ = std::all_of(terms_.begin(), terms_.end(),
                           [](const Term& t) { return detail::all_small_integers(t.exponents); });
  }

  double operator()(std::span<const double> x) const noexcept {
    double s = 0.0;
    for (const auto& t : terms_) s += t.coefficient * detail::dirichlet_kernel(t.exponents, x, integer_);
    return s;
  }

  std::size_t dim() const noexcept { return dim_; }
  Subset subset() const noexcept { return subset_; }
  std::span<const Term> terms() const noexcept { return terms_; }

 private:
  std::size_t dim_;
  Subset subset_;
  std::vector<Term> terms_;
  bool integer_ = true;
};

inline double dirichlet_partial(const DirichletModel& model, Subset v, std::span<const double> x) {
  if (x.size() != model.dim()) throw std::invalid_argument("dirichlet_partial: point dimension mismatch");
  return PartialExpansion(model, v)(x);
}

/// Estimate of ||u||_D = sup u + sup_z ||u(T_z .)||_{H~1}.
struct UDNormEstimate {
  double value = 0.0;
  double sup_u = 0.0;
  double sup_scaled_seminorm = 0.0;
  std::vector<double> argmax_z;
  int grid = 0;
  int quadrature_order = 0;
  std::string mode = "upper-bound-estimate";
};

inline int default_ud_grid(std::size_t d) { return d <= 3 ? 32 : 8; }
inline constexpr int default_ud_quadrature_order = 16;

namespace detail {

/// Nested Gauss-Legendre integration of |g(T_z (x_v; 1))| over [0,1]^|v|,
/// where g is a partial-derivative expansion. Each axis is cut off where the
/// mapped point leaves the simplex, and split wherever an inner axis's cut-off
/// switches on, and the innermost axis is also split at the sign changes of g,
/// so every piece integrates a smooth function.
class ScaledSeminormTerm {
 public:
  ScaledSeminormTerm(const PartialExpansion& g, const GaussLegendre& rule)
      : g_(g), rule_(rule), axes_(g.subset().members()) {}

  double operator()(std::span<const double> z) const {
    const std::size_t d = g_.dim();
    double scale = 1.0;
    for (std::size_t a : axes_) scale *= z[a];
    if (scale == 0.0) return 0.0;
    double fixed = 0.0;
    point_.assign(z.begin(), z.end());
    for (std::size_t j = 0; j < d; ++j)
      if (!g_.subset().contains(j)) fixed += z[j];
    const double room = 1.0 - fixed;
    if (room <= 0.0) return 0.0;
    return scale * integrate(0, room, z);
  }

 private:
  double integrate(std::size_t level, double room, std::span<const double> z) const {
    const std::size_t a = axes_[level];
    const double za = z[a];
    const double upper = std::min(1.0, room / za);
    if (upper <= 0.0) return 0.0;

    std::vector<double> cuts{0.0, upper};
    const std::size_t later = axes_.size() - level - 1;
    for (std::uint32_t bits = 1; bits < (std::uint32_t{1} << later); ++bits) {
      double t = 0.0;
      for (std::size_t k = 0; k < later; ++k)
        if ((bits >> k) & 1u) t += z[axes_[level + 1 + k]];
      const double b = (room - t) / za;
      if (b > 0.0 && b < upper) cuts.push_back(b);
    }
    std::sort(cuts.begin(), cuts.end());
    if (later == 0) split_at_sign_changes(cuts, a, za);

    double total = 0.0;
    for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
      const double lo = cuts[c];
      const double h = cuts[c + 1] - lo;
      if (h <= 0.0) continue;
      double piece = 0.0;
      for (int q = 0; q < rule_.order(); ++q) {
        const double x = lo + h * rule_.nodes[q];
        point_[a] = za * x;
        const double inner = level + 1 == axes_.size() ? std::abs(g_(point_))
                                                       : integrate(level + 1, room - za * x, z);
        piece += rule_.weights[q] * inner;
      }
      total += piece * h;
    }
    return total;
  }

  double g_at(std::size_t a, double za, double x) const {
    point_[a] = za * x;
    return g_(point_);
  }

  // |g| has a kink wherever g changes sign. Locate sign changes on a sample
  // grid of each piece and bisect, so each piece is smooth again.
  void split_at_sign_changes(std::vector<double>& cuts, std::size_t a, double za) const {
    constexpr int samples = 16;
    std::vector<double> roots;
    for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
      const double lo = cuts[c], h = cuts[c + 1] - lo;
      if (h <= 0.0) continue;
      double x0 = lo, g0 = g_at(a, za, lo);
      for (int k = 1; k <= samples; ++k) {
        const double x1 = lo + h * k / samples;
        const double g1 = g_at(a, za, x1);
        if ((g0 < 0.0 && g1 > 0.0) || (g0 > 0.0 && g1 < 0.0)) {
          double l = x0, r = x1, gl = g0;
          for (int it = 0; it < 40 && r - l > 1e-15; ++it) {
            const double m = 0.5 * (l + r);
            const double gm = g_at(a, za, m);
            if ((gm < 0.0) == (gl < 0.0)) {
              l = m;
              gl = gm;
            } else {
              r = m;
            }
          }
          roots.push_back(0.5 * (l + r));
        }
        if (g1 != 0.0) {
          x0 = x1;
          g0 = g1;
        }
      }
    }
    if (roots.empty()) return;
    cuts.insert(cuts.end(), roots.begin(), roots.end());
    std::sort(cuts.begin(), cuts.end());
  }

  const PartialExpansion& g_;
  const GaussLegendre& rule_;
  std::vector<std::size_t> axes_;
  mutable std::vector<double> point_;
};

}  // namespace detail

/// ||u(T_z .)||_{H~1} at one scaling corner z, using the chain-rule identity
/// d^|v|/dx_v u(T_z x) = prod_{i in v} z_i * (d^|v| u / dx_v)(T_z x).
inline double scaled_seminorm(const DirichletModel& model, std::span<const double> z,
                              int quadrature_order = default_ud_quadrature_order) {
  if (z.size() != model.dim()) throw std::invalid_argument("scaled_seminorm: corner dimension mismatch");
  const GaussLegendre rule(quadrature_order);
  double s = 0.0;
  for (std::uint32_t mask = 1; mask <= Subset::full(model.dim()).mask; ++mask) {
    const PartialExpansion g(model, Subset{mask});
    s += detail::ScaledSeminormTerm(g, rule)(z);
  }
  return s;
}

/**
 * Grid estimate of ||u||_D.
 *
 * sup u is taken at the closed-form mode (and checked against the grid). The
 * second term is maximised over the grid {1/r, 2/r, ..., 1}^d, which contains
 * the identity scaling z = (1,...,1). Each seminorm uses tensor Gauss-Legendre
 * of the given order per active axis. The result is an estimate: the integrand
 * is only split at sign changes along the innermost axis, and the sup over z
 * is sampled.
 */
inline UDNormEstimate u_D_norm_estimate(const DirichletModel& model, int grid = 0,
                                        int quadrature_order = default_ud_quadrature_order) {
  model.require_derivative_preconditions();
  const std::size_t d = model.dim();
  if (grid == 0) grid = default_ud_grid(d);
  if (grid < 8) throw std::invalid_argument("u_D_norm_estimate: grid resolution must be >= 8");
  if (quadrature_order < 4) throw std::invalid_argument("u_D_norm_estimate: quadrature order must be >= 4");

  const GaussLegendre rule(quadrature_order);
  std::vector<PartialExpansion> expansions;
  for (std::uint32_t mask = 1; mask <= Subset::full(d).mask; ++mask) expansions.emplace_back(model, Subset{mask});
  std::vector<detail::ScaledSeminormTerm> terms;
  terms.reserve(expansions.size());
  for (const auto& g : expansions) terms.emplace_back(g, rule);

  UDNormEstimate out;
  out.grid = grid;
  out.quadrature_order = quadrature_order;
  out.sup_u = dirichlet_sup(model);
  out.sup_scaled_seminorm = -1.0;

  std::vector<int> idx(d, 1);
  std::vector<double> z(d);
  for (;;) {
    for (std::size_t j = 0; j < d; ++j) z[j] = static_cast<double>(idx[j]) / grid;
    out.sup_u = std::max(out.sup_u, dirichlet_u(model, z));
    double s = 0.0;
    for (const auto& t : terms) s += t(z);
    if (s > out.sup_scaled_seminorm) {
      out.sup_scaled_seminorm = s;
      out.argmax_z = z;
    }
    std::size_t j = d;
    while (j-- > 0) {
      if (++idx[j] <= grid) break;
      idx[j] = 1;
    }
    if (j == static_cast<std::size_t>(-1)) break;
  }
  out.value = out.sup_u + out.sup_scaled_seminorm;
  return out;
}

/// A QMC estimate of pi([0,z)) with its estimated absolute error.
struct BoxMeasureValue {
  double value = 0.0;
  double eps = 0.0;
};

/**
 * pi([0,z)) = (integral of u over [0,z)) / normalizer, by Sobol quadrature:
 * the first `budget` Sobol points are mapped into the box by T_z, with
 * Jacobian prod z_i. The error estimate is the larger of |full - half| and
 * |half - quarter| over the nested leading subsets of the points.
 */
inline BoxMeasureValue dirichlet_box_measure(const DirichletModel& model, std::span<const double> z,
                                             std::size_t budget = std::size_t{1} << 20) {
  const std::size_t d = model.dim();
  if (z.size() != d) throw std::invalid_argument("dirichlet_box_measure: corner dimension mismatch");
  double jac = 1.0;
  for (double c : z) {
    if (c < 0.0 || c > 1.0) throw std::invalid_argument("dirichlet_box_measure: corner must lie in [0,1]^d");
    jac *= c;
  }
  if (jac == 0.0) return {0.0, 0.0};

  const PointSet pts = sobol(budget, d);
  std::vector<double> e(model.alpha().begin(), model.alpha().end());
  for (double& v : e) v -= 1.0;
  const bool integer = detail::all_small_integers(e);
  if (budget < 4) throw std::invalid_argument("dirichlet_box_measure: budget must be >= 4");
  const std::size_t half = budget / 2, quarter = budget / 4;
  CompensatedSum first_quarter, first, all;
  std::vector<double> y(d);
  for (std::size_t i = 0; i < budget; ++i) {
    auto p = pts.point(i);
    for (std::size_t j = 0; j < d; ++j) y[j] = z[j] * p[j];
    const double u = detail::dirichlet_kernel(e, y, integer);
    all += u;
    if (i < half) first += u;
    if (i < quarter) first_quarter += u;
  }
  const double norm = dirichlet_normalizer(model);
  const double full = jac * all.value() / static_cast<double>(budget) / norm;
  const double coarse = jac * first.value() / static_cast<double>(half) / norm;
  const double coarser = jac * first_quarter.value() / static_cast<double>(quarter) / norm;
  return {full, std::max(std::abs(full - coarse), std::abs(coarse - coarser))};
}

/// Box-measure oracle backed by dirichlet_box_measure. Each query costs a full
/// QMC run, so it is only practical for small critical grids.
class SobolDirichletMeasure {
 public:
  SobolDirichletMeasure(DirichletModel model, std::size_t budget = std::size_t{1} << 16)
      : model_(std::move(model)), budget_(budget) {
    std::vector<double> ones(model_.dim(), 1.0);
    // The full-cube error is the largest of the nested-budget differences in
    // practice; doubled for headroom and floored to cover small boxes.
    eps_ = std::max(2.0 * dirichlet_box_measure(model_, ones, budget_).eps, 1e-6);
  }

  double measure(std::span<const double> z) const { return dirichlet_box_measure(model_, z, budget_).value; }
  double accuracy() const noexcept { return eps_; }

 private:
  DirichletModel model_;
  std::size_t budget_;
  double eps_ = 0.0;
};

/**
 * Box-measure oracle that integrates u over grid cells [lo,hi] intersected
 * with the simplex by nested Gauss-Legendre quadrature. Each axis is cut off
 * at the simplex face and split wherever an inner axis's limits switch, so
 * each piece is a polynomial when alpha is integral; the order is then chosen
 * to integrate it exactly. For non-integral alpha a fixed order is used and
 * the accuracy is estimated from a refinement on the full cube.
 *
 * Queries reuse internal scratch buffers; give each thread its own copy.
 */
class DirichletCellMeasure {
 public:
  explicit DirichletCellMeasure(DirichletModel model) : model_(std::move(model)) {
    const std::size_t d = model_.dim();
    exps_.assign(model_.alpha().begin(), model_.alpha().end());
    for (double& v : exps_) v -= 1.0;
    integer_ = detail::all_small_integers(exps_);
    int order = 16;
    if (integer_) {
      double degree = 0.0;
      for (double e : exps_) degree += e;
      order = std::max(1, static_cast<int>(std::ceil((degree + static_cast<double>(d) + 1.0) / 2.0)));
    }
    rule_ = GaussLegendre(order);
    norm_ = dirichlet_normalizer(model_);
    buffer_.resize(d);
    cuts_.resize(d);

    std::vector<double> lo(d, 0.0), hi(d, 1.0);
    const double full = cell_mass(lo, hi);
    eps_ = 1e-14 + std::abs(full - 1.0);
    if (!integer_) {
      DirichletCellMeasure fine(*this);
      fine.rule_ = GaussLegendre(order + 16);
      eps_ = 10.0 * std::max(eps_, std::abs(fine.cell_mass(lo, hi) - full));
    }
  }

  double cell_mass(std::span<const double> lo, std::span<const double> hi) const {
    lo_ = lo;
    hi_ = hi;
    return integrate(0, 1.0) / norm_;
  }

  double measure(std::span<const double> z) const {
    std::vector<double> zero(z.size(), 0.0);
    return cell_mass(zero, z);
  }

  double accuracy() const noexcept { return eps_; }
  int order() const noexcept { return rule_.order(); }
  const DirichletModel& model() const noexcept { return model_; }

 private:
  double integrate(std::size_t k, double room) const {
    const std::size_t d = model_.dim();
    const double a = lo_[k];
    const double b = std::min(hi_[k], room);
    if (b <= a) return 0.0;

    cuts_buffer(k).assign({a, b});
    double inner_top = 0.0;
    for (std::size_t j = k + 1; j < d; ++j) inner_top += hi_[j];
    if (inner_top + b > room) {
      // Some inner axis is cut by the simplex face somewhere in [a,b].
      const std::size_t later = d - k - 1;
      std::size_t combos = 1;
      for (std::size_t j = 0; j < later; ++j) combos *= 3;
      for (std::size_t c = 1; c < combos; ++c) {
        std::size_t code = c;
        double t = 0.0;
        for (std::size_t j = k + 1; j < d; ++j, code /= 3) {
          if (code % 3 == 1) t += lo_[j];
          if (code % 3 == 2) t += hi_[j];
        }
        const double cut = room - t;
        if (cut > a && cut < b) cuts_buffer(k).push_back(cut);
      }
      std::sort(cuts_buffer(k).begin(), cuts_buffer(k).end());
    }

    double total = 0.0;
    const auto& cuts = cuts_buffer(k);
    for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
      const double left = cuts[c];
      const double h = cuts[c + 1] - left;
      if (h <= 0.0) continue;
      double piece = 0.0;
      for (int q = 0; q < rule_.order(); ++q) {
        const double x = left + h * rule_.nodes[q];
        buffer_[k] = x;
        const double f = k + 1 == d ? detail::dirichlet_kernel(exps_, buffer_, integer_)
                                    : integrate(k + 1, room - x);
        piece += rule_.weights[q] * f;
      }
      total += piece * h;
    }
    return total;
  }

  std::vector<double>& cuts_buffer(std::size_t k) const { return cuts_[k]; }

  DirichletModel model_;
  std::vector<double> exps_;
  bool integer_ = true;
  GaussLegendre rule_{1};
  double norm_ = 1.0;
  double eps_ = 0.0;
  mutable std::span<const double> lo_, hi_;
  mutable std::vector<double> buffer_;
  mutable std::vector<std::vector<double>> cuts_;
};

}  // namespace qmcis
