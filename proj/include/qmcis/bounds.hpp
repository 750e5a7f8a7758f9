#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>

#include "qmcis/dirichlet.hpp"
#include "qmcis/discrepancy.hpp"
#include "qmcis/estimators.hpp"
#include "qmcis/integrands.hpp"
#include "qmcis/point_set.hpp"

namespace qmcis {

/// One inequality lhs <= rhs, checked with an additive slack covering the
/// numerically estimated components.
struct InequalityCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  bool pass = false;
  double margin = 0.0;  // (rhs - lhs) / rhs

  static InequalityCheck make(double lhs, double rhs, double slack) {
    InequalityCheck c{lhs, rhs, slack, lhs <= rhs + slack, 0.0};
    c.margin = rhs > 0.0 ? (rhs - lhs) / rhs : (lhs <= slack ? 0.0 : -1.0);
    return c;
  }
};

/// ||u||_D as used by the bounds: the estimate and how much it moved when
/// grid and quadrature were both halved.
struct UDInfo {
  double value = 0.0;
  double refinement_delta = 0.0;
};

struct BoundOptions {
  std::uint64_t budget = default_corner_budget;
  int ud_grid = 0;  // 0: default_ud_grid(d)
  int ud_order = default_ud_quadrature_order;
  std::optional<UDInfo> ud;  // reuse a precomputed ||u||_D
};

struct BoundReport {
  std::string model;
  std::string integrand;
  std::string source;
  std::size_t n = 0;

  double d_classical = 0.0;
  double d_weighted = 0.0;
  double h1_norm = 0.0;
  double h1_seminorm = 0.0;
  double u_D_estimate = 0.0;
  double u_D_delta = 0.0;
  double u_l1 = 0.0;
  double oracle_eps = 0.0;
  double reference = 0.0;  // S(f,u)
  double estimate = 0.0;   // Q_n(f,u)

  std::optional<InequalityCheck> koksma_hlawka;       // |S - sum w f| <= ||f||~ D_pi(w,P)
  std::optional<InequalityCheck> koksma_hlawka_full;  // same with the full H1 norm
  std::optional<InequalityCheck> relation;            // D_pi(w^u,P) <= 4 D(P) ||u||_D / int u
  std::optional<InequalityCheck> main;                // |S - Q_n| <= 4 ||f|| ||u||_D / int u D(P)

  bool all_pass() const {
    for (const auto* c : {&koksma_hlawka, &koksma_hlawka_full, &relation, &main})
      if (c->has_value() && !(*c)->pass) return false;
    return true;
  }
};

// ---- model and integrand hooks -------------------------------------------

inline double unnormalized_mass(const DirichletModel& m) { return dirichlet_normalizer(m); }
inline double unnormalized_mass(const UniformDensity&) { return 1.0; }

inline DirichletCellMeasure box_oracle(const DirichletModel& m) { return DirichletCellMeasure(m); }
inline LebesgueMeasure box_oracle(const UniformDensity&) { return {}; }

inline auto density_of(const DirichletModel& m) {
  return [&m](std::span<const double> x) { return dirichlet_u(m, x); };
}
inline UniformDensity density_of(const UniformDensity& m) { return m; }

inline UDInfo u_D_info(const DirichletModel& m, int grid = 0, int order = default_ud_quadrature_order) {
  if (grid == 0) grid = default_ud_grid(m.dim());
  const double fine = u_D_norm_estimate(m, grid, order).value;
  const double coarse = u_D_norm_estimate(m, std::max(8, grid / 2), std::max(4, order / 2)).value;
  return {fine, std::abs(fine - coarse)};
}
/// sup u = 1 and every derivative of a constant vanishes.
inline UDInfo u_D_info(const UniformDensity&, int = 0, int = 0) { return {1.0, 0.0}; }

inline double h1_norm(const MonomialIntegrand& f) { return h1_norm_monomial(f); }
inline double h1_seminorm(const MonomialIntegrand& f) { return h1_seminorm_monomial(f); }
inline double h1_norm(const ConstantIntegrand& f) { return std::abs(f.c); }
inline double h1_seminorm(const ConstantIntegrand&) { return 0.0; }

template <class Model>
double expectation(const Model& m, const MonomialIntegrand& f) {
  return monomial_expectation(m, f);
}
template <class Model>
double expectation(const Model&, const ConstantIntegrand& f) {
  return f.c;
}

// ---- checks ----------------------------------------------------------------

/**
 * Koksma-Hlawka inequality for the weighted discrepancy:
 *   |S(f,u) - sum_i w_i f(x_i)| <= ||f||_{H~1} D_pi(w, P).
 * The slack is ||f||_{H~1} times the oracle accuracy. The report also carries
 * the weaker form with the full H1 norm.
 */
template <class Model, class Integrand, BoxMeasure Oracle>
BoundReport check_koksma_hlawka(const PointSet& pts, const WeightVector& w, const Model& model,
                                const Integrand& f, const Oracle& oracle,
                                std::uint64_t budget = default_corner_budget) {
  BoundReport r;
  r.n = pts.size();
  r.source = to_string(pts.source().kind);
  r.reference = expectation(model, f);
  CompensatedSum q;
  for (std::size_t i = 0; i < pts.size(); ++i) q += w[i] * static_cast<double>(f(pts.point(i)));
  r.estimate = q.value();
  const auto dw = weighted_star_discrepancy(pts, w, oracle, budget);
  r.d_weighted = dw.value;
  r.oracle_eps = dw.oracle_eps;
  r.h1_norm = h1_norm(f);
  r.h1_seminorm = h1_seminorm(f);
  const double lhs = std::abs(r.reference - r.estimate);
  r.koksma_hlawka = InequalityCheck::make(lhs, r.h1_seminorm * r.d_weighted, r.h1_seminorm * r.oracle_eps);
  r.koksma_hlawka_full = InequalityCheck::make(lhs, r.h1_norm * r.d_weighted, r.h1_norm * r.oracle_eps);
  return r;
}

template <class Model, class Integrand>
BoundReport check_koksma_hlawka(const PointSet& pts, const WeightVector& w, const Model& model,
                                const Integrand& f, std::uint64_t budget = default_corner_budget) {
  return check_koksma_hlawka(pts, w, model, f, box_oracle(model), budget);
}

/**
 * Weighted versus classical discrepancy:
 *   D_pi(w^u, P) <= 4 D(P) ||u||_D / int u.
 * Slack: the oracle accuracy plus the change of the ||u||_D estimate under
 * refinement, propagated through the right-hand side.
 */
template <class Model, BoxMeasure Oracle>
BoundReport check_discrepancy_relation(const PointSet& pts, const Model& model, const Oracle& oracle,
                                       const BoundOptions& opt = {}) {
  BoundReport r;
  r.n = pts.size();
  r.source = to_string(pts.source().kind);
  const auto w = self_normalized_weights(pts, density_of(model));
  const auto dw = weighted_star_discrepancy(pts, w, oracle, opt.budget);
  r.d_weighted = dw.value;
  r.oracle_eps = dw.oracle_eps;
  r.d_classical = star_discrepancy_exact(pts, opt.budget).value;
  const UDInfo ud = opt.ud ? *opt.ud : u_D_info(model, opt.ud_grid, opt.ud_order);
  r.u_D_estimate = ud.value;
  r.u_D_delta = ud.refinement_delta;
  r.u_l1 = unnormalized_mass(model);
  const double rhs = 4.0 * r.d_classical * r.u_D_estimate / r.u_l1;
  const double slack = r.oracle_eps + 4.0 * r.d_classical * r.u_D_delta / r.u_l1;
  r.relation = InequalityCheck::make(r.d_weighted, rhs, slack);
  return r;
}

template <class Model>
BoundReport check_discrepancy_relation(const PointSet& pts, const Model& model, const BoundOptions& opt = {}) {
  return check_discrepancy_relation(pts, model, box_oracle(model), opt);
}

/**
 * The combined error bound for the self-normalized estimator,
 *   |S(f,u) - Q_n(f,u)| <= 4 ||f||_{H1} ||u||_D / int u * D(P),
 * assembled from the same components as the two inequalities it chains, which
 * are checked and reported alongside it.
 */
template <class Model, class Integrand>
BoundReport check_main_bound(const PointSet& pts, const Model& model, const Integrand& f,
                             const BoundOptions& opt = {}) {
  const auto oracle = box_oracle(model);
  const auto u = density_of(model);
  const auto w = self_normalized_weights(pts, u);

  BoundReport r = check_koksma_hlawka(pts, w, model, f, oracle, opt.budget);
  r.estimate = importance_estimate(pts, f, u).estimate;
  r.d_classical = star_discrepancy_exact(pts, opt.budget).value;
  const UDInfo ud = opt.ud ? *opt.ud : u_D_info(model, opt.ud_grid, opt.ud_order);
  r.u_D_estimate = ud.value;
  r.u_D_delta = ud.refinement_delta;
  r.u_l1 = unnormalized_mass(model);

  const double rel_rhs = 4.0 * r.d_classical * r.u_D_estimate / r.u_l1;
  const double rel_slack = r.oracle_eps + 4.0 * r.d_classical * r.u_D_delta / r.u_l1;
  r.relation = InequalityCheck::make(r.d_weighted, rel_rhs, rel_slack);

  const double lhs = std::abs(r.reference - r.estimate);
  const double rhs = 4.0 * r.h1_norm * r.u_D_estimate / r.u_l1 * r.d_classical;
  const double slack = 4.0 * r.h1_norm * r.u_D_delta / r.u_l1 * r.d_classical;
  r.main = InequalityCheck::make(lhs, rhs, slack);
  return r;
}

}  // namespace qmcis
