#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qmcis/discrepancy.hpp"
#include "qmcis/errors.hpp"
#include "qmcis/point_set.hpp"
#include "qmcis/sequences.hpp"
#include "qmcis/summation.hpp"

namespace qmcis {

struct EstimateReport {
  double estimate = 0.0;
  std::size_t n = 0;
  std::vector<double> weights_used;
  std::size_t zero_density_points = 0;
  std::optional<double> reference;
  std::optional<double> abs_error;
  std::optional<double> normalized_error;
};

/// |1 - estimate / reference|.
inline double normalized_error(double estimate, double reference) {
  if (reference == 0.0) throw std::invalid_argument("normalized_error: reference must be non-zero");
  return std::abs(1.0 - estimate / reference);
}

/**
 * Self-normalized importance sampling estimate
 *   sum_j f(x_j) u(x_j) / sum_j u(x_j)
 * with compensated sums. Points with zero density stay in n but contribute
 * nothing. The same formula is the Monte Carlo estimator on pseudo-random
 * points and the quasi-Monte Carlo one on low-discrepancy points.
 */
template <class Integrand, class Density>
EstimateReport importance_estimate(const PointSet& pts, const Integrand& f, const Density& u,
                                   std::optional<double> reference = std::nullopt) {
  EstimateReport r;
  r.n = pts.size();
  r.weights_used.resize(r.n);
  CompensatedSum num, den;
  for (std::size_t j = 0; j < r.n; ++j) {
    const auto x = pts.point(j);
    const double uj = static_cast<double>(u(x));
    if (!std::isfinite(uj) || uj < 0.0)
      throw std::invalid_argument("importance_estimate: density must be finite and >= 0");
    r.weights_used[j] = uj;
    if (uj == 0.0) {
      ++r.zero_density_points;
      continue;
    }
    den += uj;
    num += static_cast<double>(f(x)) * uj;
  }
  const double total = den.value();
  if (!(total > 0.0)) throw ZeroDensityError("importance_estimate: density vanishes at every point");
  r.estimate = num.value() / total;
  for (double& w : r.weights_used) w /= total;
  if (reference) {
    r.reference = reference;
    r.abs_error = std::abs(r.estimate - *reference);
    if (*reference != 0.0) r.normalized_error = normalized_error(r.estimate, *reference);
  }
  return r;
}

struct MonteCarloSummary {
  std::vector<EstimateReport> runs;  // successful runs, in rep order
  std::vector<std::uint64_t> seeds;  // seed of each successful run
  std::size_t failed_runs = 0;       // runs where every point had zero density
  double rmse = 0.0;                 // root mean square of the normalized errors
  double mean_estimate = 0.0;
};

/// `reps` independent runs on uniform_random(n, d, seed + rep). All-zero
/// density runs are counted, not fatal, as long as two runs succeed.
template <class Integrand, class Density>
MonteCarloSummary mc_repeated(std::uint64_t seed, std::size_t reps, std::size_t n, std::size_t d,
                              const Integrand& f, const Density& u, double reference) {
  if (reps < 2) throw std::invalid_argument("mc_repeated: reps must be >= 2");
  if (reference == 0.0) throw std::invalid_argument("mc_repeated: reference must be non-zero");
  MonteCarloSummary s;
  CompensatedSum sq, est;
  for (std::size_t rep = 0; rep < reps; ++rep) {
    const std::uint64_t run_seed = seed + rep;
    try {
      auto r = importance_estimate(uniform_random(n, d, run_seed), f, u, reference);
      r.weights_used.clear();
      r.weights_used.shrink_to_fit();
      sq += *r.normalized_error * *r.normalized_error;
      est += r.estimate;
      s.runs.push_back(std::move(r));
      s.seeds.push_back(run_seed);
    } catch (const ZeroDensityError&) {
      ++s.failed_runs;
    }
  }
  if (s.runs.size() < 2)
    throw ZeroDensityError("mc_repeated: fewer than two runs produced a defined estimate");
  const double k = static_cast<double>(s.runs.size());
  s.rmse = std::sqrt(sq.value() / k);
  s.mean_estimate = est.value() / k;
  return s;
}

}  // namespace qmcis
