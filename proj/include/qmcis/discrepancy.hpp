#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qmcis/errors.hpp"
#include "qmcis/point_set.hpp"
#include "qmcis/summation.hpp"

namespace qmcis {

inline constexpr std::uint64_t default_corner_budget = 100'000'000;

enum class DiscrepancyMode { exact, lower_bound };

inline std::string to_string(DiscrepancyMode m) {
  return m == DiscrepancyMode::exact ? "exact" : "lower-bound";
}

/// Which limit of the anchored box a corner value refers to: `open` is
/// [0,y) itself, `closed` is the limit of [0,y+eps) as eps -> 0, i.e. [0,y].
enum class BoxSide { open, closed };

struct DiscrepancyResult {
  double value = 0.0;
  DiscrepancyMode mode = DiscrepancyMode::exact;
  std::vector<double> witness;  // upper corner attaining (or best found for) the sup
  BoxSide witness_side = BoxSide::open;
  std::uint64_t boxes_evaluated = 0;
  double oracle_eps = 0.0;
};

/// Weights summing to one. Entries may be negative; only the sum is checked.
class WeightVector {
 public:
  static constexpr double sum_tolerance = 1e-12;

  explicit WeightVector(std::vector<double> weights) : weights_(std::move(weights)) {
    if (weights_.empty()) throw std::invalid_argument("WeightVector: empty");
    CompensatedSum s;
    for (double w : weights_) {
      if (!std::isfinite(w)) throw std::invalid_argument("WeightVector: non-finite weight");
      s += w;
    }
    if (std::abs(s.value() - 1.0) > sum_tolerance)
      throw std::invalid_argument("WeightVector: weights must sum to 1");
  }

  static WeightVector uniform(std::size_t n) {
    return WeightVector(std::vector<double>(n, 1.0 / static_cast<double>(n)));
  }

  std::size_t size() const noexcept { return weights_.size(); }
  double operator[](std::size_t i) const noexcept { return weights_[i]; }
  std::span<const double> values() const noexcept { return weights_; }

 private:
  std::vector<double> weights_;
};

/// Anything that can report pi([0,z)) for an upper corner z, together with
/// the absolute accuracy of those values.
template <class O>
concept BoxMeasure = requires(const O& o, std::span<const double> z) {
  { o.measure(z) } -> std::convertible_to<double>;
  { o.accuracy() } -> std::convertible_to<double>;
};

/// A box measure that can also integrate over a single grid cell [lo,hi).
/// The weighted discrepancy sweep then accumulates cell masses instead of
/// querying every corner independently.
template <class O>
concept CellMeasure = BoxMeasure<O> && requires(const O& o, std::span<const double> lo,
                                                std::span<const double> hi) {
  { o.cell_mass(lo, hi) } -> std::convertible_to<double>;
};

/// Left-to-right product of the corner coordinates.
inline double box_volume(std::span<const double> y) noexcept {
  double v = 1.0;
  for (double c : y) v *= c;
  return v;
}

/// Lebesgue measure on [0,1]^d.
struct LebesgueMeasure {
  double measure(std::span<const double> z) const noexcept { return box_volume(z); }
  double accuracy() const noexcept { return 0.0; }
};

/// Type-erased oracle, for measures assembled at run time.
struct FunctionMeasure {
  std::function<double(std::span<const double>)> fn;
  double eps = 0.0;
  double measure(std::span<const double> z) const { return fn(z); }
  double accuracy() const noexcept { return eps; }
};

namespace detail {

/// Per-axis sorted unique coordinates plus the sentinel 1, and each point's
/// rank on every axis.
struct CriticalGrid {
  std::size_t dim = 0;
  std::vector<std::vector<double>> values;
  std::vector<std::vector<std::uint32_t>> rank;  // rank[axis][point]

  std::uint64_t corner_count() const {
    std::uint64_t total = 1;
    for (const auto& v : values) {
      if (total > std::numeric_limits<std::uint64_t>::max() / v.size())
        return std::numeric_limits<std::uint64_t>::max();
      total *= v.size();
    }
    return total;
  }
};

inline CriticalGrid build_grid(const PointSet& pts) {
  CriticalGrid g;
  g.dim = pts.dim();
  const std::size_t n = pts.size();
  g.values.resize(g.dim);
  g.rank.resize(g.dim);
  for (std::size_t j = 0; j < g.dim; ++j) {
    auto& v = g.values[j];
    v.reserve(n + 1);
    for (std::size_t i = 0; i < n; ++i) v.push_back(pts(i, j));
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    v.push_back(1.0);
    auto& r = g.rank[j];
    r.resize(n);
    for (std::size_t i = 0; i < n; ++i)
      r[i] = static_cast<std::uint32_t>(std::lower_bound(v.begin(), v.end(), pts(i, j)) - v.begin());
  }
  return g;
}

/// Mixed-radix layout of axes 1..d-1 (the "rest" of a corner once axis 0 is
/// fixed). Axis d-1 varies fastest.
struct RestLayout {
  std::vector<std::size_t> extent;
  std::vector<std::size_t> stride;
  std::size_t size = 1;

  explicit RestLayout(const CriticalGrid& g) {
    const std::size_t r = g.dim - 1;
    extent.resize(r);
    stride.resize(r);
    for (std::size_t a = r; a-- > 0;) {
      extent[a] = g.values[a + 1].size();
      stride[a] = size;
      size *= extent[a];
    }
  }

  std::size_t flat(std::span<const std::uint32_t> idx) const {
    std::size_t f = 0;
    for (std::size_t a = 0; a < extent.size(); ++a) f += idx[a] * stride[a];
    return f;
  }

  /// Offset from a cell to the cell one step lower on every rest axis.
  std::size_t diagonal() const {
    return std::accumulate(stride.begin(), stride.end(), std::size_t{0});
  }

  /// In-place inclusive prefix sum along every rest axis.
  template <class T>
  void prefix_sum(std::vector<T>& a) const {
    for (std::size_t ax = 0; ax < extent.size(); ++ax) {
      const std::size_t s = stride[ax];
      const std::size_t block = s * extent[ax];
      for (std::size_t base = 0; base < size; base += block)
        for (std::size_t k = 1; k < extent[ax]; ++k)
          for (std::size_t t = 0; t < s; ++t) a[base + k * s + t] += a[base + (k - 1) * s + t];
    }
  }
};

/// Odometer over the rest axes, carrying corner coordinates along.
struct RestCursor {
  std::vector<std::uint32_t> idx;

  explicit RestCursor(const RestLayout& layout) : idx(layout.extent.size(), 0) {}

  bool all_positive() const {
    return std::all_of(idx.begin(), idx.end(), [](std::uint32_t k) { return k > 0; });
  }

  void advance(const RestLayout& layout) {
    for (std::size_t a = idx.size(); a-- > 0;) {
      if (++idx[a] < layout.extent[a]) return;
      idx[a] = 0;
    }
  }
};

/// Visits every corner of the critical grid in lexicographic order, handing
/// the visitor the point mass strictly below the corner (open box) and at or
/// below it (closed box).
///
/// Visitor signature: void(std::uint32_t k0, const RestCursor&, std::span<const double> y,
///                         T open_mass, T closed_mass)
template <class T, class Visitor>
void sweep_corners(const CriticalGrid& g, std::span<const T> mass, Visitor&& visit) {
  const RestLayout layout(g);
  const std::size_t n = mass.size();
  const std::size_t m0 = g.values[0].size();

  std::vector<std::vector<std::size_t>> slab_points(m0);
  for (std::size_t i = 0; i < n; ++i) slab_points[g.rank[0][i]].push_back(i);

  std::vector<T> prev(layout.size, T{});
  std::vector<T> cur(layout.size, T{});
  std::vector<T> slab(layout.size, T{});
  std::vector<std::uint32_t> rest_rank(g.dim - 1);
  std::vector<double> y(g.dim);
  const std::size_t diag = layout.diagonal();

  for (std::uint32_t k0 = 0; k0 < m0; ++k0) {
    std::fill(slab.begin(), slab.end(), T{});
    for (std::size_t i : slab_points[k0]) {
      for (std::size_t a = 0; a + 1 < g.dim; ++a) rest_rank[a] = g.rank[a + 1][i];
      slab[layout.flat(rest_rank)] += mass[i];
    }
    layout.prefix_sum(slab);
    for (std::size_t f = 0; f < layout.size; ++f) cur[f] = prev[f] + slab[f];

    y[0] = g.values[0][k0];
    RestCursor cursor(layout);
    for (std::size_t f = 0; f < layout.size; ++f) {
      for (std::size_t a = 0; a + 1 < g.dim; ++a) y[a + 1] = g.values[a + 1][cursor.idx[a]];
      const T open = (k0 > 0 && cursor.all_positive()) ? prev[f - diag] : T{};
      visit(k0, cursor, std::span<const double>(y), open, cur[f]);
      cursor.advance(layout);
    }
    std::swap(prev, cur);
  }
}

inline void check_budget(const CriticalGrid& g, std::uint64_t budget) {
  const std::uint64_t corners = g.corner_count();
  if (corners > budget)
    throw BudgetExceededError("critical grid has " + std::to_string(corners) +
                              " corners, over the budget of " + std::to_string(budget) +
                              "; use the lower-bound estimator or raise the budget");
}

struct BestCorner {
  double value = -1.0;
  std::vector<double> corner;
  BoxSide side = BoxSide::open;

  void offer(double v, std::span<const double> y, BoxSide s) {
    if (v > value) {
      value = v;
      corner.assign(y.begin(), y.end());
      side = s;
    }
  }
};

}  // namespace detail

/// Evaluates |(1/n) #{x_i in box} - vol(box)| for one corner, by direct count.
inline double classical_corner_value(const PointSet& pts, std::span<const double> y, BoxSide side) {
  if (y.size() != pts.dim()) throw std::invalid_argument("corner dimension mismatch");
  std::int64_t count = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    bool inside = true;
    for (std::size_t j = 0; j < pts.dim() && inside; ++j)
      inside = side == BoxSide::open ? pts(i, j) < y[j] : pts(i, j) <= y[j];
    count += inside ? 1 : 0;
  }
  return std::abs(static_cast<double>(count) / static_cast<double>(pts.size()) - box_volume(y));
}

/// Evaluates |sum_i w_i 1{x_i in box} - pi(box)| for one corner.
template <BoxMeasure Oracle>
double weighted_corner_value(const PointSet& pts, const WeightVector& w, const Oracle& oracle,
                             std::span<const double> y, BoxSide side) {
  CompensatedSum s;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    bool inside = true;
    for (std::size_t j = 0; j < pts.dim() && inside; ++j)
      inside = side == BoxSide::open ? pts(i, j) < y[j] : pts(i, j) <= y[j];
    if (inside) s += w[i];
  }
  return std::abs(s.value() - static_cast<double>(oracle.measure(y)));
}

/**
 * Exact star-discrepancy by enumerating every corner of the critical grid.
 *
 * Candidate upper corners are the per-axis sorted unique coordinates plus 1.
 * At each corner both the open count (points strictly inside [0,y)) and the
 * closed count (points in [0,y]) are compared against the volume, which
 * captures the one-sided limits of the supremum. Ties go to the
 * lexicographically smallest corner.
 */
inline DiscrepancyResult star_discrepancy_exact(const PointSet& pts,
                                                std::uint64_t budget = default_corner_budget) {
  const auto grid = detail::build_grid(pts);
  detail::check_budget(grid, budget);
  const std::vector<std::int64_t> ones(pts.size(), 1);
  const double n = static_cast<double>(pts.size());
  detail::BestCorner best;
  std::uint64_t evaluated = 0;
  detail::sweep_corners<std::int64_t>(
      grid, ones,
      [&](std::uint32_t, const detail::RestCursor&, std::span<const double> y, std::int64_t open,
          std::int64_t closed) {
        const double vol = box_volume(y);
        best.offer(std::abs(static_cast<double>(open) / n - vol), y, BoxSide::open);
        best.offer(std::abs(static_cast<double>(closed) / n - vol), y, BoxSide::closed);
        ++evaluated;
      });
  return {best.value, DiscrepancyMode::exact, std::move(best.corner), best.side, evaluated, 0.0};
}

/**
 * Certified lower bound on the star-discrepancy for grids too large to
 * enumerate.
 *
 * Draws `effort` random corners from the critical grid, then improves each by
 * coordinate-wise sweeps: with all other coordinates fixed, every critical
 * value of one axis is scanned in a single sorted pass. Candidates are drawn
 * sequentially from one generator, so a larger effort with the same seed
 * visits a superset of corners.
 */
inline DiscrepancyResult star_discrepancy_lower_bound(const PointSet& pts, std::uint64_t effort,
                                                      std::uint64_t seed) {
  if (effort == 0) throw std::invalid_argument("star_discrepancy_lower_bound: effort must be >= 1");
  const auto grid = detail::build_grid(pts);
  const std::size_t d = pts.dim();
  const std::size_t n = pts.size();
  const double nd = static_cast<double>(n);

  // Point indices sorted by each axis, computed once.
  std::vector<std::vector<std::size_t>> by_axis(d);
  for (std::size_t j = 0; j < d; ++j) {
    auto& order = by_axis[j];
    order.resize(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return pts(a, j) < pts(b, j); });
  }

  std::mt19937_64 gen(seed);
  detail::BestCorner best;
  std::uint64_t evaluated = 0;
  std::vector<std::uint32_t> idx(d);
  std::vector<double> y(d);

  // Best value over all critical values of `axis`, other coordinates fixed.
  // Updates idx/side in place when it finds an improvement.
  auto line_search = [&](std::size_t axis, double& current, BoxSide& side) {
    const auto& vals = grid.values[axis];
    bool improved = false;
    for (BoxSide s : {BoxSide::open, BoxSide::closed}) {
      std::vector<double> inside;  // axis coordinates of points inside the other-axis box
      for (std::size_t i : by_axis[axis]) {
        bool in = true;
        for (std::size_t j = 0; j < d && in; ++j)
          if (j != axis) in = s == BoxSide::open ? pts(i, j) < y[j] : pts(i, j) <= y[j];
        if (in) inside.push_back(pts(i, axis));
      }
      std::size_t below = 0;
      for (std::uint32_t k = 0; k < vals.size(); ++k) {
        const double c = vals[k];
        if (s == BoxSide::open)
          while (below < inside.size() && inside[below] < c) ++below;
        else
          while (below < inside.size() && inside[below] <= c) ++below;
        ++evaluated;
        // Volume with the axis coordinate replaced, multiplied in axis order
        // so that it matches box_volume bit for bit.
        double vol = 1.0;
        for (std::size_t j = 0; j < d; ++j) vol *= j == axis ? c : y[j];
        const double v = std::abs(static_cast<double>(below) / nd - vol);
        if (v > current) {
          current = v;
          side = s;
          idx[axis] = k;
          improved = true;
        }
      }
    }
    y[axis] = vals[idx[axis]];
    return improved;
  };

  for (std::uint64_t e = 0; e < effort; ++e) {
    for (std::size_t j = 0; j < d; ++j) {
      std::uniform_int_distribution<std::uint32_t> pick(0, static_cast<std::uint32_t>(grid.values[j].size() - 1));
      idx[j] = pick(gen);
      y[j] = grid.values[j][idx[j]];
    }
    BoxSide side = BoxSide::open;
    double current = classical_corner_value(pts, y, BoxSide::open);
    const double closed = classical_corner_value(pts, y, BoxSide::closed);
    evaluated += 2;
    if (closed > current) {
      current = closed;
      side = BoxSide::closed;
    }
    for (std::size_t round = 0; round < 3 * d; ++round) {
      bool any = false;
      for (std::size_t j = 0; j < d; ++j) any = line_search(j, current, side) || any;
      if (!any) break;
    }
    best.offer(current, y, side);
  }
  return {best.value, DiscrepancyMode::lower_bound, std::move(best.corner), best.side, evaluated, 0.0};
}

/**
 * Weighted star-discrepancy sup_y |sum_i w_i 1{x_i in [0,y)} - pi([0,y))|
 * over the critical grid.
 *
 * On each grid cell the weighted count is constant and pi is monotone, so the
 * supremum is reached at a cell's upper corner (open count) or approached at
 * its lower corner (closed count); both are checked at every corner. The
 * result is exact up to the oracle's accuracy, which is carried in
 * `oracle_eps`.
 */
template <BoxMeasure Oracle>
DiscrepancyResult weighted_star_discrepancy(const PointSet& pts, const WeightVector& w,
                                            const Oracle& oracle,
                                            std::uint64_t budget = default_corner_budget) {
  if (w.size() != pts.size())
    throw std::invalid_argument("weighted_star_discrepancy: point and weight counts differ");
  const auto grid = detail::build_grid(pts);
  detail::check_budget(grid, budget);
  const detail::RestLayout layout(grid);
  const std::size_t d = pts.dim();
  double eps = static_cast<double>(oracle.accuracy());

  // pi at the corners of the previous and current slab, for the monotonicity
  // check along axis 0 and (in cell mode) for accumulation.
  std::vector<double> pi_prev(layout.size, 0.0);
  std::vector<double> pi_cur(layout.size, 0.0);
  std::vector<double> cells(layout.size, 0.0);
  std::uint32_t current_slab = std::numeric_limits<std::uint32_t>::max();
  std::vector<double> lo(d), hi(d);

  if constexpr (CellMeasure<Oracle>) {
    // Summing up to corner_count cell masses adds rounding on top of the
    // per-cell accuracy.
    eps += 4.0 * std::numeric_limits<double>::epsilon() * static_cast<double>(grid.corner_count());
  }

  auto fill_slab = [&](std::uint32_t k0) {
    std::swap(pi_prev, pi_cur);
    if constexpr (CellMeasure<Oracle>) {
      lo[0] = k0 == 0 ? 0.0 : grid.values[0][k0 - 1];
      hi[0] = grid.values[0][k0];
      detail::RestCursor c(layout);
      for (std::size_t f = 0; f < layout.size; ++f) {
        for (std::size_t a = 0; a + 1 < d; ++a) {
          const std::uint32_t k = c.idx[a];
          lo[a + 1] = k == 0 ? 0.0 : grid.values[a + 1][k - 1];
          hi[a + 1] = grid.values[a + 1][k];
        }
        cells[f] = static_cast<double>(oracle.cell_mass(lo, hi));
        c.advance(layout);
      }
      layout.prefix_sum(cells);
      for (std::size_t f = 0; f < layout.size; ++f) pi_cur[f] = pi_prev[f] + cells[f];
    }
    current_slab = k0;
  };

  detail::BestCorner best;
  std::uint64_t evaluated = 0;
  std::size_t flat = 0;
  detail::sweep_corners<double>(
      grid, w.values(),
      [&](std::uint32_t k0, const detail::RestCursor& cursor, std::span<const double> y, double open,
          double closed) {
        if (k0 != current_slab) {
          fill_slab(k0);
          flat = 0;
        }
        double pi;
        if constexpr (CellMeasure<Oracle>) {
          pi = pi_cur[flat];
        } else {
          pi = static_cast<double>(oracle.measure(y));
          pi_cur[flat] = pi;
        }
        if (!std::isfinite(pi) || pi < -eps || pi > 1.0 + eps)
          throw OracleError("box-measure oracle returned " + std::to_string(pi) + " outside [0, 1+eps]");
        if (k0 > 0 && pi < pi_prev[flat] - 2.0 * eps - 1e-15)
          throw OracleError("box-measure oracle is not monotone along axis 0");
        (void)cursor;
        best.offer(std::abs(open - pi), y, BoxSide::open);
        best.offer(std::abs(closed - pi), y, BoxSide::closed);
        ++evaluated;
        ++flat;
      });
  return {best.value, DiscrepancyMode::exact, std::move(best.corner), best.side, evaluated, eps};
}

/// Self-normalized importance weights w_i = u(x_i) / sum_j u(x_j).
template <class Density>
WeightVector self_normalized_weights(const PointSet& pts, Density&& u) {
  std::vector<double> w(pts.size());
  CompensatedSum total;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double ui = static_cast<double>(u(pts.point(i)));
    if (!std::isfinite(ui) || ui < 0.0)
      throw std::invalid_argument("self_normalized_weights: density must be finite and >= 0");
    w[i] = ui;
    total += ui;
  }
  const double s = total.value();
  if (!(s > 0.0))
    throw ZeroDensityError("self_normalized_weights: density vanishes at every point");
  for (double& x : w) x /= s;
  return WeightVector(std::move(w));
}

}  // namespace qmcis
