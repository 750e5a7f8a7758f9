#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qmcis {

enum class SourceKind { halton, sobol, uniform_prng, explicit_points };

inline std::string to_string(SourceKind kind) {
  switch (kind) {
    case SourceKind::halton: return "halton";
    case SourceKind::sobol: return "sobol";
    case SourceKind::uniform_prng: return "uniform";
    case SourceKind::explicit_points: return "explicit";
  }
  return "unknown";
}

/// Where a point set came from, enough to regenerate it bit for bit.
struct PointSource {
  SourceKind kind = SourceKind::explicit_points;
  std::uint64_t seed = 0;  // uniform_prng only
  std::string table;       // sobol direction-number table id, halton base rule
};

/**
 * An immutable, ordered set of n points in [0,1)^d stored row-major.
 *
 * Construction validates the shape and the coordinate range, so every
 * PointSet handed to the discrepancy or estimator code is well formed.
 */
class PointSet {
 public:
  PointSet(std::size_t dim, std::vector<double> coords, PointSource source = {})
      : dim_(dim), coords_(std::move(coords)), source_(std::move(source)) {
    if (dim_ == 0) throw std::invalid_argument("PointSet: dimension must be positive");
    if (coords_.empty() || coords_.size() % dim_ != 0)
      throw std::invalid_argument("PointSet: need n >= 1 points with exactly d coordinates each");
    for (double c : coords_) {
      if (!std::isfinite(c) || c < 0.0 || c >= 1.0)
        throw std::invalid_argument("PointSet: coordinates must lie in [0,1)");
    }
  }

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return coords_.size() / dim_; }

  std::span<const double> point(std::size_t i) const noexcept {
    return {coords_.data() + i * dim_, dim_};
  }
  double operator()(std::size_t i, std::size_t j) const noexcept { return coords_[i * dim_ + j]; }

  std::span<const double> coords() const noexcept { return coords_; }
  const PointSource& source() const noexcept { return source_; }

  /// Same points with rows reordered by `order` (a permutation of 0..n-1).
  PointSet permuted(std::span<const std::size_t> order) const {
    if (order.size() != size()) throw std::invalid_argument("PointSet::permuted: bad permutation size");
    std::vector<double> out;
    out.reserve(coords_.size());
    for (std::size_t i : order) {
      auto p = point(i);
      out.insert(out.end(), p.begin(), p.end());
    }
    return PointSet(dim_, std::move(out), source_);
  }

  /// First `n` points, with the same provenance.
  PointSet prefix(std::size_t n) const {
    if (n == 0 || n > size()) throw std::invalid_argument("PointSet::prefix: bad count");
    return PointSet(dim_, std::vector<double>(coords_.begin(), coords_.begin() + n * dim_), source_);
  }

  friend bool operator==(const PointSet& a, const PointSet& b) {
    return a.dim_ == b.dim_ && a.coords_ == b.coords_;
  }

 private:
  std::size_t dim_;
  std::vector<double> coords_;
  PointSource source_;
};

}  // namespace qmcis
