#pragma once

#include <array>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "qmcis/point_set.hpp"
#include "qmcis/sobol_directions.hpp"

namespace qmcis {

inline constexpr std::size_t max_sequence_dimension = 16;

namespace detail {

inline constexpr std::array<std::uint64_t, max_sequence_dimension> primes{
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};

inline void check_sequence_args(std::size_t n, std::size_t d, const char* who) {
  if (n == 0) throw std::invalid_argument(std::string(who) + ": n must be >= 1");
  if (d == 0 || d > max_sequence_dimension)
    throw std::invalid_argument(std::string(who) + ": dimension must be in [1, 16]");
}

}  // namespace detail

/// Radical inverse of `index` in `base`, computed as an exact integer ratio
/// and rounded once.
inline double radical_inverse(std::uint64_t index, std::uint64_t base) {
  std::uint64_t reversed = 0;
  std::uint64_t denom = 1;
  while (index > 0) {
    reversed = reversed * base + index % base;
    denom *= base;
    index /= base;
  }
  return static_cast<double>(reversed) / static_cast<double>(denom);
}

/// Halton points h_1..h_n: coordinate j is the radical inverse of i in the
/// j-th prime. Index 0 (the origin) is skipped.
inline PointSet halton(std::size_t n, std::size_t d) {
  detail::check_sequence_args(n, d, "halton");
  std::vector<double> coords(n * d);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j)
      coords[i * d + j] = radical_inverse(i + 1, detail::primes[j]);
  return PointSet(d, std::move(coords), {SourceKind::halton, 0, "primes"});
}

/// Direction numbers v_1..v_32 (scaled to 32 bits) for Sobol coordinate `dim`
/// (0-based).
inline std::array<std::uint32_t, 32> sobol_direction_numbers(std::size_t dim) {
  std::array<std::uint32_t, 32> v{};
  if (dim == 0) {
    for (unsigned k = 0; k < 32; ++k) v[k] = std::uint32_t{1} << (31 - k);
    return v;
  }
  const auto& e = sobol_table::entries.at(dim - 1);
  const unsigned s = e.degree;
  for (unsigned k = 0; k < s; ++k) v[k] = e.m[k] << (31 - k);
  for (unsigned k = s; k < 32; ++k) {
    std::uint32_t next = v[k - s] ^ (v[k - s] >> s);
    for (unsigned j = 1; j < s; ++j)
      if ((e.coefficients >> (s - 1 - j)) & 1u) next ^= v[k - j];
    v[k] = next;
  }
  return v;
}

/// Gray-code Sobol points with indices 1..n (the origin is skipped).
inline PointSet sobol(std::size_t n, std::size_t d) {
  detail::check_sequence_args(n, d, "sobol");
  if (n > (std::size_t{1} << 31)) throw std::invalid_argument("sobol: n must be <= 2^31");
  std::vector<std::array<std::uint32_t, 32>> dirs(d);
  for (std::size_t j = 0; j < d; ++j) dirs[j] = sobol_direction_numbers(j);

  constexpr double scale = 1.0 / 4294967296.0;
  std::vector<double> coords(n * d);
  std::vector<std::uint32_t> state(d, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    // X_i = X_{i-1} xor v_c, c = position of the lowest set bit of i.
    const unsigned c = static_cast<unsigned>(std::countr_zero(static_cast<std::uint64_t>(i)));
    for (std::size_t j = 0; j < d; ++j) {
      state[j] ^= dirs[j][c];
      coords[(i - 1) * d + j] = static_cast<double>(state[j]) * scale;
    }
  }
  return PointSet(d, std::move(coords), {SourceKind::sobol, 0, sobol_table::id});
}

/// 53-bit uniform double in [0,1) from one 64-bit draw. Written out so that the
/// mapping is identical across standard libraries.
inline double to_unit_interval(std::uint64_t bits) noexcept {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

/// Pseudo-random points from std::mt19937_64 seeded with `seed`.
inline PointSet uniform_random(std::size_t n, std::size_t d, std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("uniform_random: n must be >= 1");
  if (d == 0) throw std::invalid_argument("uniform_random: dimension must be >= 1");
  std::mt19937_64 gen(seed);
  std::vector<double> coords(n * d);
  for (double& c : coords) c = to_unit_interval(gen());
  return PointSet(d, std::move(coords), {SourceKind::uniform_prng, seed, "mt19937_64"});
}

}  // namespace qmcis
