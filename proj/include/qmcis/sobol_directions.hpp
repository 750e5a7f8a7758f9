#pragma once

#include <array>
#include <cstdint>

// Initial direction numbers for dimensions 2..16, taken from the Joe & Kuo
// "new-joe-kuo-6.21201" table. Dimension 1 is the van der Corput sequence and
// needs no entry.

namespace qmcis::sobol_table {

inline constexpr const char* id = "new-joe-kuo-6.21201/d16";
inline constexpr unsigned max_dimension = 16;

struct Entry {
  unsigned degree;                  // s: degree of the primitive polynomial
  unsigned coefficients;            // a: interior polynomial coefficients as bits
  std::array<std::uint32_t, 6> m;  // m_1..m_s (odd, m_k < 2^k)
};

inline constexpr std::array<Entry, 15> entries{{
    {1, 0, {1}},
    {2, 1, {1, 3}},
    {3, 1, {1, 3, 1}},
    {3, 2, {1, 1, 1}},
    {4, 1, {1, 1, 3, 3}},
    {4, 4, {1, 3, 5, 13}},
    {5, 2, {1, 1, 5, 5, 17}},
    {5, 4, {1, 1, 5, 5, 5}},
    {5, 7, {1, 1, 7, 11, 19}},
    {5, 11, {1, 1, 5, 1, 1}},
    {5, 13, {1, 1, 1, 3, 11}},
    {5, 14, {1, 3, 5, 5, 31}},
    {6, 1, {1, 3, 3, 9, 7, 49}},
    {6, 13, {1, 1, 1, 15, 21, 21}},
    {6, 16, {1, 3, 1, 13, 27, 49}},
}};

}  // namespace qmcis::sobol_table
