/*!
  \file truth_table.hpp
  \brief Truth tables over at most four variables
*/

#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <numeric>
#include <utility>

namespace celltune {

/*! \brief Function of up to four variables; bit k is the output for input
 * pattern k, variable i contributing bit i of the pattern. */
using truth_table = std::uint16_t;

inline constexpr unsigned max_cut_size = 4;

constexpr unsigned tt_num_patterns(unsigned num_vars) { return 1u << num_vars; }

constexpr truth_table tt_mask(unsigned num_vars) {
  return static_cast<truth_table>((1ul << tt_num_patterns(num_vars)) - 1ul);
}

constexpr bool tt_bit(truth_table t, unsigned pattern) {
  return (t >> pattern) & 1u;
}

//! single-variable identity function
inline constexpr truth_table tt_identity = 0b10;
//! single-variable complement function
inline constexpr truth_table tt_negation = 0b01;

//! table of variable `var` viewed over `num_vars` variables
constexpr truth_table tt_var(unsigned var, unsigned num_vars) {
  truth_table t = 0;
  for (unsigned p = 0; p < tt_num_patterns(num_vars); ++p) {
    if ((p >> var) & 1u) {
      t |= static_cast<truth_table>(1u << p);
    }
  }
  return t;
}

using tt_perm = std::array<std::uint8_t, max_cut_size>;

/*! \brief Applies an input permutation.
 *
 * Variable i of `t` is fed from position perm[i] of the result, i.e.
 * result(q) = t(p) with p_i = q_{perm[i]}.
 */
inline truth_table tt_permute(truth_table t, unsigned num_vars, const tt_perm& perm) {
  truth_table out = 0;
  for (unsigned q = 0; q < tt_num_patterns(num_vars); ++q) {
    unsigned p = 0;
    for (unsigned i = 0; i < num_vars; ++i) {
      p |= ((q >> perm[i]) & 1u) << i;
    }
    if (tt_bit(t, p)) {
      out |= static_cast<truth_table>(1u << q);
    }
  }
  return out;
}

/*! \brief Smallest table over all input permutations, with the permutation
 * realizing it. Ties resolve to the lexicographically first permutation. */
inline std::pair<truth_table, tt_perm> tt_canonicalize(truth_table t, unsigned num_vars) {
  tt_perm perm{};
  std::iota(perm.begin(), perm.begin() + num_vars, std::uint8_t(0));
  tt_perm best_perm = perm;
  truth_table best = tt_permute(t, num_vars, perm);
  while (std::next_permutation(perm.begin(), perm.begin() + num_vars)) {
    const truth_table cand = tt_permute(t, num_vars, perm);
    if (cand < best) {
      best = cand;
      best_perm = perm;
    }
  }
  return {best, best_perm};
}

inline bool tt_depends_on(truth_table t, unsigned num_vars, unsigned var) {
  for (unsigned p = 0; p < tt_num_patterns(num_vars); ++p) {
    if (!((p >> var) & 1u) && tt_bit(t, p) != tt_bit(t, p | (1u << var))) {
      return true;
    }
  }
  return false;
}

//! bitmask of variables the function depends on
inline unsigned tt_support_mask(truth_table t, unsigned num_vars) {
  unsigned mask = 0;
  for (unsigned v = 0; v < num_vars; ++v) {
    if (tt_depends_on(t, num_vars, v)) {
      mask |= 1u << v;
    }
  }
  return mask;
}

struct tt_reduction {
  truth_table table;
  unsigned num_vars;
  //! kept[i] = original position of the i-th surviving variable
  std::array<std::uint8_t, max_cut_size> kept;
};

/*! \brief Projects out non-support variables, keeping the survivors in order. */
inline tt_reduction tt_reduce_support(truth_table t, unsigned num_vars) {
  tt_reduction r{0, 0, {}};
  const unsigned support = tt_support_mask(t, num_vars);
  for (unsigned v = 0; v < num_vars; ++v) {
    if (support & (1u << v)) {
      r.kept[r.num_vars++] = static_cast<std::uint8_t>(v);
    }
  }
  for (unsigned q = 0; q < tt_num_patterns(r.num_vars); ++q) {
    unsigned p = 0;
    for (unsigned i = 0; i < r.num_vars; ++i) {
      p |= ((q >> i) & 1u) << r.kept[i];
    }
    if (tt_bit(t, p)) {
      r.table |= static_cast<truth_table>(1u << q);
    }
  }
  return r;
}

} // namespace celltune
