/*!
  \file matcher.hpp
  \brief Boolean matching of cut functions against library cells
*/

#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "cell_library.hpp"
#include "truth_table.hpp"

namespace celltune {

/*! \brief One way to realize a cut function with a cell.
 *
 * Cell pin i connects to cut leaf leaf_binding[i]. Permuting the cell's
 * table by the binding reproduces the cut table, complemented when
 * output_inverted is set; the inversion costs an extra inverter.
 */
struct cut_match {
  std::uint32_t cell = 0;
  tt_perm leaf_binding{};
  bool output_inverted = false;
};

/*! \brief Permutation-equivalence match index over a sub-library.
 *
 * Cells are indexed by the canonical form of their function and, when the
 * sub-library can realize an inversion, of its complement. Cell functions
 * depend on every pin and cut tables on every leaf, so only cells of the
 * cut's exact arity can match.
 */
class cut_matcher {
public:
  explicit cut_matcher(const sub_library& sub) : lib_(&sub.parent()) {
    for (std::uint32_t idx : sub.indices()) {
      const cell& c = lib_->at(idx);
      if (c.is_inverter() && (!inverter_ || c.area < lib_->at(*inverter_).area)) {
        inverter_ = idx;
      }
    }
    for (std::uint32_t idx : sub.indices()) {
      const cell& c = lib_->at(idx);
      const auto [canon, perm] = tt_canonicalize(c.function, c.num_inputs);
      index_[key(c.num_inputs, canon)].push_back({idx, perm, false});
      if (inverter_) {
        const truth_table neg = ~c.function & tt_mask(c.num_inputs);
        const auto [canon_n, perm_n] = tt_canonicalize(neg, c.num_inputs);
        index_[key(c.num_inputs, canon_n)].push_back({idx, perm_n, true});
      }
    }
  }

  //! cheapest inverter in the sub-library
  std::optional<std::uint32_t> inverter_cell() const { return inverter_; }

  const cell_library& library() const { return *lib_; }

  std::vector<cut_match> match(truth_table table, unsigned num_vars) const {
    std::vector<cut_match> out;
    const auto [canon, p1] = tt_canonicalize(table, num_vars);
    const auto it = index_.find(key(num_vars, canon));
    if (it == index_.end()) {
      return out;
    }
    tt_perm p1_inv{};
    for (unsigned i = 0; i < num_vars; ++i) {
      p1_inv[p1[i]] = static_cast<std::uint8_t>(i);
    }
    out.reserve(it->second.size());
    for (const entry& e : it->second) {
      // both permutations reach the canon, so p1_inv after e.perm reaches the cut table
      cut_match m;
      m.cell = e.cell;
      m.output_inverted = e.inverted;
      for (unsigned i = 0; i < num_vars; ++i) {
        m.leaf_binding[i] = p1_inv[e.perm[i]];
      }
      out.push_back(m);
    }
    return out;
  }

private:
  struct entry {
    std::uint32_t cell;
    tt_perm perm;
    bool inverted;
  };

  static std::uint32_t key(unsigned num_vars, truth_table canon) {
    return (static_cast<std::uint32_t>(num_vars) << 16) | canon;
  }

  const cell_library* lib_;
  std::optional<std::uint32_t> inverter_;
  std::unordered_map<std::uint32_t, std::vector<entry>> index_;
};

} // namespace celltune
