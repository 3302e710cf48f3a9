/*!
  \file cuts.hpp
  \brief Priority k-feasible cut enumeration over an AIG
*/

#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <vector>

#include "aig.hpp"
#include "truth_table.hpp"

namespace celltune {

/*! \brief Cut of an AIG node.
 *
 * Leaves are variable indices, sorted ascending. `table` is the node
 * function over the leaves in that order; it depends on every leaf because
 * enumeration projects out vacuous ones, so a cut may have fewer leaves than
 * the cones it was merged from, down to none when the node is constant over
 * the cone.
 */
struct cut {
  std::array<std::uint32_t, max_cut_size> leaves{};
  std::uint8_t num_leaves = 0;
  truth_table table = 0;

  friend bool operator==(const cut& a, const cut& b) {
    if (a.num_leaves != b.num_leaves || a.table != b.table) return false;
    return std::equal(a.leaves.begin(), a.leaves.begin() + a.num_leaves, b.leaves.begin());
  }
};

namespace detail {

//! sorted union of the leaf sets; false when it needs more than four leaves
inline bool merge_leaves(const cut& a, const cut& b, cut& out) {
  out.num_leaves = 0;
  std::uint8_t i = 0, j = 0;
  while (i < a.num_leaves || j < b.num_leaves) {
    std::uint32_t next;
    if (j == b.num_leaves || (i < a.num_leaves && a.leaves[i] < b.leaves[j])) {
      next = a.leaves[i++];
    } else if (i == a.num_leaves || b.leaves[j] < a.leaves[i]) {
      next = b.leaves[j++];
    } else {
      next = a.leaves[i];
      ++i, ++j;
    }
    if (out.num_leaves == max_cut_size) return false;
    out.leaves[out.num_leaves++] = next;
  }
  return true;
}

//! re-expresses a cut table over the merged leaf set
inline truth_table spread_table(const cut& c, const cut& merged) {
  std::array<std::uint8_t, max_cut_size> pos{};
  for (std::uint8_t i = 0; i < c.num_leaves; ++i) {
    pos[i] = static_cast<std::uint8_t>(
        std::find(merged.leaves.begin(), merged.leaves.begin() + merged.num_leaves,
                  c.leaves[i]) -
        merged.leaves.begin());
  }
  truth_table out = 0;
  for (unsigned q = 0; q < tt_num_patterns(merged.num_leaves); ++q) {
    unsigned p = 0;
    for (std::uint8_t i = 0; i < c.num_leaves; ++i) {
      p |= ((q >> pos[i]) & 1u) << i;
    }
    if (tt_bit(c.table, p)) {
      out |= static_cast<truth_table>(1u << q);
    }
  }
  return out;
}

} // namespace detail

/*! \brief Enumerates cuts for every variable of `g`.
 *
 * The result is indexed by variable; entry 0 (the constant) is empty and
 * each input or AND variable starts with its trivial cut {var}. AND
 * variables additionally carry up to `cut_limit` cuts merged from fanin
 * cut pairs, ranked by fewer leaves, then by the smallest maximum leaf
 * level, then by leaf indices; exact duplicates are kept once.
 */
inline std::vector<std::vector<cut>> enumerate_cuts(const aig& g, unsigned cut_limit = 8) {
  std::vector<std::vector<cut>> cuts(g.num_vars());
  std::vector<std::uint32_t> level(g.num_vars(), 0);

  const auto trivial = [](std::uint32_t var) {
    cut c;
    c.leaves[0] = var;
    c.num_leaves = 1;
    c.table = tt_identity;
    return c;
  };

  for (std::uint32_t var = 1; var <= g.num_inputs(); ++var) {
    cuts[var].push_back(trivial(var));
  }

  for (std::uint32_t var = g.num_inputs() + 1; var < g.num_vars(); ++var) {
    const auto& n = g.node(var);
    level[var] = 1 + std::max(level[n.fanin0.var()], level[n.fanin1.var()]);

    std::vector<cut> merged;
    for (const cut& ca : cuts[n.fanin0.var()]) {
      for (const cut& cb : cuts[n.fanin1.var()]) {
        cut m;
        if (!detail::merge_leaves(ca, cb, m)) continue;
        truth_table ta = detail::spread_table(ca, m);
        truth_table tb = detail::spread_table(cb, m);
        if (n.fanin0.complemented()) ta = ~ta & tt_mask(m.num_leaves);
        if (n.fanin1.complemented()) tb = ~tb & tt_mask(m.num_leaves);
        m.table = ta & tb;
        // drop leaves the conjunction no longer depends on
        const tt_reduction r = tt_reduce_support(m.table, m.num_leaves);
        if (r.num_vars != m.num_leaves) {
          cut shrunk;
          shrunk.num_leaves = static_cast<std::uint8_t>(r.num_vars);
          shrunk.table = r.table;
          for (std::uint8_t i = 0; i < shrunk.num_leaves; ++i) {
            shrunk.leaves[i] = m.leaves[r.kept[i]];
          }
          m = shrunk;
        }
        merged.push_back(m);
      }
    }

    const auto max_level = [&level](const cut& c) {
      std::uint32_t lev = 0;
      for (std::uint8_t i = 0; i < c.num_leaves; ++i) {
        lev = std::max(lev, level[c.leaves[i]]);
      }
      return lev;
    };
    std::sort(merged.begin(), merged.end(), [&](const cut& x, const cut& y) {
      if (x.num_leaves != y.num_leaves) return x.num_leaves < y.num_leaves;
      const std::uint32_t lx = max_level(x), ly = max_level(y);
      if (lx != ly) return lx < ly;
      if (x.leaves != y.leaves) return x.leaves < y.leaves;
      return x.table < y.table;
    });
    // correlated leaves leave unreachable patterns whose fill depends on the
    // merge path, so one leaf set may carry several valid tables; only exact
    // duplicates collapse
    merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
    if (merged.size() > cut_limit) {
      merged.resize(cut_limit);
    }

    auto& set = cuts[var];
    set.reserve(1 + merged.size());
    set.push_back(trivial(var));
    set.insert(set.end(), merged.begin(), merged.end());
  }
  return cuts;
}

} // namespace celltune
