/*!
  \file mapper.hpp
  \brief Cut-based technology mapping of an AIG onto a sub-library
*/

#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <unordered_map>
#include <vector>

#include "aig.hpp"
#include "cell_library.hpp"
#include "cuts.hpp"
#include "errors.hpp"
#include "matcher.hpp"
#include "netlist.hpp"

namespace celltune {

enum class map_mode { delay_driven, area_driven };

struct map_params {
  unsigned cut_limit = 8;
};

namespace detail {

/*! \brief One way to realize a node: tie it to a constant net, forward a
 * leaf net, or instantiate a matched cell (plus inverter when the match is
 * complemented). Costs are estimates; true loads exist only after covering. */
struct map_candidate {
  enum class kind : std::uint8_t { constant, wire, gate };
  kind k = kind::gate;
  cut c;
  cut_match m;
  double arrival = 0.0;
  //! cell area plus inverter area when the match is complemented
  double area = 0.0;
  double flow = 0.0;
  bool feasible = true;
};

inline bool leaves_less(const cut& x, const cut& y) {
  return std::lexicographical_compare(x.leaves.begin(), x.leaves.begin() + x.num_leaves,
                                      y.leaves.begin(), y.leaves.begin() + y.num_leaves);
}

//! strict preference order: objectives, then kind, cell index and leaves
inline bool map_prefer(const map_candidate& x, const map_candidate& y, double x_primary,
                       double y_primary, double x_secondary, double y_secondary) {
  if (x_primary != y_primary) return x_primary < y_primary;
  if (x_secondary != y_secondary) return x_secondary < y_secondary;
  if (x.k != y.k) return x.k < y.k;
  if (x.k == map_candidate::kind::gate && x.m.cell != y.m.cell) return x.m.cell < y.m.cell;
  return leaves_less(x.c, y.c);
}

inline bool map_better(const map_candidate& x, const map_candidate& y, map_mode mode) {
  if (mode == map_mode::delay_driven) {
    return map_prefer(x, y, x.arrival, y.arrival, x.area, y.area);
  }
  return map_prefer(x, y, x.flow, y.flow, x.arrival, y.arrival);
}

//! recovery preference: cheapest area first, arrival breaks ties
inline bool recovery_better(const map_candidate& x, const map_candidate& y) {
  return map_prefer(x, y, x.area, y.area, x.arrival, y.arrival);
}

} // namespace detail

/*! \brief Covers `g` with cells of `sub` by dynamic programming over cuts.
 *
 * Nodes are realized in positive polarity; complemented outputs are driven
 * through explicit inverters, shared per net. delay_driven minimizes the
 * estimated arrival per node (pin delays at unit load, plus the inverter
 * for complemented matches) with area as tie-break; area_driven minimizes
 * area flow with arrival as tie-break. A single reverse sweep then replaces
 * matches by cheaper ones wherever the delay estimate has slack. Throws
 * mapping_failure when a needed node has no match, or when an output needs
 * an inversion and the sub-library has no inverter.
 */
inline mapped_netlist map_cover(const aig& g, const sub_library& sub, map_mode mode,
                                const map_params& params = {}) {
  using detail::map_candidate;
  using kind = map_candidate::kind;
  constexpr double recovery_tolerance = 1e-12;
  const double inf = std::numeric_limits<double>::infinity();

  const cell_library& lib = sub.parent();
  const auto cuts = enumerate_cuts(g, params.cut_limit);
  const cut_matcher matcher(sub);

  double inv_delay = 0.0, inv_area = 0.0;
  if (matcher.inverter_cell()) {
    const cell& c = lib.at(*matcher.inverter_cell());
    inv_delay = c.intrinsic[0] + c.slope[0] * 1.0;
    inv_area = c.area;
  }

  // AIG fanout counts estimate how many covers share a leaf; floored so
  // area flow stays finite on dead logic
  std::vector<double> refs(g.num_vars(), 0.0);
  for (std::uint32_t var = g.num_inputs() + 1; var < g.num_vars(); ++var) {
    refs[g.node(var).fanin0.var()] += 1.0;
    refs[g.node(var).fanin1.var()] += 1.0;
  }
  for (literal po : g.outputs()) {
    refs[po.var()] += 1.0;
  }
  for (double& r : refs) {
    r = std::max(r, 1.0);
  }

  std::vector<double> arrival(g.num_vars(), 0.0);
  std::vector<double> flow(g.num_vars(), 0.0);
  std::vector<char> feasible(g.num_vars(), 1);
  std::vector<std::vector<map_candidate>> cands(g.num_vars());
  std::vector<int> choice(g.num_vars(), -1);

  for (std::uint32_t v = g.num_inputs() + 1; v < g.num_vars(); ++v) {
    auto& list = cands[v];
    for (std::size_t ci = 1; ci < cuts[v].size(); ++ci) {
      const cut& c = cuts[v][ci];
      if (c.num_leaves == 0) {
        map_candidate cand;
        cand.k = kind::constant;
        cand.c = c;
        list.push_back(cand);
        continue;
      }
      if (c.num_leaves == 1 && c.table == tt_identity) {
        const std::uint32_t leaf = c.leaves[0];
        map_candidate cand;
        cand.k = kind::wire;
        cand.c = c;
        cand.arrival = arrival[leaf];
        cand.flow = flow[leaf] / refs[leaf];
        cand.feasible = feasible[leaf] != 0;
        list.push_back(cand);
        continue;
      }
      for (const cut_match& m : matcher.match(c.table, c.num_leaves)) {
        const cell& cc = lib.at(m.cell);
        map_candidate cand;
        cand.k = kind::gate;
        cand.c = c;
        cand.m = m;
        for (std::uint8_t i = 0; i < cc.num_inputs; ++i) {
          const std::uint32_t leaf = c.leaves[m.leaf_binding[i]];
          cand.arrival =
              std::max(cand.arrival, arrival[leaf] + cc.intrinsic[i] + cc.slope[i] * 1.0);
        }
        cand.area = cc.area;
        if (m.output_inverted) {
          cand.arrival += inv_delay;
          cand.area += inv_area;
        }
        cand.flow = cand.area;
        for (std::uint8_t i = 0; i < c.num_leaves; ++i) {
          cand.flow += flow[c.leaves[i]] / refs[c.leaves[i]];
          cand.feasible = cand.feasible && feasible[c.leaves[i]] != 0;
        }
        list.push_back(cand);
      }
    }
    int best = -1;
    for (std::size_t i = 0; i < list.size(); ++i) {
      if (!list[i].feasible) continue;
      if (best < 0 || detail::map_better(list[i], list[best], mode)) {
        best = static_cast<int>(i);
      }
    }
    if (best < 0) {
      feasible[v] = 0;
      arrival[v] = inf;
      flow[v] = inf;
    } else {
      choice[v] = best;
      arrival[v] = list[best].arrival;
      flow[v] = list[best].flow;
    }
  }

  const auto collect_needed = [&](std::vector<char>& needed) {
    std::vector<std::uint32_t> stack;
    for (literal po : g.outputs()) {
      if (g.is_and_var(po.var())) stack.push_back(po.var());
    }
    while (!stack.empty()) {
      const std::uint32_t v = stack.back();
      stack.pop_back();
      if (needed[v]) continue;
      needed[v] = 1;
      if (!feasible[v]) continue;
      const map_candidate& cand = cands[v][choice[v]];
      if (cand.k == kind::constant) continue;
      for (std::uint8_t i = 0; i < cand.c.num_leaves; ++i) {
        if (g.is_and_var(cand.c.leaves[i])) stack.push_back(cand.c.leaves[i]);
      }
    }
  };

  std::vector<char> needed(g.num_vars(), 0);
  collect_needed(needed);
  for (std::uint32_t v = g.num_inputs() + 1; v < g.num_vars(); ++v) {
    if (needed[v] && !feasible[v]) {
      throw mapping_failure("node " + std::to_string(v) +
                                " has no cover in the selected cells",
                            v, false);
    }
  }
  // delay target of the chosen cover; the recovery sweep may not exceed it
  double target = 0.0;
  for (literal po : g.outputs()) {
    if (po.var() == 0) continue;
    target = std::max(target, arrival[po.var()] + (po.complemented() ? inv_delay : 0.0));
  }

  std::vector<double> required(g.num_vars(), inf);
  for (literal po : g.outputs()) {
    if (!g.is_and_var(po.var())) continue;
    required[po.var()] =
        std::min(required[po.var()], target - (po.complemented() ? inv_delay : 0.0));
  }
  for (std::uint32_t v = g.num_vars(); v-- > g.num_inputs() + 1;) {
    if (required[v] == inf) continue;
    int best = choice[v];
    for (std::size_t i = 0; i < cands[v].size(); ++i) {
      const map_candidate& cand = cands[v][i];
      if (!cand.feasible || cand.arrival > required[v] + recovery_tolerance) continue;
      if (detail::recovery_better(cand, cands[v][best])) {
        best = static_cast<int>(i);
      }
    }
    choice[v] = best;
    const map_candidate& cand = cands[v][best];
    if (cand.k == kind::wire) {
      const std::uint32_t leaf = cand.c.leaves[0];
      if (g.is_and_var(leaf)) {
        required[leaf] = std::min(required[leaf], required[v]);
      }
    } else if (cand.k == kind::gate) {
      const cell& cc = lib.at(cand.m.cell);
      for (std::uint8_t i = 0; i < cc.num_inputs; ++i) {
        const std::uint32_t leaf = cand.c.leaves[cand.m.leaf_binding[i]];
        if (!g.is_and_var(leaf)) continue;
        const double d = cc.intrinsic[i] + cc.slope[i] * 1.0 +
                         (cand.m.output_inverted ? inv_delay : 0.0);
        required[leaf] = std::min(required[leaf], required[v] - d);
      }
    }
  }

  std::fill(needed.begin(), needed.end(), 0);
  collect_needed(needed);

  mapped_netlist net(g.input_names());
  std::vector<std::uint32_t> net_of(g.num_vars(), mapped_netlist::const0_net);
  for (std::uint32_t i = 0; i < g.num_inputs(); ++i) {
    net_of[1 + i] = net.pi_net(i);
  }
  for (std::uint32_t v = g.num_inputs() + 1; v < g.num_vars(); ++v) {
    if (!needed[v]) continue;
    const map_candidate& cand = cands[v][choice[v]];
    switch (cand.k) {
      case kind::constant:
        net_of[v] = tt_bit(cand.c.table, 0) ? mapped_netlist::const1_net
                                            : mapped_netlist::const0_net;
        break;
      case kind::wire:
        net_of[v] = net_of[cand.c.leaves[0]];
        break;
      case kind::gate: {
        const cell& cc = lib.at(cand.m.cell);
        std::vector<std::uint32_t> ins(cc.num_inputs);
        for (std::uint8_t i = 0; i < cc.num_inputs; ++i) {
          ins[i] = net_of[cand.c.leaves[cand.m.leaf_binding[i]]];
        }
        std::uint32_t out = net.add_gate(cand.m.cell, std::move(ins));
        if (cand.m.output_inverted) {
          out = net.add_gate(*matcher.inverter_cell(), {out});
        }
        net_of[v] = out;
        break;
      }
    }
  }

  std::unordered_map<std::uint32_t, std::uint32_t> inverted_net;
  for (std::uint32_t i = 0; i < g.num_outputs(); ++i) {
    const literal po = g.outputs()[i];
    std::uint32_t n;
    if (po.var() == 0) {
      n = po.complemented() ? mapped_netlist::const1_net : mapped_netlist::const0_net;
    } else {
      n = net_of[po.var()];
      if (po.complemented()) {
        if (n == mapped_netlist::const0_net) {
          n = mapped_netlist::const1_net;
        } else if (n == mapped_netlist::const1_net) {
          n = mapped_netlist::const0_net;
        } else if (auto it = inverted_net.find(n); it != inverted_net.end()) {
          n = it->second;
        } else {
          if (!matcher.inverter_cell()) {
            throw mapping_failure("complemented output of node " + std::to_string(po.var()) +
                                      " needs an inverter in the selected cells",
                                  po.var(), true);
          }
          const std::uint32_t in = net.add_gate(*matcher.inverter_cell(), {n});
          inverted_net.emplace(n, in);
          n = in;
        }
      }
    }
    net.add_po(n, g.output_names()[i]);
  }
  return net;
}

} // namespace celltune
