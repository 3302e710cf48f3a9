/*!
  \file sizing.hpp
  \brief Greedy gate sizing passes run between mapping and timing sign-off
*/

#pragma once

#include <cstdint>
#include <numeric>
#include <utility>
#include <vector>

#include "cell_library.hpp"
#include "netlist.hpp"
#include "sta.hpp"

namespace celltune {

/*! \brief Walks the critical path and swaps one gate per pass to a larger
 * same-function variant.
 *
 * Each pass retimes the design, tries every larger-area variant of every
 * critical gate and commits the single swap that reduces the worst delay the
 * most. Passes stop when no swap improves or max_passes is reached. Only
 * cells inside sub are considered, so a selection without size variants
 * leaves the netlist untouched.
 */
inline mapped_netlist upsize(mapped_netlist net, const sub_library& sub,
                             double po_load = 1.0, unsigned max_passes = 10) {
  const cell_library& lib = sub.parent();
  const auto classes = function_classes(sub);

  for (unsigned pass = 0; pass < max_passes; ++pass) {
    const timing_report rep = sta(net, lib, po_load);
    double best_delay = rep.delay;
    std::uint32_t best_gate = 0;
    std::uint32_t best_cell = 0;
    bool improved = false;

    for (std::uint32_t gi : rep.critical_path) {
      const cell& cur = lib.at(net.gates()[gi].cell);
      const auto group = classes.find({cur.num_inputs, cur.function});
      if (group == classes.end()) continue;
      for (std::uint32_t cand : group->second) {
        if (lib.at(cand).area <= cur.area) continue;
        mapped_netlist trial = net;
        trial.set_cell(gi, cand);
        const double d = sta(trial, lib, po_load).delay;
        if (d < best_delay) {
          best_delay = d;
          best_gate = gi;
          best_cell = cand;
          improved = true;
        }
      }
    }
    if (!improved) break;
    net.set_cell(best_gate, best_cell);
  }
  return net;
}

/*! \brief Recovers area by shrinking gates that can afford it.
 *
 * The delay bound is fixed when the pass starts: the entry delay plus a
 * 1e-9 guard. Each sweep visits gates from smallest to largest slack and
 * greedily commits the smallest same-function variant that keeps the worst
 * delay under the bound. Sweeps repeat until one changes nothing or
 * max_passes is reached. Area never increases and delay never leaves the
 * bound.
 */
inline mapped_netlist dnsize(mapped_netlist net, const sub_library& sub,
                             double po_load = 1.0, unsigned max_passes = 10) {
  const cell_library& lib = sub.parent();
  const auto classes = function_classes(sub);
  if (max_passes == 0 || net.num_gates() == 0) return net;

  const double bound = sta(net, lib, po_load).delay + 1e-9;

  for (unsigned pass = 0; pass < max_passes; ++pass) {
    const timing_report rep = sta(net, lib, po_load);
    std::vector<std::uint32_t> order(net.num_gates());
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(), [&rep](std::uint32_t a, std::uint32_t b) {
      if (rep.slacks[a] != rep.slacks[b]) return rep.slacks[a] < rep.slacks[b];
      return a < b;
    });

    bool changed = false;
    for (std::uint32_t gi : order) {
      const cell& cur = lib.at(net.gates()[gi].cell);
      const auto group = classes.find({cur.num_inputs, cur.function});
      if (group == classes.end()) continue;
      for (std::uint32_t cand : group->second) {
        if (lib.at(cand).area >= cur.area) break;
        mapped_netlist trial = net;
        trial.set_cell(gi, cand);
        if (sta(trial, lib, po_load).delay <= bound) {
          net.set_cell(gi, cand);
          changed = true;
          break;
        }
      }
    }
    if (!changed) break;
  }
  return net;
}

} // namespace celltune
