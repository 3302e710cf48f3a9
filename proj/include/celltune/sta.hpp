/*!
  \file sta.hpp
  \brief Static timing analysis over a mapped netlist
*/

#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <vector>

#include <nlohmann/json.hpp>

#include "cell_library.hpp"
#include "errors.hpp"
#include "netlist.hpp"

namespace celltune {

/*! \brief Worst-path summary with per-gate detail.
 *
 * arrivals and slacks are indexed by gate; critical_path lists gate indices
 * from the inputs toward the worst output.
 */
struct timing_report {
  double delay = 0.0;
  double area = 0.0;
  std::vector<double> arrivals;
  std::vector<double> slacks;
  std::vector<std::uint32_t> critical_path;
};

/*! \brief Computes arrivals, requireds and the critical path.
 *
 * The load of a net is the sum of the input capacitances it drives plus
 * po_load per output connection; the delay through pin i of a gate is
 * intrinsic[i] + slope[i] * load(output net). Inputs arrive at 0, the
 * report's delay is the worst output arrival and every output is required
 * at that time.
 */
inline timing_report sta(const mapped_netlist& net, const cell_library& lib,
                         double po_load = 1.0) {
  const double inf = std::numeric_limits<double>::infinity();
  const std::uint32_t num_nets = net.num_nets();

  for (std::uint32_t i = 0; i < net.num_gates(); ++i) {
    const mapped_gate& g = net.gates()[i];
    if (g.cell >= lib.size()) {
      throw dangling_net("gate " + std::to_string(i) + " references cell index " +
                         std::to_string(g.cell) + " outside the library");
    }
    if (g.inputs.size() != lib.at(g.cell).num_inputs) {
      throw length_mismatch("gate " + std::to_string(i) + " feeds " +
                            std::to_string(g.inputs.size()) + " nets into cell \"" +
                            lib.at(g.cell).name + "\"");
    }
    for (std::uint32_t in : g.inputs) {
      if (in >= num_nets) {
        throw dangling_net("gate input net " + std::to_string(in) + " is not driven");
      }
      if (in >= g.output) {
        throw cycle_detected("gate " + std::to_string(i) + " depends on net " +
                             std::to_string(in) + " at or after its own output");
      }
    }
  }
  for (std::uint32_t po : net.po_nets()) {
    if (po >= num_nets) {
      throw dangling_net("output net " + std::to_string(po) + " is not driven");
    }
  }

  std::vector<double> load(num_nets, 0.0);
  for (const mapped_gate& g : net.gates()) {
    const cell& c = lib.at(g.cell);
    for (std::uint8_t i = 0; i < c.num_inputs; ++i) {
      load[g.inputs[i]] += c.input_caps[i];
    }
  }
  for (std::uint32_t po : net.po_nets()) {
    load[po] += po_load;
  }

  timing_report rep;
  rep.area = net.total_area(lib);
  rep.arrivals.resize(net.num_gates(), 0.0);
  rep.slacks.resize(net.num_gates(), 0.0);

  std::vector<double> net_arrival(num_nets, 0.0);
  for (std::uint32_t i = 0; i < net.num_gates(); ++i) {
    const mapped_gate& g = net.gates()[i];
    const cell& c = lib.at(g.cell);
    double arr = 0.0;
    for (std::uint8_t p = 0; p < c.num_inputs; ++p) {
      arr = std::max(arr,
                     net_arrival[g.inputs[p]] + c.intrinsic[p] + c.slope[p] * load[g.output]);
    }
    net_arrival[g.output] = arr;
    rep.arrivals[i] = arr;
  }

  for (std::uint32_t po : net.po_nets()) {
    rep.delay = std::max(rep.delay, net_arrival[po]);
  }

  std::vector<double> required(num_nets, inf);
  for (std::uint32_t po : net.po_nets()) {
    required[po] = std::min(required[po], rep.delay);
  }
  for (std::uint32_t i = net.num_gates(); i-- > 0;) {
    const mapped_gate& g = net.gates()[i];
    const cell& c = lib.at(g.cell);
    rep.slacks[i] = required[g.output] - rep.arrivals[i];
    for (std::uint8_t p = 0; p < c.num_inputs; ++p) {
      required[g.inputs[p]] = std::min(
          required[g.inputs[p]],
          required[g.output] - (c.intrinsic[p] + c.slope[p] * load[g.output]));
    }
  }

  // worst output, then repeatedly the pin that set the arrival
  std::uint32_t worst_po = num_nets;
  for (std::uint32_t po : net.po_nets()) {
    if (net.is_gate_net(po) && net_arrival[po] == rep.delay) {
      worst_po = po;
      break;
    }
  }
  if (worst_po != num_nets) {
    std::vector<std::uint32_t> path;
    std::uint32_t cur = net.driver_of(worst_po);
    for (;;) {
      path.push_back(cur);
      const mapped_gate& g = net.gates()[cur];
      const cell& c = lib.at(g.cell);
      std::uint32_t next_net = num_nets;
      double best = -inf;
      for (std::uint8_t p = 0; p < c.num_inputs; ++p) {
        const double through =
            net_arrival[g.inputs[p]] + c.intrinsic[p] + c.slope[p] * load[g.output];
        if (through > best) {
          best = through;
          next_net = g.inputs[p];
        }
      }
      if (next_net == num_nets || !net.is_gate_net(next_net)) break;
      cur = net.driver_of(next_net);
    }
    rep.critical_path.assign(path.rbegin(), path.rend());
  }
  return rep;
}

//! report as a JSON document
inline nlohmann::json timing_json(const timing_report& rep) {
  nlohmann::json j;
  j["delay"] = rep.delay;
  j["area"] = rep.area;
  j["arrivals"] = rep.arrivals;
  j["slacks"] = rep.slacks;
  j["critical_path"] = rep.critical_path;
  return j;
}

} // namespace celltune
