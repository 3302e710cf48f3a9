/*!
  \file evaluate.hpp
  \brief End-to-end quality-of-result pipeline: map, size, then time
*/

#pragma once

#include <limits>
#include <utility>

#include "aig.hpp"
#include "cell_library.hpp"
#include "mapper.hpp"
#include "netlist.hpp"
#include "sizing.hpp"
#include "sta.hpp"

namespace celltune {

//! delay and area of the full-library flow, the normalization anchor
struct qor_baseline {
  double delay = 0.0;
  double area = 0.0;
};

//! quality of one evaluated selection
struct qor {
  double delay = 0.0;
  double area = 0.0;
  //! (delay / baseline delay) * (area / baseline area)
  double adp_norm = 0.0;
};

//! knobs shared by every evaluation of one tuning run
struct eval_params {
  map_mode mode = map_mode::delay_driven;
  double po_load = 1.0;
  unsigned max_passes = 10;
  unsigned cut_limit = 8;
};

//! ratio against a baseline; a zero baseline counts as parity only at zero
inline double norm_ratio(double value, double base) {
  if (base > 0.0) return value / base;
  return value > 0.0 ? std::numeric_limits<double>::infinity() : 1.0;
}

//! map with the selection, then upsize for delay and dnsize for area
inline mapped_netlist run_flow(const aig& g, const sub_library& sub,
                               const eval_params& params = {}) {
  map_params mp;
  mp.cut_limit = params.cut_limit;
  mapped_netlist net = map_cover(g, sub, params.mode, mp);
  net = upsize(std::move(net), sub, params.po_load, params.max_passes);
  net = dnsize(std::move(net), sub, params.po_load, params.max_passes);
  return net;
}

//! full-library flow result; selections are judged relative to this
inline qor_baseline compute_baseline(const aig& g, const cell_library& lib,
                                     const eval_params& params = {}) {
  const mapped_netlist net = run_flow(g, full_sublibrary(lib), params);
  const timing_report rep = sta(net, lib, params.po_load);
  return {rep.delay, rep.area};
}

/*! \brief Runs the flow for one selection and normalizes against the baseline.
 *
 * The full library evaluates to adp_norm == 1.0 exactly since the flow is
 * deterministic. Mapping failures propagate to the caller, which treats
 * them as a penalized episode rather than an error.
 */
inline qor evaluate(const aig& g, const sub_library& sub, const qor_baseline& base,
                    const eval_params& params = {}) {
  const mapped_netlist net = run_flow(g, sub, params);
  const timing_report rep = sta(net, sub.parent(), params.po_load);
  qor q;
  q.delay = rep.delay;
  q.area = rep.area;
  q.adp_norm = norm_ratio(rep.delay, base.delay) * norm_ratio(rep.area, base.area);
  return q;
}

} // namespace celltune
