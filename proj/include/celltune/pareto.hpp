/*!
  \file pareto.hpp
  \brief Nondominated delay/area frontier of evaluated selections
*/

#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace celltune {

//! one frontier member and the selection that achieved it
struct pareto_point {
  double delay = 0.0;
  double area = 0.0;
  std::vector<std::uint8_t> subset;
};

//! a beats b on one axis without losing the other
inline bool dominates(const pareto_point& a, const pareto_point& b) {
  return a.delay <= b.delay && a.area <= b.area &&
         (a.delay < b.delay || a.area < b.area);
}

/*! \brief Inserts a point iff no member dominates it, evicting members it
 * dominates. Returns whether the point joined. Points with equal delay and
 * area coexist: neither dominates the other.
 */
inline bool pareto_insert(std::vector<pareto_point>& set, pareto_point pt) {
  for (const pareto_point& member : set) {
    if (dominates(member, pt)) return false;
  }
  std::erase_if(set, [&pt](const pareto_point& member) { return dominates(pt, member); });
  set.push_back(std::move(pt));
  return true;
}

} // namespace celltune
