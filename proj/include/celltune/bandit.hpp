/*!
  \file bandit.hpp
  \brief Multi-armed-bandit selection rules over the cell arms
*/

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "errors.hpp"
#include "rng.hpp"

namespace celltune {

//! knobs shared by the four agents; every value can be overridden
struct agent_config {
  double epsilon = 0.1;
  double epsilon_decay = 0.995;
  double epsilon_min = 0.01;
  double ucb_c = 1.0;
  double gamma = 0.99;
  double tau = 0.005;
  double learning_rate = 1e-3;
  double init_p = 0.0;
  std::size_t replay_capacity = 1000;
  std::size_t minibatch = 32;
  std::uint64_t seed = 1;
};

/*! \brief Per-arm reward statistics.
 *
 * p[i] is the exact arithmetic mean of the rewards credited to arm i, or
 * the configured initial value while n[i] is 0. t counts completed
 * episodes.
 */
struct bandit_state {
  std::vector<double> p;
  std::vector<std::uint64_t> n;
  std::uint64_t t = 0;
};

inline bandit_state make_bandit(std::size_t num_arms, double init_p = 0.0) {
  bandit_state s;
  s.p.assign(num_arms, init_p);
  s.n.assign(num_arms, 0);
  return s;
}

namespace detail {

//! highest value among still-available arms, ties toward the lowest index
inline std::size_t best_available(const std::vector<double>& value,
                                  const std::vector<std::uint8_t>& taken) {
  std::size_t best = value.size();
  for (std::size_t i = 0; i < value.size(); ++i) {
    if (taken[i]) continue;
    if (best == value.size() || value[i] > value[best]) {
      best = i;
    }
  }
  return best;
}

//! uniform pick among still-available arms
inline std::size_t random_available(const std::vector<std::uint8_t>& taken,
                                    std::size_t available, rng& r) {
  std::uint64_t skip = r.below(available);
  for (std::size_t i = 0; i < taken.size(); ++i) {
    if (taken[i]) continue;
    if (skip == 0) return i;
    --skip;
  }
  return taken.size();
}

inline void check_subset_size(std::size_t n, std::size_t arms) {
  if (n > arms) {
    throw size_exceeds_arms("cannot select " + std::to_string(n) + " cells from " +
                            std::to_string(arms) + " arms");
  }
}

} // namespace detail

/*! \brief Draws n distinct arms one at a time.
 *
 * Each pick explores a uniform unchosen arm with probability epsilon and
 * otherwise takes the unchosen arm with the highest estimate, ties toward
 * the lowest index.
 */
inline std::vector<std::uint8_t> select_subset_epsilon(const bandit_state& state,
                                                       std::size_t n,
                                                       const agent_config& cfg, rng& r) {
  const std::size_t arms = state.p.size();
  detail::check_subset_size(n, arms);
  std::vector<std::uint8_t> chosen(arms, 0);
  for (std::size_t pick = 0; pick < n; ++pick) {
    const bool explore = r.next_double() < cfg.epsilon;
    const std::size_t arm = explore
                                ? detail::random_available(chosen, arms - pick, r)
                                : detail::best_available(state.p, chosen);
    chosen[arm] = 1;
  }
  return chosen;
}

/*! \brief Upper-confidence score per arm.
 *
 * p_i + c * sqrt(log(t) / n_i); an unvisited arm scores infinite so it is
 * explored before any visited one.
 */
inline std::vector<double> ucb_scores(const bandit_state& state, const agent_config& cfg) {
  const double log_t = state.t > 0 ? std::log(static_cast<double>(state.t)) : 0.0;
  std::vector<double> score(state.p.size());
  for (std::size_t i = 0; i < score.size(); ++i) {
    score[i] = state.n[i] == 0
                   ? std::numeric_limits<double>::infinity()
                   : state.p[i] + cfg.ucb_c * std::sqrt(log_t / static_cast<double>(state.n[i]));
  }
  return score;
}

//! top-n arms by upper-confidence score, ties toward the lowest index
inline std::vector<std::uint8_t> select_subset_ucb(const bandit_state& state, std::size_t n,
                                                   const agent_config& cfg, rng&) {
  const std::size_t arms = state.p.size();
  detail::check_subset_size(n, arms);
  const std::vector<double> score = ucb_scores(state, cfg);
  std::vector<std::uint8_t> chosen(arms, 0);
  for (std::size_t pick = 0; pick < n; ++pick) {
    chosen[detail::best_available(score, chosen)] = 1;
  }
  return chosen;
}

/*! \brief Credits one episode reward to every selected arm.
 *
 * Each selected arm's count grows first and its estimate moves to the
 * running mean over its own rewards; unselected arms are untouched.
 */
inline void bandit_update(bandit_state& state, const std::vector<std::uint8_t>& selected,
                          double reward) {
  if (selected.size() != state.p.size()) {
    throw length_mismatch("selection covers " + std::to_string(selected.size()) +
                          " arms, state has " + std::to_string(state.p.size()));
  }
  state.t += 1;
  for (std::size_t i = 0; i < selected.size(); ++i) {
    if (!selected[i]) continue;
    state.n[i] += 1;
    const double k = static_cast<double>(state.n[i]);
    state.p[i] = (state.p[i] * (k - 1.0) + reward) / k;
  }
}

} // namespace celltune
