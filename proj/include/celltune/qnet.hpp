/*!
  \file qnet.hpp
  \brief Small dense value network and its training step
*/

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "errors.hpp"
#include "rng.hpp"

namespace celltune {

/*! \brief Fully connected arms -> hidden -> hidden -> arms network.
 *
 * Rectified-linear hidden layers, linear head. Weights are row-major:
 * w1[j * num_arms + i] feeds input i into hidden unit j, w3[o * hidden + k]
 * feeds hidden unit k into output o.
 */
struct qnet {
  std::uint32_t num_arms = 0;
  std::uint32_t hidden = 0;
  std::vector<double> w1, b1;
  std::vector<double> w2, b2;
  std::vector<double> w3, b3;
};

//! one replayed step: the state seen, the arm taken, the value to regress to
struct transition {
  std::vector<double> state;
  std::uint32_t action = 0;
  double target = 0.0;
};

//! uniform init in +-1/sqrt(fan_in), biases zero
inline qnet make_qnet(std::uint32_t num_arms, std::uint32_t hidden, rng& r) {
  qnet net;
  net.num_arms = num_arms;
  net.hidden = hidden;
  auto fill = [&r](std::vector<double>& w, std::size_t count, std::size_t fan_in) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
    w.resize(count);
    for (double& v : w) {
      v = (2.0 * r.next_double() - 1.0) * bound;
    }
  };
  fill(net.w1, std::size_t{hidden} * num_arms, num_arms);
  fill(net.w2, std::size_t{hidden} * hidden, hidden);
  fill(net.w3, std::size_t{num_arms} * hidden, hidden);
  net.b1.assign(hidden, 0.0);
  net.b2.assign(hidden, 0.0);
  net.b3.assign(num_arms, 0.0);
  return net;
}

namespace detail {

struct qnet_activations {
  std::vector<double> h1;
  std::vector<double> h2;
  std::vector<double> q;
};

inline qnet_activations qnet_run(const qnet& net, const std::vector<double>& x) {
  qnet_activations act;
  act.h1.assign(net.hidden, 0.0);
  for (std::uint32_t j = 0; j < net.hidden; ++j) {
    double z = net.b1[j];
    const double* row = net.w1.data() + std::size_t{j} * net.num_arms;
    for (std::uint32_t i = 0; i < net.num_arms; ++i) {
      z += row[i] * x[i];
    }
    act.h1[j] = std::max(z, 0.0);
  }
  act.h2.assign(net.hidden, 0.0);
  for (std::uint32_t k = 0; k < net.hidden; ++k) {
    double z = net.b2[k];
    const double* row = net.w2.data() + std::size_t{k} * net.hidden;
    for (std::uint32_t j = 0; j < net.hidden; ++j) {
      z += row[j] * act.h1[j];
    }
    act.h2[k] = std::max(z, 0.0);
  }
  act.q.assign(net.num_arms, 0.0);
  for (std::uint32_t o = 0; o < net.num_arms; ++o) {
    double z = net.b3[o];
    const double* row = net.w3.data() + std::size_t{o} * net.hidden;
    for (std::uint32_t k = 0; k < net.hidden; ++k) {
      z += row[k] * act.h2[k];
    }
    act.q[o] = z;
  }
  return act;
}

} // namespace detail

//! value estimate per arm for one state
inline std::vector<double> qnet_forward(const qnet& net, const std::vector<double>& state) {
  if (state.size() != net.num_arms) {
    throw shape_mismatch("state of length " + std::to_string(state.size()) +
                         " fed to a " + std::to_string(net.num_arms) + "-arm network");
  }
  return detail::qnet_run(net, state).q;
}

//! Bellman backup: the reward plus the discounted best next value
inline double dqn_target(double reward, const std::vector<double>& next_q, double gamma,
                         bool terminal) {
  if (terminal || next_q.empty()) return reward;
  return reward + gamma * *std::max_element(next_q.begin(), next_q.end());
}

/*! \brief Double-DQN backup.
 *
 * The online network chooses the next action (ties toward the lowest
 * index), the target network prices it. With identical networks this
 * equals dqn_target.
 */
inline double ddqn_target(double reward, const std::vector<double>& online_next_q,
                          const std::vector<double>& target_next_q, double gamma,
                          bool terminal) {
  if (terminal || online_next_q.empty()) return reward;
  const std::size_t best =
      std::max_element(online_next_q.begin(), online_next_q.end()) - online_next_q.begin();
  return reward + gamma * target_next_q[best];
}

/*! \brief One gradient-descent step on the mean squared error of the taken
 * actions.
 *
 * Returns the loss before the step. The gradient only flows through q[a]
 * of each transition; rectified units pass gradient where their input was
 * positive.
 */
inline double qnet_train_step(qnet& net, const std::vector<transition>& batch, double lr) {
  if (batch.empty()) return 0.0;

  std::vector<double> gw1(net.w1.size(), 0.0), gb1(net.b1.size(), 0.0);
  std::vector<double> gw2(net.w2.size(), 0.0), gb2(net.b2.size(), 0.0);
  std::vector<double> gw3(net.w3.size(), 0.0), gb3(net.b3.size(), 0.0);
  double loss = 0.0;
  const double inv_batch = 1.0 / static_cast<double>(batch.size());

  for (const transition& tr : batch) {
    if (tr.state.size() != net.num_arms || tr.action >= net.num_arms) {
      throw shape_mismatch("transition does not fit a " + std::to_string(net.num_arms) +
                           "-arm network");
    }
    const auto act = detail::qnet_run(net, tr.state);
    const double diff = act.q[tr.action] - tr.target;
    loss += diff * diff * inv_batch;

    // only the taken action carries an error signal
    const double gq = 2.0 * diff * inv_batch;
    std::vector<double> gh2(net.hidden, 0.0);
    {
      const double* row = net.w3.data() + std::size_t{tr.action} * net.hidden;
      for (std::uint32_t k = 0; k < net.hidden; ++k) {
        gw3[std::size_t{tr.action} * net.hidden + k] += gq * act.h2[k];
        gh2[k] = gq * row[k];
      }
      gb3[tr.action] += gq;
    }
    std::vector<double> gh1(net.hidden, 0.0);
    for (std::uint32_t k = 0; k < net.hidden; ++k) {
      if (act.h2[k] <= 0.0) continue;
      const double g = gh2[k];
      const double* row = net.w2.data() + std::size_t{k} * net.hidden;
      for (std::uint32_t j = 0; j < net.hidden; ++j) {
        gw2[std::size_t{k} * net.hidden + j] += g * act.h1[j];
        gh1[j] += g * row[j];
      }
      gb2[k] += g;
    }
    for (std::uint32_t j = 0; j < net.hidden; ++j) {
      if (act.h1[j] <= 0.0) continue;
      const double g = gh1[j];
      for (std::uint32_t i = 0; i < net.num_arms; ++i) {
        gw1[std::size_t{j} * net.num_arms + i] += g * tr.state[i];
      }
      gb1[j] += g;
    }
  }

  for (const auto* grad : {&gw1, &gb1, &gw2, &gb2, &gw3, &gb3}) {
    for (double g : *grad) {
      if (!std::isfinite(g)) {
        throw non_finite_gradient("training step produced a non-finite gradient");
      }
    }
  }

  auto apply = [lr](std::vector<double>& w, const std::vector<double>& g) {
    for (std::size_t i = 0; i < w.size(); ++i) {
      w[i] -= lr * g[i];
    }
  };
  apply(net.w1, gw1);
  apply(net.b1, gb1);
  apply(net.w2, gw2);
  apply(net.b2, gb2);
  apply(net.w3, gw3);
  apply(net.b3, gb3);
  return loss;
}

//! moves the target network a step of tau toward the online network
inline void soft_update(const qnet& online, qnet& target, double tau) {
  if (online.num_arms != target.num_arms || online.hidden != target.hidden) {
    throw shape_mismatch("online and target networks differ in shape");
  }
  auto blend = [tau](const std::vector<double>& from, std::vector<double>& to) {
    for (std::size_t i = 0; i < to.size(); ++i) {
      to[i] = tau * from[i] + (1.0 - tau) * to[i];
    }
  };
  blend(online.w1, target.w1);
  blend(online.b1, target.b1);
  blend(online.w2, target.w2);
  blend(online.b2, target.b2);
  blend(online.w3, target.w3);
  blend(online.b3, target.b3);
}

} // namespace celltune
