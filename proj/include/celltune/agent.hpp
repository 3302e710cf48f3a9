/*!
  \file agent.hpp
  \brief Unified front for the four subset-selection agents
*/

#pragma once

#include <cstdint>
#include <deque>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "bandit.hpp"
#include "errors.hpp"
#include "qnet.hpp"
#include "rng.hpp"

namespace celltune {

enum class agent_kind { epsilon_greedy, ucb, dqn, ddqn };

inline std::string to_string(agent_kind k) {
  switch (k) {
    case agent_kind::epsilon_greedy: return "epsilon";
    case agent_kind::ucb: return "ucb";
    case agent_kind::dqn: return "dqn";
    default: return "ddqn";
  }
}

inline agent_kind agent_kind_from_string(const std::string& s) {
  if (s == "epsilon") return agent_kind::epsilon_greedy;
  if (s == "ucb") return agent_kind::ucb;
  if (s == "dqn") return agent_kind::dqn;
  if (s == "ddqn") return agent_kind::ddqn;
  throw config_error("unknown agent \"" + s + "\"; use epsilon, ucb, dqn or ddqn");
}

inline nlohmann::json agent_config_json(const agent_config& cfg) {
  return {{"epsilon", cfg.epsilon},
          {"epsilon_decay", cfg.epsilon_decay},
          {"epsilon_min", cfg.epsilon_min},
          {"ucb_c", cfg.ucb_c},
          {"gamma", cfg.gamma},
          {"tau", cfg.tau},
          {"learning_rate", cfg.learning_rate},
          {"init_p", cfg.init_p},
          {"replay_capacity", cfg.replay_capacity},
          {"minibatch", cfg.minibatch},
          {"seed", cfg.seed}};
}

inline agent_config agent_config_from_json(const nlohmann::json& j) {
  agent_config cfg;
  cfg.epsilon = j.value("epsilon", cfg.epsilon);
  cfg.epsilon_decay = j.value("epsilon_decay", cfg.epsilon_decay);
  cfg.epsilon_min = j.value("epsilon_min", cfg.epsilon_min);
  cfg.ucb_c = j.value("ucb_c", cfg.ucb_c);
  cfg.gamma = j.value("gamma", cfg.gamma);
  cfg.tau = j.value("tau", cfg.tau);
  cfg.learning_rate = j.value("learning_rate", cfg.learning_rate);
  cfg.init_p = j.value("init_p", cfg.init_p);
  cfg.replay_capacity = j.value("replay_capacity", cfg.replay_capacity);
  cfg.minibatch = j.value("minibatch", cfg.minibatch);
  cfg.seed = j.value("seed", cfg.seed);
  return cfg;
}

/*! \brief One agent owning its statistics, networks and pending episodes.
 *
 * Selection and observation must alternate in submission order: each
 * select() queues an episode and each observe() settles the oldest one.
 * The caller owns the random generator so that one seed drives the whole
 * run. Exploration decays multiplicatively per observed episode down to
 * the configured floor.
 */
class agent {
public:
  agent(agent_kind kind, std::size_t num_arms, const agent_config& cfg, rng& r)
      : kind_(kind), cfg_(cfg), epsilon_(cfg.epsilon),
        state_(make_bandit(num_arms, cfg.init_p)) {
    if (is_q_agent()) {
      online_ = make_qnet(static_cast<std::uint32_t>(num_arms), 128, r);
      target_ = online_;
    }
  }

  agent_kind kind() const { return kind_; }
  bool is_q_agent() const { return kind_ == agent_kind::dqn || kind_ == agent_kind::ddqn; }
  std::size_t num_arms() const { return state_.p.size(); }
  double epsilon() const { return epsilon_; }
  const agent_config& config() const { return cfg_; }
  const bandit_state& state() const { return state_; }
  const qnet& online_net() const { return online_; }
  const qnet& target_net() const { return target_; }

  //! picks a subset of the requested size and queues the episode
  std::vector<std::uint8_t> select(std::size_t subset_size, rng& r) {
    std::vector<std::uint8_t> chosen;
    episode ep;
    switch (kind_) {
      case agent_kind::epsilon_greedy: {
        agent_config eff = cfg_;
        eff.epsilon = epsilon_;
        chosen = select_subset_epsilon(state_, subset_size, eff, r);
        break;
      }
      case agent_kind::ucb:
        chosen = select_subset_ucb(state_, subset_size, cfg_, r);
        break;
      default:
        chosen = rollout(subset_size, ep.steps, r);
    }
    ep.subset = chosen;
    pending_.push_back(std::move(ep));
    return chosen;
  }

  //! settles the oldest pending episode with its reward
  void observe(const std::vector<std::uint8_t>& subset, double reward, rng& r) {
    if (pending_.empty() || pending_.front().subset != subset) {
      throw error("episode reward arrived out of selection order");
    }
    episode ep = std::move(pending_.front());
    pending_.pop_front();

    if (is_q_agent()) {
      record_and_train(ep, reward, r);
      state_.t += 1;
    } else {
      bandit_update(state_, subset, reward);
    }
    epsilon_ = std::max(cfg_.epsilon_min, epsilon_ * cfg_.epsilon_decay);
  }

  std::size_t pending_episodes() const { return pending_.size(); }
  std::size_t replay_size() const { return replay_.size(); }

  //! drops queued episodes unsettled; used when a batch is abandoned whole
  void discard_pending() { pending_.clear(); }

  /*! \brief Versioned snapshot for resume; replay and pending episodes are
   * not part of it, so checkpoints belong between batches. */
  nlohmann::json checkpoint(const rng& r) const {
    if (!pending_.empty()) {
      throw error("checkpoint with unsettled episodes");
    }
    nlohmann::json j;
    j["version"] = 1;
    j["kind"] = to_string(kind_);
    j["num_arms"] = num_arms();
    j["config"] = agent_config_json(cfg_);
    j["epsilon"] = epsilon_;
    j["p"] = state_.p;
    j["n"] = state_.n;
    j["t"] = state_.t;
    if (is_q_agent()) {
      j["online"] = net_json(online_);
      j["target"] = net_json(target_);
    }
    j["rng"] = r.state_string();
    return j;
  }

  static agent restore(const nlohmann::json& j, rng& r) {
    if (j.value("version", 0) != 1) {
      throw config_error("unsupported agent checkpoint version");
    }
    const agent_config cfg = agent_config_from_json(j.at("config"));
    agent a(agent_kind_from_string(j.at("kind").get<std::string>()),
            j.at("num_arms").get<std::size_t>(), cfg, r);
    a.epsilon_ = j.at("epsilon").get<double>();
    a.state_.p = j.at("p").get<std::vector<double>>();
    a.state_.n = j.at("n").get<std::vector<std::uint64_t>>();
    a.state_.t = j.at("t").get<std::uint64_t>();
    if (a.is_q_agent()) {
      a.online_ = net_from_json(j.at("online"));
      a.target_ = net_from_json(j.at("target"));
    }
    r.restore_state(j.at("rng").get<std::string>());
    return a;
  }

private:
  struct episode_step {
    std::vector<double> state;
    std::uint32_t action = 0;
  };
  struct episode {
    std::vector<std::uint8_t> subset;
    std::vector<episode_step> steps;
  };
  struct replay_item {
    std::vector<double> state;
    std::uint32_t action = 0;
    double reward = 0.0;
    std::vector<double> next_state;
    bool terminal = false;
  };

  //! greedy walk over the online network with epsilon exploration; arms
  //! already in the subset are masked out
  std::vector<std::uint8_t> rollout(std::size_t subset_size,
                                    std::vector<episode_step>& steps, rng& r) {
    detail::check_subset_size(subset_size, num_arms());
    std::vector<std::uint8_t> chosen(num_arms(), 0);
    std::vector<double> state(num_arms(), 0.0);
    for (std::size_t pick = 0; pick < subset_size; ++pick) {
      const std::vector<double> q = qnet_forward(online_, state);
      const bool explore = r.next_double() < epsilon_;
      const std::size_t arm = explore
                                  ? detail::random_available(chosen, num_arms() - pick, r)
                                  : detail::best_available(q, chosen);
      steps.push_back({state, static_cast<std::uint32_t>(arm)});
      chosen[arm] = 1;
      state[arm] = 1.0;
    }
    return chosen;
  }

  //! intermediate steps carry zero reward, the final one the episode reward
  void record_and_train(const episode& ep, double reward, rng& r) {
    for (std::size_t i = 0; i < ep.steps.size(); ++i) {
      replay_item item;
      item.state = ep.steps[i].state;
      item.action = ep.steps[i].action;
      const bool last = i + 1 == ep.steps.size();
      item.reward = last ? reward : 0.0;
      item.terminal = last;
      if (last) {
        item.next_state = ep.steps[i].state;
        item.next_state[item.action] = 1.0;
      } else {
        item.next_state = ep.steps[i + 1].state;
      }
      if (replay_.size() < cfg_.replay_capacity) {
        replay_.push_back(std::move(item));
      } else {
        replay_[replay_next_] = std::move(item);
      }
      replay_next_ = (replay_next_ + 1) % cfg_.replay_capacity;
    }
    if (replay_.empty()) return;

    std::vector<transition> batch;
    batch.reserve(cfg_.minibatch);
    for (std::size_t i = 0; i < cfg_.minibatch; ++i) {
      const replay_item& item = replay_[r.below(replay_.size())];
      double target = item.reward;
      if (!item.terminal) {
        const std::vector<double> target_next = qnet_forward(target_, item.next_state);
        if (kind_ == agent_kind::dqn) {
          target = dqn_target(item.reward, target_next, cfg_.gamma, false);
        } else {
          const std::vector<double> online_next = qnet_forward(online_, item.next_state);
          target = ddqn_target(item.reward, online_next, target_next, cfg_.gamma, false);
        }
      }
      batch.push_back({item.state, item.action, target});
    }
    qnet_train_step(online_, batch, cfg_.learning_rate);
    soft_update(online_, target_, cfg_.tau);
  }

  static nlohmann::json net_json(const qnet& net) {
    return {{"num_arms", net.num_arms}, {"hidden", net.hidden}, {"w1", net.w1},
            {"b1", net.b1},             {"w2", net.w2},         {"b2", net.b2},
            {"w3", net.w3},             {"b3", net.b3}};
  }

  static qnet net_from_json(const nlohmann::json& j) {
    qnet net;
    net.num_arms = j.at("num_arms").get<std::uint32_t>();
    net.hidden = j.at("hidden").get<std::uint32_t>();
    net.w1 = j.at("w1").get<std::vector<double>>();
    net.b1 = j.at("b1").get<std::vector<double>>();
    net.w2 = j.at("w2").get<std::vector<double>>();
    net.b2 = j.at("b2").get<std::vector<double>>();
    net.w3 = j.at("w3").get<std::vector<double>>();
    net.b3 = j.at("b3").get<std::vector<double>>();
    return net;
  }

  agent_kind kind_;
  agent_config cfg_;
  double epsilon_;
  bandit_state state_;
  qnet online_;
  qnet target_;
  std::vector<replay_item> replay_;
  std::size_t replay_next_ = 0;
  std::deque<episode> pending_;
};

} // namespace celltune
