/*!
  \file tuner.hpp
  \brief Exploration loop pairing an agent with the evaluation flow
*/

#pragma once

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <future>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "agent.hpp"
#include "aig.hpp"
#include "cell_library.hpp"
#include "errors.hpp"
#include "evaluate.hpp"
#include "pareto.hpp"
#include "rng.hpp"

namespace celltune {

/*! \brief One tuning run's knobs.
 *
 * size_max of 0 stands for the whole library. The run seed drives the
 * single generator behind selection, exploration and replay sampling; the
 * nested agent seed is only honored when an agent is driven standalone.
 */
struct tune_config {
  std::size_t size_min = 1;
  std::size_t size_max = 0;
  std::size_t size_step = 1;
  std::size_t batch_size = 1;
  std::size_t max_iters = 50;
  double timeout = std::numeric_limits<double>::infinity();
  agent_kind kind = agent_kind::ucb;
  agent_config agent_cfg;
  map_mode mode = map_mode::delay_driven;
  double po_load = 1.0;
  unsigned max_passes = 10;
  unsigned cut_limit = 8;
  double failure_penalty = -2.0;
  std::size_t jobs = 0;
  std::uint64_t seed = 1;
};

//! one episode in the trace; metric fields are meaningless on failure
struct trace_row {
  std::size_t iter = 0;
  double wall_time = 0.0;
  std::size_t subset_size = 0;
  bool ok = false;
  double delay = 0.0;
  double area = 0.0;
  double adp_norm = 0.0;
  double reward = 0.0;
  double best_adp = std::numeric_limits<double>::infinity();
};

//! selection plus its evaluated outcome
struct episode_outcome {
  std::vector<std::uint8_t> subset;
  std::size_t subset_size = 0;
  bool ok = false;
  qor q;
  double reward = 0.0;
};

struct tune_result {
  qor_baseline baseline;
  std::vector<trace_row> trace;
  std::vector<pareto_point> pareto;
  std::vector<std::uint8_t> best_subset;
  qor best;
  std::size_t ok_episodes = 0;
  std::size_t failed_episodes = 0;
  nlohmann::json agent_checkpoint;
};

namespace detail {

inline eval_params eval_params_of(const tune_config& cfg) {
  eval_params p;
  p.mode = cfg.mode;
  p.po_load = cfg.po_load;
  p.max_passes = cfg.max_passes;
  p.cut_limit = cfg.cut_limit;
  return p;
}

//! subset sizes form the grid size_min, size_min + step, ..., <= size_max
inline std::size_t draw_subset_size(const tune_config& cfg, rng& r) {
  const std::size_t steps = (cfg.size_max - cfg.size_min) / cfg.size_step + 1;
  return cfg.size_min + cfg.size_step * r.below(steps);
}

inline tune_config resolve_config(tune_config cfg, std::size_t num_cells) {
  if (cfg.size_max == 0) cfg.size_max = num_cells;
  if (cfg.size_min < 1 || cfg.size_min > cfg.size_max || cfg.size_max > num_cells) {
    throw config_error("subset size range " + std::to_string(cfg.size_min) + ".." +
                       std::to_string(cfg.size_max) + " does not fit a " +
                       std::to_string(num_cells) + "-cell library");
  }
  if (cfg.size_step < 1) throw config_error("size step must be at least 1");
  if (cfg.batch_size < 1) throw config_error("batch size must be at least 1");
  if (cfg.timeout < 0.0) throw config_error("timeout cannot be negative");
  if (cfg.jobs == 0) cfg.jobs = cfg.batch_size;
  return cfg;
}

inline episode_outcome evaluate_subset(const aig& g, const cell_library& lib,
                                       std::vector<std::uint8_t> subset,
                                       std::size_t subset_size, const tune_config& cfg,
                                       const qor_baseline& base) {
  episode_outcome out;
  out.subset = std::move(subset);
  out.subset_size = subset_size;
  try {
    out.q = evaluate(g, sub_library(lib, out.subset), base, eval_params_of(cfg));
    out.ok = true;
    out.reward = -out.q.adp_norm;
  } catch (const mapping_failure&) {
    out.ok = false;
    out.reward = cfg.failure_penalty;
  }
  return out;
}

//! shortest round-trip decimal form, identical on every run
inline std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

} // namespace detail

/*! \brief Runs one episode: draws a size from the grid, lets the agent pick
 * a subset and evaluates it.
 *
 * The reward is the negated normalized area-delay product, or the failure
 * penalty when the selection cannot cover the design. The episode stays
 * pending inside the agent; the caller settles it with observe(), which
 * also lets a coordinator batch several selections before any reward.
 */
inline episode_outcome run_episode(agent& a, const aig& g, const cell_library& lib,
                                   const tune_config& raw_cfg, const qor_baseline& base,
                                   rng& r) {
  const tune_config cfg = detail::resolve_config(raw_cfg, lib.size());
  const std::size_t n = detail::draw_subset_size(cfg, r);
  std::vector<std::uint8_t> subset = a.select(n, r);
  return detail::evaluate_subset(g, lib, std::move(subset), n, cfg, base);
}

/*! \brief The full tuning loop.
 *
 * Each outer iteration draws a batch of selections sequentially, evaluates
 * them in parallel (at most jobs at a time) and applies rewards in
 * submission order, so a run is byte-reproducible for a fixed seed and
 * batch size no matter how the evaluations are scheduled. The baseline
 * seeds the Pareto frontier. Timeout is checked before each batch and
 * again before recording it; a batch in flight when time runs out is
 * discarded whole, keeping the trace prefix-deterministic.
 */
inline tune_result tune(const aig& g, const cell_library& lib, const tune_config& raw_cfg) {
  const tune_config cfg = detail::resolve_config(raw_cfg, lib.size());
  const auto start = std::chrono::steady_clock::now();
  const auto elapsed = [&start]() {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };

  tune_result result;
  result.baseline = compute_baseline(g, lib, detail::eval_params_of(cfg));

  rng r(cfg.seed);
  agent a(cfg.kind, lib.size(), cfg.agent_cfg, r);

  // the untuned library is the reference point of the frontier and the
  // fallback best
  result.best_subset.assign(lib.size(), 1);
  result.best = {result.baseline.delay, result.baseline.area, 1.0};
  pareto_insert(result.pareto,
                {result.baseline.delay, result.baseline.area, result.best_subset});

  double best_adp = std::numeric_limits<double>::infinity();
  std::size_t episodes = 0;

  while (episodes < cfg.max_iters) {
    if (elapsed() >= cfg.timeout) break;
    const std::size_t batch = std::min(cfg.batch_size, cfg.max_iters - episodes);

    std::vector<std::vector<std::uint8_t>> subsets(batch);
    std::vector<std::size_t> sizes(batch);
    for (std::size_t k = 0; k < batch; ++k) {
      sizes[k] = detail::draw_subset_size(cfg, r);
      subsets[k] = a.select(sizes[k], r);
    }

    std::vector<episode_outcome> outcomes(batch);
    for (std::size_t wave = 0; wave < batch; wave += cfg.jobs) {
      const std::size_t wave_end = std::min(wave + cfg.jobs, batch);
      std::vector<std::future<episode_outcome>> futures;
      futures.reserve(wave_end - wave);
      for (std::size_t k = wave; k < wave_end; ++k) {
        futures.push_back(std::async(std::launch::async, [&, k]() {
          return detail::evaluate_subset(g, lib, subsets[k], sizes[k], cfg,
                                         result.baseline);
        }));
      }
      for (std::size_t k = wave; k < wave_end; ++k) {
        outcomes[k] = futures[k - wave].get();
      }
    }

    if (elapsed() >= cfg.timeout) {
      a.discard_pending();
      break;
    }

    for (episode_outcome& out : outcomes) {
      a.observe(out.subset, out.reward, r);
      episodes += 1;

      trace_row row;
      row.iter = episodes;
      row.wall_time = elapsed();
      row.subset_size = out.subset_size;
      row.ok = out.ok;
      row.reward = out.reward;
      if (out.ok) {
        row.delay = out.q.delay;
        row.area = out.q.area;
        row.adp_norm = out.q.adp_norm;
        result.ok_episodes += 1;
        pareto_insert(result.pareto, {out.q.delay, out.q.area, out.subset});
        if (out.q.adp_norm < best_adp) {
          best_adp = out.q.adp_norm;
          result.best = out.q;
          result.best_subset = out.subset;
        }
      } else {
        result.failed_episodes += 1;
      }
      row.best_adp = best_adp;
      result.trace.push_back(row);
    }
  }

  result.agent_checkpoint = a.checkpoint(r);
  return result;
}

//! uniform-random subset study; one scatter row per sampled selection
struct sample_row {
  std::size_t size = 0;
  bool ok = false;
  double delay = 0.0;
  double area = 0.0;
  double adp_norm = 0.0;
  bool is_baseline = false;
};

struct sample_study {
  qor_baseline baseline;
  std::vector<sample_row> rows;
};

/*! \brief Reproduces the sampling experiment: for each size range, draw
 * subsets uniformly (size uniform in the range, cells uniform without
 * replacement) and evaluate each one. The first row is the flagged
 * full-library baseline.
 */
inline sample_study random_sample_study(const aig& g, const cell_library& lib,
                                        const std::vector<std::pair<std::size_t, std::size_t>>& ranges,
                                        std::size_t samples_per_range,
                                        const eval_params& params, std::uint64_t seed) {
  for (const auto& [lo, hi] : ranges) {
    if (lo < 1 || lo > hi || hi > lib.size()) {
      throw config_error("sampling range " + std::to_string(lo) + ".." +
                         std::to_string(hi) + " does not fit a " +
                         std::to_string(lib.size()) + "-cell library");
    }
  }

  sample_study study;
  study.baseline = compute_baseline(g, lib, params);
  study.rows.push_back({lib.size(), true, study.baseline.delay, study.baseline.area,
                        1.0, true});

  rng r(seed);
  for (const auto& [lo, hi] : ranges) {
    for (std::size_t s = 0; s < samples_per_range; ++s) {
      const std::size_t n = lo + r.below(hi - lo + 1);
      std::vector<std::uint8_t> subset(lib.size(), 0);
      for (std::size_t pick = 0; pick < n;) {
        const std::size_t arm = r.below(lib.size());
        if (!subset[arm]) {
          subset[arm] = 1;
          ++pick;
        }
      }
      sample_row row;
      row.size = n;
      try {
        const qor q = evaluate(g, sub_library(lib, subset), study.baseline, params);
        row.ok = true;
        row.delay = q.delay;
        row.area = q.area;
        row.adp_norm = q.adp_norm;
      } catch (const mapping_failure&) {
        row.ok = false;
      }
      study.rows.push_back(row);
    }
  }
  return study;
}

//! trace table; metric cells are empty on failure rows and before any success
inline std::string trace_csv(const std::vector<trace_row>& trace) {
  std::string csv = "iter,wall_time,subset_size,status,delay,area,adp_norm,reward,best_adp_so_far\n";
  for (const trace_row& row : trace) {
    csv += std::to_string(row.iter);
    csv += ',';
    csv += detail::format_double(row.wall_time);
    csv += ',';
    csv += std::to_string(row.subset_size);
    csv += row.ok ? ",ok," : ",map_failure,";
    if (row.ok) {
      csv += detail::format_double(row.delay);
      csv += ',';
      csv += detail::format_double(row.area);
      csv += ',';
      csv += detail::format_double(row.adp_norm);
    } else {
      csv += ",,";
    }
    csv += ',';
    csv += detail::format_double(row.reward);
    csv += ',';
    if (row.best_adp != std::numeric_limits<double>::infinity()) {
      csv += detail::format_double(row.best_adp);
    }
    csv += '\n';
  }
  return csv;
}

//! frontier table; subsets render as one bit per library cell
inline std::string pareto_csv(const std::vector<pareto_point>& set) {
  std::string csv = "delay,area,subset\n";
  for (const pareto_point& pt : set) {
    csv += detail::format_double(pt.delay);
    csv += ',';
    csv += detail::format_double(pt.area);
    csv += ',';
    for (const std::uint8_t bit : pt.subset) {
      csv += bit ? '1' : '0';
    }
    csv += '\n';
  }
  return csv;
}

inline std::string scatter_csv(const sample_study& study) {
  std::string csv = "size,status,delay,area,adp_norm,baseline\n";
  for (const sample_row& row : study.rows) {
    csv += std::to_string(row.size);
    csv += row.ok ? ",ok," : ",map_failure,";
    if (row.ok) {
      csv += detail::format_double(row.delay);
      csv += ',';
      csv += detail::format_double(row.area);
      csv += ',';
      csv += detail::format_double(row.adp_norm);
    } else {
      csv += ",,";
    }
    csv += row.is_baseline ? ",1\n" : ",0\n";
  }
  return csv;
}

//! complete effective configuration echo plus results, for summary.json
inline nlohmann::json run_summary(const tune_result& result, const tune_config& raw_cfg,
                                  const cell_library& lib) {
  const tune_config cfg = detail::resolve_config(raw_cfg, lib.size());
  nlohmann::json j;
  j["config"] = {{"size_min", cfg.size_min},
                 {"size_max", cfg.size_max},
                 {"size_step", cfg.size_step},
                 {"batch_size", cfg.batch_size},
                 {"max_iters", cfg.max_iters},
                 {"timeout", std::isfinite(cfg.timeout) ? nlohmann::json(cfg.timeout)
                                                        : nlohmann::json()},
                 {"agent", to_string(cfg.kind)},
                 {"agent_config", agent_config_json(cfg.agent_cfg)},
                 {"mode", cfg.mode == map_mode::delay_driven ? "delay" : "area"},
                 {"po_load", cfg.po_load},
                 {"max_passes", cfg.max_passes},
                 {"cut_limit", cfg.cut_limit},
                 {"failure_penalty", cfg.failure_penalty},
                 {"jobs", cfg.jobs},
                 {"seed", cfg.seed}};
  j["baseline"] = {{"delay", result.baseline.delay}, {"area", result.baseline.area}};

  std::vector<std::string> best_names;
  for (std::size_t i = 0; i < result.best_subset.size(); ++i) {
    if (result.best_subset[i]) best_names.push_back(lib.at(i).name);
  }
  j["best"] = {{"cells", best_names},
               {"delay", result.best.delay},
               {"area", result.best.area},
               {"adp_norm", result.best.adp_norm}};

  nlohmann::json frontier = nlohmann::json::array();
  for (const pareto_point& pt : result.pareto) {
    std::string bits;
    for (const std::uint8_t bit : pt.subset) {
      bits += bit ? '1' : '0';
    }
    frontier.push_back({{"delay", pt.delay}, {"area", pt.area}, {"subset", bits}});
  }
  j["pareto"] = frontier;
  j["episodes"] = {{"ok", result.ok_episodes}, {"map_failure", result.failed_episodes}};
  return j;
}

} // namespace celltune
