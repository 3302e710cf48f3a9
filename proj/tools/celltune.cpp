/*!
  \file celltune.cpp
  \brief Command-line workbench over the celltune library

  Subcommands: map, tune, sample, import-liberty, pareto. Every run ends
  with one machine-parsable status line on stdout; human diagnostics go to
  stderr. Exit codes: 0 success, 1 input parse errors, 2 mapping failure,
  3 I/O errors, 4 configuration errors.
*/

#include <celltune/celltune.hpp>

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace fs = std::filesystem;
using celltune::detail::format_double;

namespace {

//! every flag of every subcommand; a config file may preload any of them
struct cli_settings {
  std::string config_path;
  std::string design;
  std::string design_format = "auto";
  std::string lib;
  std::string lib_format = "auto";
  std::string out = ".";
  std::string mode = "delay";
  double po_load = 1.0;
  unsigned max_passes = 10;
  unsigned cut_limit = 8;

  std::string agent = "ucb";
  std::size_t size_min = 1;
  std::size_t size_max = 0;
  std::size_t step = 1;
  std::size_t batch = 1;
  std::size_t max_iters = 50;
  double timeout = std::numeric_limits<double>::infinity();
  std::size_t jobs = 0;
  std::uint64_t seed = 1;
  double failure_penalty = -2.0;

  double epsilon = 0.1;
  double epsilon_decay = 0.995;
  double epsilon_min = 0.01;
  double ucb_c = 1.0;
  double gamma = 0.99;
  double tau = 0.005;
  double lr = 1e-3;
  double init_p = 0.0;
  std::size_t replay = 1000;
  std::size_t minibatch = 32;

  std::vector<std::string> ranges;
  std::size_t samples = 50;

  std::string trace;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw celltune::io_error("cannot read \"" + path + "\"");
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) {
    throw celltune::io_error("cannot write \"" + path.string() + "\"");
  }
}

fs::path ensure_out_dir(const std::string& out) {
  try {
    fs::create_directories(out);
  } catch (const fs::filesystem_error& e) {
    throw celltune::io_error("cannot create output directory \"" + out + "\": " + e.what());
  }
  return fs::path(out);
}

celltune::map_mode parse_mode(const std::string& text) {
  if (text == "delay") return celltune::map_mode::delay_driven;
  if (text == "area") return celltune::map_mode::area_driven;
  throw celltune::config_error("unknown mode \"" + text + "\"; use delay or area");
}

celltune::aig load_design(const cli_settings& s) {
  if (s.design.empty()) {
    throw celltune::config_error("no design given; pass --design");
  }
  const std::string text = read_file(s.design);
  std::string fmt = s.design_format;
  if (fmt == "auto") {
    if (s.design.ends_with(".blif")) {
      fmt = "blif";
    } else if (s.design.ends_with(".aag")) {
      fmt = "aiger";
    } else {
      throw celltune::config_error("cannot tell the format of \"" + s.design +
                                   "\"; pass --design-format");
    }
  }
  if (fmt == "blif") return celltune::parse_blif(text);
  if (fmt == "aiger") return celltune::parse_aiger_ascii(text);
  throw celltune::config_error("unknown design format \"" + fmt + "\"; use blif or aiger");
}

celltune::cell_library load_library(const cli_settings& s) {
  if (s.lib.empty()) {
    throw celltune::config_error("no library given; pass --lib");
  }
  const std::string text = read_file(s.lib);
  std::string fmt = s.lib_format;
  if (fmt == "auto") {
    if (s.lib.ends_with(".lib")) {
      fmt = "liberty";
    } else if (s.lib.ends_with(".json")) {
      fmt = "native";
    } else {
      throw celltune::config_error("cannot tell the format of \"" + s.lib +
                                   "\"; pass --lib-format");
    }
  }
  if (fmt == "native") return celltune::load_native(text);
  if (fmt != "liberty") {
    throw celltune::config_error("unknown library format \"" + fmt +
                                 "\"; use native or liberty");
  }
  celltune::liberty_import_result res = celltune::import_liberty(text);
  if (!res.report.skipped.empty()) {
    std::cerr << "note: liberty import kept " << res.report.kept.size() << " cells, skipped "
              << res.report.skipped.size() << '\n';
  }
  return std::move(res.library);
}

celltune::eval_params flow_params(const cli_settings& s) {
  celltune::eval_params p;
  p.mode = parse_mode(s.mode);
  p.po_load = s.po_load;
  p.max_passes = s.max_passes;
  p.cut_limit = s.cut_limit;
  return p;
}

std::size_t parse_count(std::string_view text, const std::string& whole) {
  std::size_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw celltune::config_error("range \"" + whole + "\" must look like lo:hi");
  }
  return value;
}

std::pair<std::size_t, std::size_t> parse_range(const std::string& text) {
  const std::size_t colon = text.find(':');
  if (colon == std::string::npos) {
    throw celltune::config_error("range \"" + text + "\" must look like lo:hi");
  }
  return {parse_count(std::string_view(text).substr(0, colon), text),
          parse_count(std::string_view(text).substr(colon + 1), text)};
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t comma = line.find(',', pos);
    if (comma == std::string::npos) {
      out.push_back(line.substr(pos));
      return out;
    }
    out.push_back(line.substr(pos, comma - pos));
    pos = comma + 1;
  }
}

int cmd_map(const cli_settings& s) {
  const celltune::aig g = load_design(s);
  const celltune::cell_library lib = load_library(s);
  const celltune::eval_params params = flow_params(s);
  const fs::path out = ensure_out_dir(s.out);

  const celltune::mapped_netlist net =
      celltune::run_flow(g, celltune::full_sublibrary(lib), params);
  const celltune::timing_report rep = celltune::sta(net, lib, params.po_load);

  nlohmann::json jt = celltune::timing_json(rep);
  jt["adp_norm"] = 1.0;
  write_file(out / "netlist.txt", net.serialize(lib));
  write_file(out / "timing.json", jt.dump(2) + "\n");

  std::cout << "status=ok delay=" << format_double(rep.delay) << " area="
            << format_double(rep.area) << " adp_norm=1\n";
  return 0;
}

celltune::tune_config tuner_config(const cli_settings& s) {
  celltune::tune_config cfg;
  cfg.size_min = s.size_min;
  cfg.size_max = s.size_max;
  cfg.size_step = s.step;
  cfg.batch_size = s.batch;
  cfg.max_iters = s.max_iters;
  cfg.timeout = s.timeout;
  cfg.kind = celltune::agent_kind_from_string(s.agent);
  cfg.agent_cfg.epsilon = s.epsilon;
  cfg.agent_cfg.epsilon_decay = s.epsilon_decay;
  cfg.agent_cfg.epsilon_min = s.epsilon_min;
  cfg.agent_cfg.ucb_c = s.ucb_c;
  cfg.agent_cfg.gamma = s.gamma;
  cfg.agent_cfg.tau = s.tau;
  cfg.agent_cfg.learning_rate = s.lr;
  cfg.agent_cfg.init_p = s.init_p;
  cfg.agent_cfg.replay_capacity = s.replay;
  cfg.agent_cfg.minibatch = s.minibatch;
  cfg.agent_cfg.seed = s.seed;
  cfg.mode = parse_mode(s.mode);
  cfg.po_load = s.po_load;
  cfg.max_passes = s.max_passes;
  cfg.cut_limit = s.cut_limit;
  cfg.failure_penalty = s.failure_penalty;
  cfg.jobs = s.jobs;
  cfg.seed = s.seed;
  return cfg;
}

int cmd_tune(const cli_settings& s) {
  const celltune::aig g = load_design(s);
  const celltune::cell_library lib = load_library(s);
  const celltune::tune_config cfg = tuner_config(s);
  const fs::path out = ensure_out_dir(s.out);

  const celltune::tune_result res = celltune::tune(g, lib, cfg);

  write_file(out / "trace.csv", celltune::trace_csv(res.trace));
  write_file(out / "pareto.csv", celltune::pareto_csv(res.pareto));
  write_file(out / "summary.json", celltune::run_summary(res, cfg, lib).dump(2) + "\n");
  write_file(out / "agent.json", res.agent_checkpoint.dump(2) + "\n");

  std::cout << "status=ok best_adp=" << format_double(res.best.adp_norm) << " best_delay="
            << format_double(res.best.delay) << " best_area=" << format_double(res.best.area)
            << " episodes=" << res.trace.size() << " map_failures=" << res.failed_episodes
            << '\n';
  return 0;
}

int cmd_sample(const cli_settings& s) {
  if (s.ranges.empty()) {
    throw celltune::config_error("no subset sizes given; pass --range lo:hi");
  }
  std::vector<std::pair<std::size_t, std::size_t>> ranges;
  ranges.reserve(s.ranges.size());
  for (const std::string& text : s.ranges) {
    ranges.push_back(parse_range(text));
  }

  const celltune::aig g = load_design(s);
  const celltune::cell_library lib = load_library(s);
  const fs::path out = ensure_out_dir(s.out);

  const celltune::sample_study study =
      celltune::random_sample_study(g, lib, ranges, s.samples, flow_params(s), s.seed);
  write_file(out / "scatter.csv", celltune::scatter_csv(study));

  std::size_t failures = 0;
  for (const celltune::sample_row& row : study.rows) {
    if (!row.ok) failures += 1;
  }
  std::cout << "status=ok rows=" << study.rows.size() << " map_failures=" << failures << '\n';
  return 0;
}

int cmd_import_liberty(const cli_settings& s) {
  if (s.lib.empty()) {
    throw celltune::config_error("no library given; pass --lib");
  }
  const std::string text = read_file(s.lib);
  const celltune::liberty_import_result res = celltune::import_liberty(text);
  const fs::path out = ensure_out_dir(s.out);

  write_file(out / "library.json", celltune::save_native(res.library));

  nlohmann::json jr;
  jr["kept"] = res.report.kept;
  jr["skipped"] = nlohmann::json::array();
  for (const auto& skip : res.report.skipped) {
    jr["skipped"].push_back({{"cell", skip.cell}, {"reason", skip.reason}});
  }
  jr["warnings"] = res.report.warnings;
  write_file(out / "import_report.json", jr.dump(2) + "\n");

  std::cout << "status=ok cells=" << res.report.kept.size() << " skipped="
            << res.report.skipped.size() << '\n';
  return 0;
}

//! rebuilds the frontier from a trace; subsets are not in the trace, so the
//! subset column of the result stays empty
int cmd_pareto(const cli_settings& s) {
  if (s.trace.empty()) {
    throw celltune::config_error("no trace given; pass --trace");
  }
  const std::string text = read_file(s.trace);
  const fs::path out = ensure_out_dir(s.out);

  std::vector<celltune::pareto_point> frontier;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string::npos) end = text.size();
    const std::string line = text.substr(pos, end - pos);
    pos = end + 1;
    line_no += 1;

    if (line_no == 1) {
      if (!line.starts_with("iter,wall_time,subset_size,status,delay,area,")) {
        throw celltune::parse_error("unrecognized trace header", line_no);
      }
      continue;
    }
    if (line.empty()) continue;
    const std::vector<std::string> f = split_fields(line);
    if (f.size() < 6) {
      throw celltune::parse_error("trace row with too few columns", line_no);
    }
    if (f[3] != "ok") continue;
    double delay = 0.0;
    double area = 0.0;
    const auto [dp, dec] = std::from_chars(f[4].data(), f[4].data() + f[4].size(), delay);
    const auto [ap, aec] = std::from_chars(f[5].data(), f[5].data() + f[5].size(), area);
    if (dec != std::errc{} || dp != f[4].data() + f[4].size() || aec != std::errc{} ||
        ap != f[5].data() + f[5].size()) {
      throw celltune::parse_error("trace row with malformed metrics", line_no);
    }
    // rows carry no subsets, so repeats of one outcome add nothing
    const bool seen = std::any_of(frontier.begin(), frontier.end(),
                                  [&](const celltune::pareto_point& p) {
                                    return p.delay == delay && p.area == area;
                                  });
    if (!seen) {
      celltune::pareto_insert(frontier, {delay, area, {}});
    }
  }
  if (line_no == 0) {
    throw celltune::parse_error("empty trace", 1);
  }

  write_file(out / "pareto.csv", celltune::pareto_csv(frontier));
  std::cout << "status=ok points=" << frontier.size() << '\n';
  return 0;
}

/*! \brief Preloads settings from --config before the real parse.
 *
 * Values become the defaults the flag parser starts from, so flags given on
 * the command line always win. Unknown keys are rejected to catch typos.
 */
void apply_config_file(const std::string& path, cli_settings& s) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw celltune::config_error("config file: " + std::string(e.what()));
  }
  if (!j.is_object()) {
    throw celltune::config_error("config file must hold one JSON object");
  }
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "design") s.design = value.get<std::string>();
      else if (key == "design-format") s.design_format = value.get<std::string>();
      else if (key == "lib") s.lib = value.get<std::string>();
      else if (key == "lib-format") s.lib_format = value.get<std::string>();
      else if (key == "out") s.out = value.get<std::string>();
      else if (key == "mode") s.mode = value.get<std::string>();
      else if (key == "po-load") s.po_load = value.get<double>();
      else if (key == "max-passes") s.max_passes = value.get<unsigned>();
      else if (key == "cut-limit") s.cut_limit = value.get<unsigned>();
      else if (key == "agent") s.agent = value.get<std::string>();
      else if (key == "size-min") s.size_min = value.get<std::size_t>();
      else if (key == "size-max") s.size_max = value.get<std::size_t>();
      else if (key == "step") s.step = value.get<std::size_t>();
      else if (key == "batch") s.batch = value.get<std::size_t>();
      else if (key == "max-iters") s.max_iters = value.get<std::size_t>();
      else if (key == "timeout") s.timeout = value.get<double>();
      else if (key == "jobs") s.jobs = value.get<std::size_t>();
      else if (key == "seed") s.seed = value.get<std::uint64_t>();
      else if (key == "failure-penalty") s.failure_penalty = value.get<double>();
      else if (key == "epsilon") s.epsilon = value.get<double>();
      else if (key == "epsilon-decay") s.epsilon_decay = value.get<double>();
      else if (key == "epsilon-min") s.epsilon_min = value.get<double>();
      else if (key == "ucb-c") s.ucb_c = value.get<double>();
      else if (key == "gamma") s.gamma = value.get<double>();
      else if (key == "tau") s.tau = value.get<double>();
      else if (key == "lr") s.lr = value.get<double>();
      else if (key == "init-p") s.init_p = value.get<double>();
      else if (key == "replay") s.replay = value.get<std::size_t>();
      else if (key == "minibatch") s.minibatch = value.get<std::size_t>();
      else if (key == "range") s.ranges = value.get<std::vector<std::string>>();
      else if (key == "samples") s.samples = value.get<std::size_t>();
      else if (key == "trace") s.trace = value.get<std::string>();
      else throw celltune::config_error("config file: unknown setting \"" + key + "\"");
    }
  } catch (const nlohmann::json::exception& e) {
    throw celltune::config_error("config file: " + std::string(e.what()));
  }
}

std::string find_config_arg(int argc, char** argv) {
  std::string path;
  for (int i = 1; i < argc; ++i) {
    const std::string_view arg = argv[i];
    if (arg == "--config" && i + 1 < argc) {
      path = argv[i + 1];
    } else if (arg.starts_with("--config=")) {
      path = std::string(arg.substr(9));
    }
  }
  return path;
}

void add_io_options(CLI::App* cmd, cli_settings& s) {
  cmd->add_option("--config", s.config_path, "JSON file preloading any flag of this command");
  cmd->add_option("--design", s.design, "design file (.blif or .aag)");
  cmd->add_option("--design-format", s.design_format, "blif | aiger | auto");
  cmd->add_option("--lib", s.lib, "cell library (native .json or liberty .lib)");
  cmd->add_option("--lib-format", s.lib_format, "native | liberty | auto");
  cmd->add_option("--out", s.out, "output directory, created if missing");
}

void add_flow_options(CLI::App* cmd, cli_settings& s) {
  cmd->add_option("--mode", s.mode, "delay | area");
  cmd->add_option("--po-load", s.po_load, "capacitive load on every primary output");
  cmd->add_option("--max-passes", s.max_passes, "bound on sizing passes");
  cmd->add_option("--cut-limit", s.cut_limit, "cuts kept per node");
}

int fail(int code, const std::string& category, const std::string& what) {
  std::cerr << "celltune: " << what << '\n';
  std::cout << "status=" << category << " exit=" << code << '\n';
  return code;
}

} // namespace

int main(int argc, char** argv) {
  cli_settings s;

  CLI::App app{"standard-cell library subset tuning workbench"};
  app.require_subcommand(1);

  CLI::App* map_cmd = app.add_subcommand("map", "map a design with the whole library");
  add_io_options(map_cmd, s);
  add_flow_options(map_cmd, s);

  CLI::App* tune_cmd = app.add_subcommand("tune", "search for a better library subset");
  add_io_options(tune_cmd, s);
  add_flow_options(tune_cmd, s);
  tune_cmd->add_option("--agent", s.agent, "epsilon | ucb | dqn | ddqn");
  tune_cmd->add_option("--size-min", s.size_min, "smallest subset size");
  tune_cmd->add_option("--size-max", s.size_max, "largest subset size, 0 = whole library");
  tune_cmd->add_option("--step", s.step, "subset size grid step");
  tune_cmd->add_option("--batch", s.batch, "episodes selected per update round");
  tune_cmd->add_option("--max-iters", s.max_iters, "episode budget");
  tune_cmd->add_option("--timeout", s.timeout, "wall-clock budget in seconds");
  tune_cmd->add_option("--jobs", s.jobs, "parallel evaluations, 0 = batch size");
  tune_cmd->add_option("--seed", s.seed, "run seed");
  tune_cmd->add_option("--failure-penalty", s.failure_penalty, "reward for uncoverable subsets");
  tune_cmd->add_option("--epsilon", s.epsilon, "initial exploration rate");
  tune_cmd->add_option("--epsilon-decay", s.epsilon_decay, "per-episode epsilon factor");
  tune_cmd->add_option("--epsilon-min", s.epsilon_min, "epsilon floor");
  tune_cmd->add_option("--ucb-c", s.ucb_c, "exploration weight of the ucb bonus");
  tune_cmd->add_option("--gamma", s.gamma, "discount factor");
  tune_cmd->add_option("--tau", s.tau, "target network soft-update rate");
  tune_cmd->add_option("--lr", s.lr, "q-network learning rate");
  tune_cmd->add_option("--init-p", s.init_p, "optimistic initial arm estimate");
  tune_cmd->add_option("--replay", s.replay, "replay buffer capacity");
  tune_cmd->add_option("--minibatch", s.minibatch, "transitions per training step");

  CLI::App* sample_cmd = app.add_subcommand("sample", "evaluate uniform random subsets");
  add_io_options(sample_cmd, s);
  add_flow_options(sample_cmd, s);
  sample_cmd->add_option("--range", s.ranges, "subset size range lo:hi, repeatable");
  sample_cmd->add_option("--samples", s.samples, "subsets drawn per range");
  sample_cmd->add_option("--seed", s.seed, "sampling seed");

  CLI::App* import_cmd =
      app.add_subcommand("import-liberty", "convert a liberty file to the native format");
  import_cmd->add_option("--config", s.config_path, "JSON file preloading any flag");
  import_cmd->add_option("--lib", s.lib, "liberty file to import");
  import_cmd->add_option("--out", s.out, "output directory, created if missing");

  CLI::App* pareto_cmd =
      app.add_subcommand("pareto", "recompute the frontier from a trace.csv");
  pareto_cmd->add_option("--config", s.config_path, "JSON file preloading any flag");
  pareto_cmd->add_option("--trace", s.trace, "trace.csv from a tune run");
  pareto_cmd->add_option("--out", s.out, "output directory, created if missing");

  try {
    const std::string config_path = find_config_arg(argc, argv);
    if (!config_path.empty()) {
      apply_config_file(config_path, s);
    }
  } catch (const celltune::config_error& e) {
    return fail(4, "config_error", e.what());
  } catch (const celltune::io_error& e) {
    return fail(3, "io_error", e.what());
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail(4, "config_error", e.what());
  }

  try {
    if (map_cmd->parsed()) return cmd_map(s);
    if (tune_cmd->parsed()) return cmd_tune(s);
    if (sample_cmd->parsed()) return cmd_sample(s);
    if (import_cmd->parsed()) return cmd_import_liberty(s);
    if (pareto_cmd->parsed()) return cmd_pareto(s);
    return fail(4, "config_error", "no command given");
  } catch (const celltune::mapping_failure& e) {
    return fail(2, "map_failure", e.what());
  } catch (const celltune::config_error& e) {
    return fail(4, "config_error", e.what());
  } catch (const celltune::io_error& e) {
    return fail(3, "io_error", e.what());
  } catch (const celltune::error& e) {
    return fail(1, "parse_error", e.what());
  } catch (const std::exception& e) {
    return fail(1, "internal_error", e.what());
  }
}
