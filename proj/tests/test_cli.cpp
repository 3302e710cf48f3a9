#include <catch2/catch_amalgamated.hpp>

#include <celltune/cell_library.hpp>
#include <celltune/pareto.hpp>

#include <nlohmann/json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>
#include <vector>

namespace fs = std::filesystem;

namespace {

struct tool_result {
  int exit_code = -1;
  std::string out;
};

tool_result run_tool(const std::string& args) {
  const std::string cmd = std::string("\"") + CELLTUNE_TOOL_PATH + "\" " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[512];
  while (true) {
    const std::size_t n = std::fread(buf, 1, sizeof(buf), pipe);
    if (n == 0) break;
    out.append(buf, n);
  }
  const int status = pclose(pipe);
  return {WEXITSTATUS(status), out};
}

//! scratch directory removed when the test section ends
struct temp_dir {
  fs::path path;

  temp_dir() {
    static int counter = 0;
    path = fs::temp_directory_path() /
           ("celltune_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::create_directories(path);
  }
  ~temp_dir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  REQUIRE(out.good());
}

std::string last_line(const std::string& text) {
  std::size_t end = text.size();
  while (end > 0 && text[end - 1] == '\n') --end;
  const std::size_t start = text.rfind('\n', end - 1);
  return text.substr(start == std::string::npos ? 0 : start + 1, end - (start + 1));
}

std::string drop_wall_time(const std::string& csv) {
  std::string out;
  std::size_t pos = 0;
  while (pos < csv.size()) {
    std::size_t end = csv.find('\n', pos);
    if (end == std::string::npos) end = csv.size();
    const std::string line = csv.substr(pos, end - pos);
    const std::size_t c1 = line.find(',');
    const std::size_t c2 = line.find(',', c1 + 1);
    out += line.substr(0, c1 + 1);
    out += line.substr(c2 + 1);
    out += '\n';
    pos = end + 1;
  }
  return out;
}

const std::string tiny = std::string(CELLTUNE_FIXTURE_DIR) + "/tiny.blif";
const std::string toy7 = std::string(CELLTUNE_FIXTURE_DIR) + "/toy7.lib";

} // namespace

TEST_CASE("map writes its two artifacts and a baseline status line") {
  temp_dir dir;
  const tool_result res =
      run_tool("map --design \"" + tiny + "\" --lib \"" + toy7 + "\" --out \"" +
               dir.path.string() + "\"");
  REQUIRE(res.exit_code == 0);

  const std::string status = last_line(res.out);
  CHECK(status.starts_with("status=ok "));
  CHECK(status.find(" adp_norm=1") != std::string::npos);

  const nlohmann::json jt = nlohmann::json::parse(slurp(dir.path / "timing.json"));
  CHECK(jt.at("adp_norm") == 1.0);
  CHECK(jt.at("delay").is_number());
  CHECK(jt.at("area").is_number());
  CHECK(jt.contains("critical_path"));

  const std::string netlist = slurp(dir.path / "netlist.txt");
  CHECK(netlist.find("gate ") != std::string::npos);
  CHECK(netlist.find("output ") != std::string::npos);
}

TEST_CASE("missing inputs exit through the io path") {
  const tool_result res = run_tool("map --design /nonexistent.blif --lib \"" + toy7 + "\"");
  CHECK(res.exit_code == 3);
  CHECK(last_line(res.out) == "status=io_error exit=3");
}

TEST_CASE("bad flags and bad values exit through the config path") {
  CHECK(run_tool("map --no-such-flag").exit_code == 4);
  CHECK(run_tool("tune --design \"" + tiny + "\" --lib \"" + toy7 + "\" --agent sarsa")
            .exit_code == 4);
  CHECK(run_tool("sample --design \"" + tiny + "\" --lib \"" + toy7 + "\"").exit_code == 4);
  CHECK(run_tool("").exit_code == 4);
  CHECK(run_tool("--help").exit_code == 0);
}

TEST_CASE("tune writes four artifacts and repeats itself byte for byte") {
  temp_dir first;
  temp_dir second;
  const std::string flags = "tune --design \"" + tiny + "\" --lib \"" + toy7 +
                            "\" --agent ucb --size-min 2 --size-max 5 --max-iters 6 --seed 7"
                            " --out \"";

  const tool_result res_a = run_tool(flags + first.path.string() + "\"");
  REQUIRE(res_a.exit_code == 0);
  CHECK(last_line(res_a.out).starts_with("status=ok best_adp="));

  const tool_result res_b = run_tool(flags + second.path.string() + "\"");
  REQUIRE(res_b.exit_code == 0);

  CHECK(drop_wall_time(slurp(first.path / "trace.csv")) ==
        drop_wall_time(slurp(second.path / "trace.csv")));
  CHECK(slurp(first.path / "pareto.csv") == slurp(second.path / "pareto.csv"));
  CHECK(slurp(first.path / "agent.json") == slurp(second.path / "agent.json"));
  CHECK(slurp(first.path / "summary.json") == slurp(second.path / "summary.json"));

  const nlohmann::json summary = nlohmann::json::parse(slurp(first.path / "summary.json"));
  CHECK(summary.at("config").at("agent") == "ucb");
  CHECK(summary.at("config").at("size_min") == 2);
  CHECK(summary.at("episodes").at("ok").get<int>() +
            summary.at("episodes").at("map_failure").get<int>() ==
        6);
}

TEST_CASE("a config file fills flags the command line leaves open") {
  temp_dir dir;
  const fs::path cfg = dir.path / "run.json";
  spit(cfg, "{\"agent\": \"epsilon\", \"size-min\": 3, \"size-max\": 6, \"max-iters\": 4,"
            " \"seed\": 9, \"design\": \"" + tiny + "\", \"lib\": \"" + toy7 + "\"}\n");

  // --max-iters on the command line outranks the file's 4
  const tool_result res = run_tool("tune --config \"" + cfg.string() + "\" --max-iters 2 --out \"" +
                                   (dir.path / "run").string() + "\"");
  REQUIRE(res.exit_code == 0);

  const nlohmann::json summary = nlohmann::json::parse(slurp(dir.path / "run" / "summary.json"));
  CHECK(summary.at("config").at("agent") == "epsilon");
  CHECK(summary.at("config").at("size_min") == 3);
  CHECK(summary.at("config").at("size_max") == 6);
  CHECK(summary.at("config").at("max_iters") == 2);
  CHECK(summary.at("config").at("seed") == 9);

  spit(cfg, "{\"agnet\": \"ucb\"}\n");
  CHECK(run_tool("tune --config \"" + cfg.string() + "\"").exit_code == 4);
}

TEST_CASE("the pareto command rebuilds a deduplicated frontier") {
  temp_dir dir;
  const fs::path trace = dir.path / "trace.csv";
  spit(trace,
       "iter,wall_time,subset_size,status,delay,area,adp_norm,reward,best_adp_so_far\n"
       "1,0.1,3,ok,2,10,0.5,-0.5,0.5\n"
       "2,0.2,3,map_failure,,,,-2,0.5\n"
       "3,0.3,4,ok,3,3,0.4,-0.4,0.4\n"
       "4,0.4,4,ok,2,10,0.5,-0.5,0.4\n"
       "5,0.5,5,ok,1,20,0.6,-0.6,0.4\n");

  const tool_result res = run_tool("pareto --trace \"" + trace.string() + "\" --out \"" +
                                   dir.path.string() + "\"");
  REQUIRE(res.exit_code == 0);
  CHECK(last_line(res.out) == "status=ok points=3");
  CHECK(slurp(dir.path / "pareto.csv") == "delay,area,subset\n2,10,\n3,3,\n1,20,\n");

  spit(trace, "delay,area\n1,2\n");
  CHECK(run_tool("pareto --trace \"" + trace.string() + "\" --out \"" + dir.path.string() +
                 "\"").exit_code == 1);
}

TEST_CASE("import-liberty round-trips through the native loader") {
  temp_dir dir;
  const tool_result res = run_tool("import-liberty --lib \"" + toy7 + "\" --out \"" +
                                   dir.path.string() + "\"");
  REQUIRE(res.exit_code == 0);
  CHECK(last_line(res.out) == "status=ok cells=6 skipped=2");

  const celltune::cell_library lib = celltune::load_native(slurp(dir.path / "library.json"));
  CHECK(lib.size() == 6);

  const nlohmann::json report = nlohmann::json::parse(slurp(dir.path / "import_report.json"));
  CHECK(report.at("kept").size() == 6);
  REQUIRE(report.at("skipped").size() == 2);
  CHECK(report.at("skipped").at(0).contains("reason"));
}
