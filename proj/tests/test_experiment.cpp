#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "helpers.hpp"
#include "leobf/csv.hpp"

using namespace leobf;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string small_config_json(const char* solver) {
  std::string s = R"({
    "geometry": {"serving_count": 3, "ut_count": 5},
    "channel": {"array": {"n_h": 2, "n_v": 2}},
    "scheduler": "cs",
    "solver": ")";
  s += solver;
  s += R"(",
    "topology": {"kind": "mesh"},
    "u_max": 2,
    "max_outer": 25,
    "tol": 1e-6,
    "n_drops": 2,
    "seed": 11
  })";
  return s;
}

}  // namespace

TEST_CASE("config parsing and validation") {
  const ExperimentConfig cfg = config_from_json_text(small_config_json("decentralized"));
  CHECK(cfg.geometry.serving_count == 3);
  CHECK(cfg.geometry.ut_count == 5);
  CHECK(cfg.channel.array.n_h == 2);
  CHECK(cfg.solver == SolverKind::kDecentralized);
  CHECK(cfg.topology == TopologyKind::kMesh);
  CHECK(cfg.u_max == 2);
  CHECK(cfg.n_drops == 2);
  CHECK(cfg.seed == 11);

  CHECK_THROWS_AS(config_from_json_text(R"({"solver": "magic"})"), ConfigError);
  CHECK_THROWS_AS(config_from_json_text(R"({"scheduler": "xx"})"), ConfigError);
  CHECK_THROWS_AS(config_from_json_text(R"({"channel": {"kappa_db_range": [1]}})"), ConfigError);
  CHECK_THROWS_AS(config_from_json_text(R"({"topology": {"kind": "blob"}})"), ConfigError);
}

TEST_CASE("config hash is stable and sensitive") {
  const ExperimentConfig a = config_from_json_text(small_config_json("centralized"));
  const ExperimentConfig b = config_from_json_text(small_config_json("centralized"));
  CHECK(config_hash(a) == config_hash(b));
  ExperimentConfig c = a;
  c.seed = 12;
  CHECK(config_hash(a) != config_hash(c));
}

TEST_CASE("apply_axis") {
  const ExperimentConfig base = config_from_json_text(small_config_json("centralized"));
  CHECK(apply_axis(base, "power_dbm", 55.0).power_budget_dbm == 55.0);
  const ExperimentConfig n = apply_axis(base, "n_antennas", 25.0);
  CHECK(n.channel.array.n_h == 5);
  CHECK(n.channel.array.n_v == 5);
  CHECK_THROWS_AS(apply_axis(base, "n_antennas", 12.0), ConfigError);
  CHECK(apply_axis(base, "n_sats", 4.0).geometry.serving_count == 4);
  CHECK(apply_axis(base, "n_uts", 9.0).geometry.ut_count == 9);
  CHECK_THROWS_AS(apply_axis(base, "frequency", 1.0), ConfigError);
}

TEST_CASE("golden trace header") {
  const std::vector<std::string> want{"iter",
                                      "sum_rate_bps_hz",
                                      "objective",
                                      "primal_residual",
                                      "overhead_cum_s0",
                                      "overhead_cum_s1",
                                      "overhead_cum_s2",
                                      "overhead_cum_s3",
                                      "overhead_cum_s4"};
  CHECK(trace_header(5) == want);
}

TEST_CASE("csv numbers round-trip doubles") {
  CHECK(csv_num(0.1) == "0.10000000000000001");
  CHECK(csv_num(static_cast<long long>(42)) == "42");
}

TEST_CASE("simulate is byte-identical across runs and worker counts") {
  const ExperimentConfig cfg = config_from_json_text(small_config_json("decentralized"));
  const auto dir1 = std::filesystem::temp_directory_path() / "leobf_det_1";
  const auto dir2 = std::filesystem::temp_directory_path() / "leobf_det_2";
  std::filesystem::remove_all(dir1);
  std::filesystem::remove_all(dir2);
  setenv("LEOCOOPBF_THREADS", "1", 1);
  CHECK(cmd_simulate(cfg, dir1.string()) == 0);
  setenv("LEOCOOPBF_THREADS", "5", 1);
  CHECK(cmd_simulate(cfg, dir2.string()) == 0);
  unsetenv("LEOCOOPBF_THREADS");
  CHECK(slurp((dir1 / "summary.csv").string()) == slurp((dir2 / "summary.csv").string()));
  for (int d = 0; d < 2; ++d) {
    const std::string name = "trace_decentralized_drop" + std::to_string(d) + ".csv";
    CHECK(slurp((dir1 / name).string()) == slurp((dir2 / name).string()));
  }
}

TEST_CASE("mrt solver produces a single-row trace") {
  const ExperimentConfig cfg = config_from_json_text(small_config_json("mrt"));
  const auto dir = std::filesystem::temp_directory_path() / "leobf_mrt";
  std::filesystem::remove_all(dir);
  CHECK(cmd_simulate(cfg, dir.string()) == 0);
  const std::string trace = slurp((dir / "trace_mrt_drop0.csv").string());
  // header + one data row
  CHECK(std::count(trace.begin(), trace.end(), '\n') == 2);
}

TEST_CASE("infeasible scenes produce failure rows and a non-zero exit") {
  ExperimentConfig cfg = config_from_json_text(small_config_json("mrt"));
  cfg.geometry.planes = 1;
  cfg.geometry.sats_per_plane = 2;
  cfg.geometry.serving_count = 2;
  cfg.geometry.region_center_lon_deg = 90.0;
  const auto dir = std::filesystem::temp_directory_path() / "leobf_fail";
  std::filesystem::remove_all(dir);
  CHECK(cmd_simulate(cfg, dir.string()) == 1);
  const std::string summary = slurp((dir / "summary.csv").string());
  CHECK(summary.find("elevation") != std::string::npos);
}

TEST_CASE("sweep emits matching overhead columns") {
  ExperimentConfig cfg = config_from_json_text(small_config_json("decentralized"));
  cfg.n_drops = 1;
  const auto dir = std::filesystem::temp_directory_path() / "leobf_sweep";
  std::filesystem::remove_all(dir);
  CHECK(cmd_sweep(cfg, "n_uts", {4.0, 5.0}, dir.string()) == 0);
  const std::string sweep = slurp((dir / "sweep.csv").string());
  std::istringstream lines(sweep);
  std::string line;
  std::getline(lines, line);  // header
  int rows = 0;
  while (std::getline(lines, line)) {
    ++rows;
    // the last two columns (formula, counted) must be equal
    const auto last_comma = line.rfind(',');
    const auto prev_comma = line.rfind(',', last_comma - 1);
    const std::string counted = line.substr(last_comma + 1);
    const std::string formula = line.substr(prev_comma + 1, last_comma - prev_comma - 1);
    CHECK(counted == formula);
    CHECK(!counted.empty());
  }
  CHECK(rows == 2);
}
