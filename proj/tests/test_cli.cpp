#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "ddfiber/config.hpp"

namespace fs = std::filesystem;
using namespace ddfiber;

namespace {

const char* kCli = DDFIBER_CLI_PATH;

fs::path scratch_dir() {
  static int counter = 0;
  const fs::path p =
      fs::temp_directory_path() / ("ddfiber_cli_test_" + std::to_string(::getpid()) +
                                   "_" + std::to_string(counter++));
  fs::create_directories(p);
  return p;
}

int run_cli(const std::string& args) {
  const int status = std::system((std::string(kCli) + " " + args + " > /dev/null 2>&1").c_str());
  return WEXITSTATUS(status);
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream f(p);
  f << text;
}

std::string read_file(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

const char* kBasicConfig =
    "state = plus45\n"
    "fiber_length = 8\n"
    "ensemble_size = 256\n"
    "base_seed = 11\n"
    "[noise]\n"
    "sigma_seg_len = 0.3\n"
    "sigma_phase = 2.0\n"
    "[sequence]\n"
    "kind = cpmg\n"
    "n_pulses = 8\n";

}  // namespace

TEST_CASE("ensemble subcommand writes csv and a reparseable manifest") {
  const fs::path dir = scratch_dir();
  write_file(dir / "exp.cfg", kBasicConfig);
  const int rc = run_cli("ensemble --config " + (dir / "exp.cfg").string() +
                         " --out " + (dir / "out").string());
  CHECK(rc == 0);
  CHECK(fs::exists(dir / "out" / "ensemble.csv"));
  CHECK(fs::exists(dir / "out" / "manifest.json"));

  const auto manifest = nlohmann::json::parse(read_file(dir / "out" / "manifest.json"));
  CHECK(manifest.at("base_seed") == 11);
  CHECK(manifest.at("subcommand") == "ensemble");
  CHECK(manifest.at("results").at("fidelity").get<double>() <= 1.0);
  for (const auto& name : manifest.at("outputs"))
    CHECK(fs::exists(dir / "out" / name.get<std::string>()));

  // config echo re-parses to the configuration that actually ran
  const FullConfig echoed = config_from_json(manifest.at("config_echo"));
  FullConfig direct = parse_config_text(kBasicConfig);
  CHECK(echoed == direct);
}

TEST_CASE("reruns are byte identical regardless of thread count") {
  const fs::path dir = scratch_dir();
  write_file(dir / "exp.cfg", kBasicConfig);
  const std::string cfg = (dir / "exp.cfg").string();
  REQUIRE(run_cli("ensemble --config " + cfg + " --out " + (dir / "a").string() +
                  " --threads 1") == 0);
  REQUIRE(run_cli("ensemble --config " + cfg + " --out " + (dir / "b").string() +
                  " --threads 4") == 0);
  REQUIRE(run_cli("ensemble --config " + cfg + " --out " + (dir / "c").string() +
                  " --threads 1") == 0);
  const std::string a = read_file(dir / "a" / "ensemble.csv");
  CHECK(a == read_file(dir / "b" / "ensemble.csv"));
  CHECK(a == read_file(dir / "c" / "ensemble.csv"));
}

TEST_CASE("seed override changes the result deterministically") {
  const fs::path dir = scratch_dir();
  write_file(dir / "exp.cfg", kBasicConfig);
  const std::string cfg = (dir / "exp.cfg").string();
  REQUIRE(run_cli("ensemble --config " + cfg + " --out " + (dir / "a").string() +
                  " --seed 99") == 0);
  REQUIRE(run_cli("ensemble --config " + cfg + " --out " + (dir / "b").string() +
                  " --seed 99") == 0);
  REQUIRE(run_cli("ensemble --config " + cfg + " --out " + (dir / "c").string()) == 0);
  const std::string a = read_file(dir / "a" / "ensemble.csv");
  CHECK(a == read_file(dir / "b" / "ensemble.csv"));
  CHECK(a != read_file(dir / "c" / "ensemble.csv"));
}

TEST_CASE("zero dephasing reports fidelity one in csv and manifest") {
  const fs::path dir = scratch_dir();
  write_file(dir / "exp.cfg",
             "state = plus45\nensemble_size = 64\n[noise]\nsigma_phase = 0\n"
             "[sequence]\nkind = none\n");
  REQUIRE(run_cli("ensemble --config " + (dir / "exp.cfg").string() + " --out " +
                  (dir / "out").string()) == 0);
  const std::string csv = read_file(dir / "out" / "ensemble.csv");
  CHECK(csv.find("1.00000000000e+00") != std::string::npos);
  const auto manifest = nlohmann::json::parse(read_file(dir / "out" / "manifest.json"));
  CHECK(manifest.at("results").at("fidelity").get<double>() == 1.0);
}

TEST_CASE("config failures map to the documented exit codes without outputs") {
  const fs::path dir = scratch_dir();
  CHECK(run_cli("ensemble --config " + (dir / "missing.cfg").string() + " --out " +
                (dir / "out1").string()) == 2);

  write_file(dir / "syntax.cfg", "this is not a config\n");
  CHECK(run_cli("ensemble --config " + (dir / "syntax.cfg").string() + " --out " +
                (dir / "out2").string()) == 3);

  write_file(dir / "unknown.cfg", "[noise]\nsigma_dl_typo = 1\n");
  CHECK(run_cli("ensemble --config " + (dir / "unknown.cfg").string() + " --out " +
                (dir / "out3").string()) == 4);

  write_file(dir / "invalid.cfg", "ensemble_size = -1\n");
  CHECK(run_cli("ensemble --config " + (dir / "invalid.cfg").string() + " --out " +
                (dir / "out4").string()) == 5);

  // nothing was written on any parse failure
  for (const char* out : {"out1", "out2", "out3", "out4"})
    CHECK(!fs::exists(dir / out / "manifest.json"));
}

TEST_CASE("w-curve with zero amplitude yields unit rows") {
  const fs::path dir = scratch_dir();
  write_file(dir / "w.cfg",
             "[sequence]\nkind = cpmg\nn_pulses = 4\n"
             "[spectrum]\nkind = white\namplitude = 0\n"
             "[sweep]\nl_grid = 1 2 3\n");
  REQUIRE(run_cli("w-curve --config " + (dir / "w.cfg").string() + " --out " +
                  (dir / "out").string()) == 0);
  const std::string csv = read_file(dir / "out" / "w-curve.csv");
  std::istringstream lines(csv);
  std::string line;
  std::getline(lines, line);  // header
  std::size_t rows = 0;
  while (std::getline(lines, line)) {
    ++rows;
    CHECK(line.substr(line.find(',') + 1) == "1.00000000000e+00");
  }
  CHECK(rows == 3);
}

TEST_CASE("filter-table emits the audit csv") {
  const fs::path dir = scratch_dir();
  write_file(dir / "f.cfg", "[sweep]\nkl_samples = 64\nkl_max = 25.2\n");
  REQUIRE(run_cli("filter-table --config " + (dir / "f.cfg").string() + " --out " +
                  (dir / "out").string()) == 0);
  const std::string csv = read_file(dir / "out" / "filter-table.csv");
  CHECK(csv.find("kL,filter_general_cpmg4,filter_closed_cpmg4,abs_diff") == 0);
  // 64 grid samples plus the two singular centers below 25.2
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 67);
}

TEST_CASE("plot script emission is opt-in and listed in the manifest") {
  const fs::path dir = scratch_dir();
  write_file(dir / "exp.cfg", kBasicConfig);
  const std::string cfg = (dir / "exp.cfg").string();
  REQUIRE(run_cli("sweep-waveplates --config " + cfg + " --out " +
                  (dir / "plain").string()) == 0);
  CHECK(!fs::exists(dir / "plain" / "sweep-waveplates.gp"));
  REQUIRE(run_cli("sweep-waveplates --config " + cfg + " --out " +
                  (dir / "plotted").string() + " --plot-script") == 0);
  CHECK(fs::exists(dir / "plotted" / "sweep-waveplates.gp"));
  const auto manifest =
      nlohmann::json::parse(read_file(dir / "plotted" / "manifest.json"));
  bool listed = false;
  for (const auto& name : manifest.at("outputs"))
    if (name.get<std::string>() == "sweep-waveplates.gp") listed = true;
  CHECK(listed);
  const std::string gp = read_file(dir / "plotted" / "sweep-waveplates.gp");
  CHECK(gp.find("sweep-waveplates.csv") != std::string::npos);
}

TEST_CASE("module failure during a run exits 10 and leaves no partial outputs") {
  const fs::path dir = scratch_dir();
  // max_count below the minimum scan count makes min_waveplates throw
  write_file(dir / "bad.cfg",
             "ensemble_size = 32\n[noise]\nsigma_phase = 1\n"
             "[sweep]\nlengths = 8\nmax_count = 1\n");
  CHECK(run_cli("min-waveplates --config " + (dir / "bad.cfg").string() + " --out " +
                (dir / "out").string()) == 10);
  CHECK(!fs::exists(dir / "out" / "min-waveplates.csv"));
  CHECK(!fs::exists(dir / "out" / "manifest.json"));
}

TEST_CASE("DDFIBER_THREADS env var is the fallback for --threads") {
  const fs::path dir = scratch_dir();
  write_file(dir / "exp.cfg", kBasicConfig);
  const std::string cfg = (dir / "exp.cfg").string();
  const int status = std::system(("DDFIBER_THREADS=3 " + std::string(kCli) +
                                  " ensemble --config " + cfg + " --out " +
                                  (dir / "env").string() + " > /dev/null 2>&1")
                                     .c_str());
  REQUIRE(WEXITSTATUS(status) == 0);
  REQUIRE(run_cli("ensemble --config " + cfg + " --out " + (dir / "flag").string() +
                  " --threads 1") == 0);
  CHECK(read_file(dir / "env" / "ensemble.csv") ==
        read_file(dir / "flag" / "ensemble.csv"));
  // the echoed config records the thread source that actually applied
  const auto manifest = nlohmann::json::parse(read_file(dir / "env" / "manifest.json"));
  CHECK(manifest.at("config_echo").at("threads") == 3);
}

TEST_CASE("ensemble override trims the run size") {
  const fs::path dir = scratch_dir();
  write_file(dir / "exp.cfg", kBasicConfig);
  REQUIRE(run_cli("ensemble --config " + (dir / "exp.cfg").string() + " --out " +
                  (dir / "out").string() + " --ensemble 32") == 0);
  const std::string csv = read_file(dir / "out" / "ensemble.csv");
  CHECK(csv.find(",32") != std::string::npos);
}
