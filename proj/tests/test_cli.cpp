#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"

namespace {

namespace fs = std::filesystem;

struct RunResult {
  int exit_code = -1;
  std::string output;  // stdout + stderr
};

RunResult run_cli(const std::string& args) {
  const std::string command =
      std::string(CLI_BINARY_PATH) + " " + args + " 2>&1";
  std::array<char, 4096> buffer{};
  RunResult result;
  FILE* pipe = popen(command.c_str(), "r");
  REQUIRE(pipe != nullptr);
  while (std::fgets(buffer.data(), buffer.size(), pipe) != nullptr) {
    result.output += buffer.data();
  }
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write_file(const fs::path& path, const std::string& body) {
  std::ofstream out(path);
  out << body;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path);
  std::stringstream body;
  body << in.rdbuf();
  return body.str();
}

}  // namespace

TEST_CASE("evolve writes a chain and reruns byte-identically") {
  const fs::path dir = scratch_dir("loewner_cli_evolve");
  const fs::path config = dir / "config.json";
  write_file(config, R"({
    "driver": {"type": "constant"},
    "N": 8,
    "t_end": 0.5,
    "output_times": [0.25, 0.5]
  })");

  const std::string args = "evolve --config " + config.string() + " --out " +
                           (dir / "run1").string();
  const RunResult first = run_cli(args);
  CHECK(first.exit_code == 0);
  REQUIRE(fs::exists(dir / "run1" / "chain.jsonl"));

  const RunResult second = run_cli("evolve --config " + config.string() +
                                   " --out " + (dir / "run2").string());
  CHECK(second.exit_code == 0);
  CHECK(read_file(dir / "run1" / "chain.jsonl") ==
        read_file(dir / "run2" / "chain.jsonl"));
  fs::remove_all(dir);
}

TEST_CASE("invalid density exits with the input error code") {
  const fs::path dir = scratch_dir("loewner_cli_invalid");
  const fs::path config = dir / "config.json";
  // 2 + 3 cos(theta) is negative near theta = pi
  write_file(config, R"({
    "driver": {"type": "smooth_density",
               "keyframes": [{"t": 0.0,
                              "density": {"K": 1,
                                          "nu_hat": [[2.0, 0.0], [1.5, 0.0]]}}]},
    "N": 8,
    "t_end": 0.5
  })");
  const RunResult result = run_cli("evolve --config " + config.string() +
                                   " --out " + (dir / "out").string());
  CHECK(result.exit_code == 2);
  CHECK(result.output.find("code=invalid_density") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("missing config file exits with the input error code") {
  const RunResult result = run_cli("evolve --config /nonexistent/nope.json");
  CHECK(result.exit_code == 2);
  CHECK(result.output.find("code=io_error") != std::string::npos);
}

TEST_CASE("verify-theorem1 passes for the unit driver") {
  const fs::path dir = scratch_dir("loewner_cli_thm");
  const fs::path config = dir / "config.json";
  write_file(config, R"({
    "driver": {"type": "constant"},
    "N": 10,
    "t_end": 0.4,
    "tolerance": 1e-8
  })");
  const RunResult result = run_cli("verify-theorem1 --config " +
                                   config.string() + " --out " +
                                   (dir / "out").string());
  CHECK(result.exit_code == 0);
  CHECK(fs::exists(dir / "out" / "theorem1.csv"));
  CHECK(fs::exists(dir / "out" / "theorem1.json"));
  fs::remove_all(dir);
}

TEST_CASE("neretin prints a polynomial table") {
  const RunResult result = run_cli("neretin --kmax 3 --charge 12");
  CHECK(result.exit_code == 0);
  CHECK(result.output.find("\"k\": 2") != std::string::npos);
  CHECK(result.output.find("monomial") != std::string::npos);
}

TEST_CASE("variation gate passes for a closed-form mode") {
  const fs::path dir = scratch_dir("loewner_cli_var");
  const fs::path config = dir / "config.json";
  write_file(config, R"({
    "driver": {"type": "constant"},
    "N": 12,
    "t_end": 0.2,
    "tolerance": 1e-6
  })");
  const RunResult result =
      run_cli("variation --k 1 --config " + config.string() + " --out " +
              (dir / "out").string());
  CHECK(result.exit_code == 0);
  CHECK(fs::exists(dir / "out" / "variation.json"));
  fs::remove_all(dir);
}

TEST_CASE("plot renders chains and rejects missing inputs") {
  const fs::path dir = scratch_dir("loewner_cli_plot");
  const fs::path config = dir / "config.json";
  write_file(config, R"({
    "driver": {"type": "constant"},
    "N": 8,
    "t_end": 0.6,
    "output_times": [0.2, 0.4, 0.6]
  })");
  REQUIRE(run_cli("evolve --config " + config.string() + " --out " +
                  dir.string()).exit_code == 0);

  const RunResult plot = run_cli("plot " + (dir / "chain.jsonl").string() +
                                 " --check-subordination");
  CHECK(plot.exit_code == 0);
  CHECK(fs::exists(dir / "chain.svg"));

  const RunResult missing = run_cli("plot /nonexistent/chain.jsonl");
  CHECK(missing.exit_code == 2);
  CHECK(missing.output.find("code=io_error") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("action command writes both routes") {
  const fs::path dir = scratch_dir("loewner_cli_action");
  const fs::path config = dir / "config.json";
  write_file(config, R"({
    "driver": {"type": "slit", "u": 0.0},
    "N": 16,
    "t_end": 0.2
  })");
  const RunResult result = run_cli("action --config " + config.string() +
                                   " --out " + (dir / "out").string());
  CHECK(result.exit_code == 0);
  CHECK(fs::exists(dir / "out" / "action.csv"));
  CHECK(fs::exists(dir / "out" / "action.json"));

  const std::string csv = read_file(dir / "out" / "action.csv");
  CHECK(csv.rfind("t,dirichlet,S_series,S_tail,S_quadrature,refinement,"
                  "route_gap",
                  0) == 0);
  fs::remove_all(dir);
}
