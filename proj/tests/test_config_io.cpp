#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "loewner/config.hpp"
#include "loewner/errors.hpp"

using namespace loewner;

namespace {

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / name;
}

}  // namespace

TEST_CASE("default config validates") {
  RunConfig config;
  validate_config(config);
  CHECK(config.N == 16);
  CHECK(config.t_end == 1.0);
}

TEST_CASE("config json round trips") {
  RunConfig config;
  config.N = 24;
  config.t_end = 0.5;
  config.dt = 5e-4;
  config.outputs = {"chain", "energy"};
  config.output_times = {0.1, 0.5};
  config.seed = 42;
  config.kmax = 6;
  config.charge = 12.0;
  SlitKernelDriver slit;
  slit.knots = {{0.0, 0.3}};
  config.driver = slit;

  const RunConfig back = config_from_json(config_to_json(config));
  CHECK(back.N == 24);
  CHECK(back.t_end == 0.5);
  CHECK(back.dt == 5e-4);
  CHECK(back.outputs == config.outputs);
  CHECK(back.output_times == config.output_times);
  CHECK(back.seed == 42);
  CHECK(back.kmax == 6);
  CHECK(back.charge == 12.0);
  CHECK(back.driver.index() == config.driver.index());
}

TEST_CASE("invalid configs are rejected with the config code") {
  RunConfig config;

  config.N = 4;
  CHECK_THROWS_WITH_AS(validate_config(config), "N must lie in [8, 64]",
                       Error);
  config.N = 16;

  config.dt = -1.0;
  CHECK_THROWS_AS(validate_config(config), Error);
  config.dt = 1e-3;

  config.fd_step = 0.5;  // above 10 dt
  CHECK_THROWS_AS(validate_config(config), Error);
  config.fd_step = 1e-4;

  config.outputs = {"sculpture"};
  CHECK_THROWS_AS(validate_config(config), Error);
  config.outputs = {};

  config.output_times = {0.4, 0.2};
  CHECK_THROWS_AS(validate_config(config), Error);
  config.output_times = {};

  config.contour_radius = 1.5;
  CHECK_THROWS_AS(validate_config(config), Error);
}

TEST_CASE("error codes classify config failures") {
  RunConfig config;
  config.N = 200;
  try {
    validate_config(config);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == "invalid_config");
    CHECK(e.diagnostic_line().rfind("code=invalid_config", 0) == 0);
  }
}

TEST_CASE("load_config reads a file and rejects garbage") {
  const auto good = temp_file("loewner_config_ok.json");
  {
    std::ofstream out(good);
    out << R"({"driver": {"type": "constant"}, "N": 12, "t_end": 0.25})";
  }
  const RunConfig config = load_config(good.string());
  CHECK(config.N == 12);
  CHECK(config.t_end == 0.25);
  std::filesystem::remove(good);

  const auto bad = temp_file("loewner_config_bad.json");
  {
    std::ofstream out(bad);
    out << "{ not json";
  }
  CHECK_THROWS_AS(load_config(bad.string()), Error);
  std::filesystem::remove(bad);

  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), Error);
}
