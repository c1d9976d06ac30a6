#include "loewner/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <string>

#include "loewner/errors.hpp"

namespace loewner {

namespace {

const std::set<std::string> kOutputKinds = {"chain",    "energy",  "theorem1",
                                            "virasoro", "neretin", "plots"};

}  // namespace

void validate_config(const RunConfig& config) {
  validate_spec(config.driver);
  if (config.N < 8 || config.N > 64) {
    throw Error("invalid_config", "N must lie in [8, 64]",
                {{"N", std::to_string(config.N)}});
  }
  if (!(config.t_end > 0.0) || !std::isfinite(config.t_end)) {
    throw Error("invalid_config", "t_end must be positive",
                {{"t_end", std::to_string(config.t_end)}});
  }
  if (!(config.dt > 0.0) || !std::isfinite(config.dt)) {
    throw Error("invalid_config", "dt must be positive",
                {{"dt", std::to_string(config.dt)}});
  }
  if (!(config.fd_step > 0.0) || config.fd_step > 10.0 * config.dt) {
    throw Error("invalid_config", "fd_step must lie in (0, 10 dt]",
                {{"fd_step", std::to_string(config.fd_step)},
                 {"dt", std::to_string(config.dt)}});
  }
  for (const std::string& kind : config.outputs) {
    if (kOutputKinds.find(kind) == kOutputKinds.end()) {
      throw Error("invalid_config", "unknown output kind", {{"kind", kind}});
    }
  }
  for (size_t i = 0; i < config.output_times.size(); ++i) {
    const double t = config.output_times[i];
    if (!(t >= 0.0) || t > config.t_end) {
      throw Error("invalid_config", "output time outside [0, t_end]",
                  {{"t", std::to_string(t)}});
    }
    if (i > 0 && !(t > config.output_times[i - 1])) {
      throw Error("invalid_config", "output times must strictly increase");
    }
  }
  if (!(config.tolerance > 0.0)) {
    throw Error("invalid_config", "tolerance must be positive");
  }
  if (config.kmax < 0 || config.kmax > 16) {
    throw Error("invalid_config", "kmax must lie in [0, 16]",
                {{"kmax", std::to_string(config.kmax)}});
  }
  if (!std::isfinite(config.charge)) {
    throw Error("invalid_config", "charge must be finite");
  }
  if (!(config.contour_radius > 0.0) || !(config.contour_radius < 1.0)) {
    throw Error("invalid_config", "contour radius must lie in (0, 1)",
                {{"contour_radius", std::to_string(config.contour_radius)}});
  }
}

RunConfig config_from_json(const nlohmann::json& j) {
  RunConfig config;
  try {
    if (j.contains("driver")) config.driver = spec_from_json(j.at("driver"));
    config.N = j.value("N", config.N);
    config.t_end = j.value("t_end", config.t_end);
    config.dt = j.value("dt", config.dt);
    config.fd_step = j.value("fd_step", config.fd_step);
    if (j.contains("outputs")) {
      config.outputs = j.at("outputs").get<std::vector<std::string>>();
    }
    if (j.contains("output_times")) {
      config.output_times = j.at("output_times").get<std::vector<double>>();
    }
    config.seed = j.value("seed", config.seed);
    config.out_dir = j.value("out_dir", config.out_dir);
    config.tolerance = j.value("tolerance", config.tolerance);
    config.kmax = j.value("kmax", config.kmax);
    config.charge = j.value("charge", config.charge);
    config.contour_radius = j.value("contour_radius", config.contour_radius);
  } catch (const nlohmann::json::exception& e) {
    throw Error("invalid_config", std::string("malformed config: ") + e.what());
  }
  validate_config(config);
  return config;
}

nlohmann::json config_to_json(const RunConfig& config) {
  return nlohmann::json{{"driver", spec_to_json(config.driver)},
                        {"N", config.N},
                        {"t_end", config.t_end},
                        {"dt", config.dt},
                        {"fd_step", config.fd_step},
                        {"outputs", config.outputs},
                        {"output_times", config.output_times},
                        {"seed", config.seed},
                        {"out_dir", config.out_dir},
                        {"tolerance", config.tolerance},
                        {"kmax", config.kmax},
                        {"charge", config.charge},
                        {"contour_radius", config.contour_radius}};
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error("io_error", "cannot open config file", {{"path", path}});
  }
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error("io_error", std::string("cannot parse config: ") + e.what(),
                {{"path", path}});
  }
  return config_from_json(j);
}

}  // namespace loewner
