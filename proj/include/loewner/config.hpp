#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "loewner/driving.hpp"

namespace loewner {

// One JSON document per run; every physical default lives here so a report
// can always be reproduced from its config.
struct RunConfig {
  DrivingSpec driver = ConstantUnitDriver{};
  int N = 16;
  double t_end = 1.0;
  double dt = 1e-3;
  double fd_step = 1e-4;
  // artifact kinds to emit: chain, energy, theorem1, virasoro, neretin, plots
  std::vector<std::string> outputs;
  std::vector<double> output_times;  // empty means {t_end}
  unsigned long long seed = 0;
  std::string out_dir = "out";
  double tolerance = 1e-4;
  int kmax = 8;
  double charge = 1.0;
  double contour_radius = 0.9;
};

// Throws Error("invalid_config", ...) naming the violated invariant.
void validate_config(const RunConfig& config);

RunConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const RunConfig& config);

// Reads and validates a config file; Error("io_error") on unreadable input.
RunConfig load_config(const std::string& path);

}  // namespace loewner
