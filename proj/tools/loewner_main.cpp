#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "loewner/action.hpp"
#include "loewner/config.hpp"
#include "loewner/driving.hpp"
#include "loewner/errors.hpp"
#include "loewner/evolution.hpp"
#include "loewner/series.hpp"
#include "loewner/svg.hpp"
#include "loewner/virasoro.hpp"

namespace fs = std::filesystem;
using namespace loewner;

namespace {

constexpr int kExitIdentityFailure = 1;
constexpr int kExitBadInput = 2;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

int classify(const Error& e) {
  const std::string& c = e.code();
  if (c == "invalid_config" || c == "invalid_density" ||
      c == "invalid_driver" || c == "io_error" || c == "order_mismatch") {
    return kExitBadInput;
  }
  return kExitIdentityFailure;
}

std::ofstream open_output(const fs::path& path) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) {
    throw Error("io_error", "cannot open output file",
                {{"path", path.string()}});
  }
  return out;
}

std::vector<std::pair<double, double>> boundary_curve(
    const UnivalentCoefficients& f, int samples) {
  const TruncatedSeries fs = f.to_series();
  std::vector<std::pair<double, double>> pts;
  pts.reserve(static_cast<size_t>(samples));
  for (const Complex& v : evaluate_on_circle(fs, samples)) {
    pts.emplace_back(v.real(), v.imag());
  }
  return pts;
}

// ray-casting point-in-polygon
bool inside_polygon(const std::vector<std::pair<double, double>>& poly,
                    double x, double y) {
  bool inside = false;
  const size_t n = poly.size();
  for (size_t i = 0, j = n - 1; i < n; j = i++) {
    const auto& [xi, yi] = poly[i];
    const auto& [xj, yj] = poly[j];
    if ((yi > y) != (yj > y) &&
        x < (xj - xi) * (y - yi) / (yj - yi) + xi) {
      inside = !inside;
    }
  }
  return inside;
}

std::vector<double> default_times(const RunConfig& config) {
  if (!config.output_times.empty()) return config.output_times;
  return {config.t_end};
}

// ---- evolve -----------------------------------------------------------------

int cmd_evolve(const RunConfig& config) {
  EvolveControls controls;
  controls.dt = config.dt;
  const std::vector<ChainState> states =
      evolve_chain(UnivalentCoefficients::identity(config.N), config.driver,
                   config.t_end, controls, default_times(config));

  const fs::path dir(config.out_dir);
  auto chain_out = open_output(dir / "chain.jsonl");
  write_chain_jsonl(chain_out, states);
  std::cout << "wrote " << (dir / "chain.jsonl").string() << " ("
            << states.size() << " states)\n";

  const bool plots = std::find(config.outputs.begin(), config.outputs.end(),
                               "plots") != config.outputs.end();
  if (plots) {
    for (size_t i = 0; i < states.size(); ++i) {
      char name[32];
      std::snprintf(name, sizeof(name), "boundary_%03zu.svg", i);
      auto svg_out = open_output(dir / name);
      write_svg(svg_out, {SvgCurve{boundary_curve(states[i].f, 256), "#202020",
                                   1.0, true}});
    }
    std::cout << "wrote " << states.size() << " boundary frames\n";
  }
  return 0;
}

// ---- action -----------------------------------------------------------------

int cmd_action(const RunConfig& config) {
  EvolveControls controls;
  controls.dt = config.dt;
  const std::vector<ChainState> states =
      evolve_chain(UnivalentCoefficients::identity(config.N), config.driver,
                   config.t_end, controls, default_times(config));

  const fs::path dir(config.out_dir);
  auto csv = open_output(dir / "action.csv");
  csv << "t,dirichlet,S_series,S_tail,S_quadrature,refinement,route_gap\n";
  nlohmann::json rows = nlohmann::json::array();

  double worst_gap = 0.0;
  double worst_t = 0.0;
  double worst_allowed = 0.0;
  for (const ChainState& state : states) {
    const double dirichlet = dirichlet_energy(state);
    const ActionSeriesValue series = log_action_series(state);
    const ActionQuadratureValue quad = log_action_quadrature(state);
    const double gap = std::abs(series.value - quad.value);
    csv << fmt(state.t) << ',' << fmt(dirichlet) << ',' << fmt(series.value)
        << ',' << fmt(series.tail_estimate) << ',' << fmt(quad.value) << ','
        << fmt(quad.refinement_estimate) << ',' << fmt(gap) << '\n';
    rows.push_back({{"t", state.t},
                    {"dirichlet", dirichlet},
                    {"log_action_series", series.value},
                    {"tail_estimate", series.tail_estimate},
                    {"log_action_quadrature", quad.value},
                    {"refinement_estimate", quad.refinement_estimate},
                    {"route_gap", gap}});
    const double allowed = std::max(1e-6, 10.0 * series.tail_estimate);
    if (gap - allowed > worst_gap - worst_allowed) {
      worst_gap = gap;
      worst_t = state.t;
      worst_allowed = allowed;
    }
  }
  auto json_out = open_output(dir / "action.json");
  json_out << rows.dump(2) << '\n';
  std::cout << "wrote " << (dir / "action.csv").string() << " and action.json ("
            << states.size() << " rows)\n";
  if (worst_gap > worst_allowed) {
    std::cerr << "code=route_mismatch message=\"action routes disagree\" t="
              << fmt(worst_t) << " gap=" << fmt(worst_gap) << "\n";
    return kExitIdentityFailure;
  }
  return 0;
}

// ---- verify-theorem1 --------------------------------------------------------

int cmd_verify_theorem1(const RunConfig& config) {
  Theorem1Controls controls;
  controls.fd_step = config.fd_step;
  controls.evolve.dt = config.dt;

  std::vector<double> times = default_times(config);
  times.erase(std::remove_if(times.begin(), times.end(),
                             [&](double t) { return t <= config.fd_step; }),
              times.end());
  if (times.empty()) {
    throw Error("invalid_config",
                "no usable times: each must exceed fd_step");
  }

  const fs::path dir(config.out_dir);
  auto csv = open_output(dir / "theorem1.csv");
  write_report_csv_header(csv);
  nlohmann::json reports = nlohmann::json::array();

  double worst = -1.0;
  double worst_t = 0.0;
  for (double t : times) {
    const EnergyReport report =
        verify_theorem1(config.driver, config.N, t, controls);
    write_report_csv_row(csv, report);
    reports.push_back(report_to_json(report));
    const double residual = report.residuals.at("fd_vs_rhs");
    if (residual > worst) {
      worst = residual;
      worst_t = t;
    }
  }
  auto json_out = open_output(dir / "theorem1.json");
  json_out << reports.dump(2) << '\n';
  std::cout << "wrote " << (dir / "theorem1.csv").string()
            << " and theorem1.json (" << times.size() << " rows)\n";
  std::cout << "worst residual " << fmt(worst) << " at t=" << fmt(worst_t)
            << "\n";
  if (worst >= config.tolerance) {
    std::cerr << "code=tolerance_exceeded message=\"variation residual above"
                 " tolerance\" t="
              << fmt(worst_t) << " residual=" << fmt(worst) << "\n";
    return kExitIdentityFailure;
  }
  return 0;
}

// ---- virasoro-check ---------------------------------------------------------

struct CheckOutcome {
  bool ok = true;
  int failures = 0;
};

void report_check(CheckOutcome& outcome, const std::string& name, double value,
                  double bound) {
  const bool pass = value <= bound;
  std::cout << (pass ? "[PASS] " : "[FAIL] ") << name << " residual="
            << fmt(value) << " bound=" << fmt(bound) << "\n";
  if (!pass) {
    outcome.ok = false;
    ++outcome.failures;
  }
}

CircleVectorField random_field(std::mt19937_64& rng, int K) {
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  CircleVectorField out(K);
  for (int k = -K; k <= K; ++k) {
    out.set_mode(k, Complex(uni(rng), uni(rng)));
  }
  return out;
}

double field_max_abs(const CircleVectorField& f) {
  double top = 0.0;
  for (int k = -f.max_mode(); k <= f.max_mode(); ++k) {
    top = std::max(top, std::abs(f.mode(k)));
  }
  return top;
}

CircleVectorField field_sum2(const CircleVectorField& a,
                             const CircleVectorField& b) {
  const int K = std::max(a.max_mode(), b.max_mode());
  CircleVectorField out(K);
  for (int k = -K; k <= K; ++k) out.set_mode(k, a.mode(k) + b.mode(k));
  return out;
}

CircleVectorField field_sum3(const CircleVectorField& a,
                             const CircleVectorField& b,
                             const CircleVectorField& c) {
  const int K =
      std::max({a.max_mode(), b.max_mode(), c.max_mode()});
  CircleVectorField out(K);
  for (int k = -K; k <= K; ++k) {
    out.set_mode(k, a.mode(k) + b.mode(k) + c.mode(k));
  }
  return out;
}

UnivalentCoefficients builtin_test_map(int N) {
  std::vector<Complex> a(static_cast<size_t>(N), Complex(0.0, 0.0));
  a[0] = Complex(1.0, 0.0);
  a[1] = Complex(0.2, 0.0);
  a[2] = Complex(0.08, 0.0);
  a[3] = Complex(0.02, 0.0);
  return UnivalentCoefficients(std::move(a));
}

int cmd_virasoro_check(const RunConfig& config) {
  std::mt19937_64 rng(config.seed);
  CheckOutcome outcome;

  // bracket identities on random triples
  double antisym = 0.0;
  double jacobi = 0.0;
  double cocycle = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const CircleVectorField a = random_field(rng, 6);
    const CircleVectorField b = random_field(rng, 6);
    const CircleVectorField c = random_field(rng, 6);
    antisym = std::max(antisym, field_max_abs(field_sum2(witt_bracket(a, b),
                                                         witt_bracket(b, a))));
    const CircleVectorField jac = field_sum3(
        witt_bracket(a, witt_bracket(b, c)),
        witt_bracket(b, witt_bracket(c, a)),
        witt_bracket(c, witt_bracket(a, b)));
    jacobi = std::max(jacobi, field_max_abs(jac));
    const Complex cyc = gelfand_fuks(witt_bracket(a, b), c) +
                        gelfand_fuks(witt_bracket(b, c), a) +
                        gelfand_fuks(witt_bracket(c, a), b);
    cocycle = std::max(cocycle, std::abs(cyc));
  }
  report_check(outcome, "witt_antisymmetry", antisym, 1e-10);
  report_check(outcome, "witt_jacobi", jacobi, 1e-10);
  report_check(outcome, "gelfand_fuks_cocycle", cocycle, 1e-10);

  // kernel modes give exactly zero
  double kernel = 0.0;
  for (int m : {-1, 0, 1}) {
    kernel = std::max(kernel,
                      std::abs(gelfand_fuks(CircleVectorField::basis(m, 2),
                                            CircleVectorField::basis(-m, 2))));
  }
  report_check(outcome, "gelfand_fuks_kernel_exact", kernel, 0.0);

  // contour variation vs printed closed forms
  const UnivalentCoefficients f = builtin_test_map(config.N);
  const TruncatedSeries fs = f.to_series();
  std::vector<Complex> samples;
  for (int i = 0; i < 20; ++i) {
    const double r = 0.1 + 0.6 * i / 19.0;
    samples.push_back(std::polar(r, 0.37 + 0.31 * i));
  }
  ContourControls contour;
  contour.contour_radius = config.contour_radius;
  double contour_gap = 0.0;
  for (int k = -2; k <= 3; ++k) {
    const std::vector<Complex> values = goluzin_schiffer(
        f, CircleVectorField::basis(k, std::max(std::abs(k), 1)), samples,
        contour);
    for (size_t i = 0; i < samples.size(); ++i) {
      contour_gap =
          std::max(contour_gap,
                   std::abs(values[i] -
                            variation_closed_form(fs, k, samples[i])));
    }
  }
  report_check(outcome, "contour_vs_closed_forms", contour_gap, 1e-8);

  // coordinate operators close like the mode bracket
  double op_comm = 0.0;
  {
    const int limit = 8;
    for (const int var : {2, 3, 4, 5}) {
      const CoordinatePolynomial p = CoordinatePolynomial::variable(var);
      const CoordinatePolynomial lhs =
          kirillov_coordinate_operator(1, kirillov_coordinate_operator(2, p, limit), limit) -
          kirillov_coordinate_operator(2, kirillov_coordinate_operator(1, p, limit), limit);
      const CoordinatePolynomial rhs = kirillov_coordinate_operator(3, p, limit);
      CoordinatePolynomial gap = lhs + rhs;  // [L_1, L_2] = -L_3
      op_comm = std::max(op_comm, gap.max_abs());
    }
  }
  report_check(outcome, "coordinate_operator_bracket", op_comm, 1e-12);

  // recursion vs generatrix on random coefficient vectors
  const std::vector<CoordinatePolynomial> table =
      neretin_recursion(config.kmax, config.charge);
  std::uniform_real_distribution<double> uni(-0.5, 0.5);
  double dual_gap = 0.0;
  const int order = std::max(config.kmax + 2, 8);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Complex> a(static_cast<size_t>(order), Complex(0.0, 0.0));
    a[0] = Complex(1.0, 0.0);
    std::map<int, Complex> values;
    for (int j = 2; j <= order; ++j) {
      a[static_cast<size_t>(j - 1)] = Complex(uni(rng), uni(rng));
      values[j] = a[static_cast<size_t>(j - 1)];
    }
    const UnivalentCoefficients g{std::vector<Complex>(a)};
    const TruncatedSeries gen = neretin_generatrix(g, config.charge);
    for (int k = 2; k <= config.kmax; ++k) {
      dual_gap = std::max(dual_gap, std::abs(gen.coeff(k) -
                                             table[static_cast<size_t>(k)]
                                                 .evaluate(values)));
    }
  }
  report_check(outcome, "neretin_dual_route", dual_gap, 1e-10);

  // pairing against the boundary integral
  {
    const BoundaryDensity density =
        BoundaryDensity::cosine({{1, 1.0, 0.0}});
    const CircleVectorField nu = field_from_density(density);
    const ChainState state{0.0, f};
    const Complex pairing = psi_pairing(f, nu);
    const Theorem1Terms terms = theorem1_rhs(state, density);
    report_check(outcome, "psi_pairing_vs_term2",
                 std::abs(pairing.real() - terms.term2), 1e-10);
  }

  // nested variations close on the bracket field
  {
    const CommutatorCheck check =
        commutator_variation(f, CircleVectorField::basis(1, 1),
                             CircleVectorField::basis(2, 2), 1e-4, contour);
    report_check(outcome, "variation_commutator_closure", check.max_gap, 1e-6);
  }

  if (!outcome.ok) {
    std::cerr << "code=identity_failure message=\"virasoro identity suite"
                 " failed\" failures="
              << outcome.failures << "\n";
    return kExitIdentityFailure;
  }
  return 0;
}

// ---- neretin ----------------------------------------------------------------

int cmd_neretin(const RunConfig& config, bool write_file) {
  const std::vector<CoordinatePolynomial> table =
      neretin_recursion(config.kmax, config.charge);
  nlohmann::json out = nlohmann::json::array();
  for (int k = 2; k <= config.kmax; ++k) {
    out.push_back({{"k", k},
                   {"polynomial",
                    polynomial_to_json(table[static_cast<size_t>(k)])}});
  }
  std::cout << out.dump(2) << '\n';
  if (write_file) {
    auto file = open_output(fs::path(config.out_dir) / "neretin.json");
    file << out.dump(2) << '\n';
  }
  return 0;
}

// ---- variation --------------------------------------------------------------

int cmd_variation(const RunConfig& config, int k) {
  EvolveControls controls;
  controls.dt = config.dt;
  const std::vector<ChainState> states =
      evolve_chain(UnivalentCoefficients::identity(config.N), config.driver,
                   config.t_end, controls, {config.t_end});
  const UnivalentCoefficients g = states.back().f.rescaled();
  const TruncatedSeries gs = g.to_series();

  std::vector<Complex> samples;
  for (int i = 0; i < 20; ++i) {
    const double r = 0.1 + 0.6 * i / 19.0;
    samples.push_back(std::polar(r, 0.37 + 0.31 * i));
  }
  ContourControls contour;
  contour.contour_radius = config.contour_radius;
  const std::vector<Complex> values = goluzin_schiffer(
      g, CircleVectorField::basis(k, std::max(std::abs(k), 1)), samples,
      contour);

  double gap = -1.0;
  const bool has_closed_form = k >= -2;
  if (has_closed_form) {
    gap = 0.0;
    for (size_t i = 0; i < samples.size(); ++i) {
      gap = std::max(gap, std::abs(values[i] -
                                   variation_closed_form(gs, k, samples[i])));
    }
  }

  nlohmann::json j{{"k", k}, {"t", config.t_end}};
  j["samples"] = nlohmann::json::array();
  j["values"] = nlohmann::json::array();
  for (size_t i = 0; i < samples.size(); ++i) {
    j["samples"].push_back({samples[i].real(), samples[i].imag()});
    j["values"].push_back({values[i].real(), values[i].imag()});
  }
  if (has_closed_form) j["closed_form_gap"] = gap;
  auto file = open_output(fs::path(config.out_dir) / "variation.json");
  file << j.dump(2) << '\n';
  std::cout << "wrote "
            << (fs::path(config.out_dir) / "variation.json").string() << "\n";

  if (has_closed_form && gap > config.tolerance) {
    std::cerr << "code=identity_failure message=\"variation differs from"
                 " closed form\" k="
              << k << " gap=" << fmt(gap) << "\n";
    return kExitIdentityFailure;
  }
  return 0;
}

// ---- plot -------------------------------------------------------------------

int plot_chain(const fs::path& input, const fs::path& out_path,
               bool check_subordination) {
  std::ifstream in(input);
  if (!in) {
    throw Error("io_error", "cannot open input", {{"path", input.string()}});
  }
  const std::vector<ChainState> states = read_chain_jsonl(in);
  if (states.empty()) {
    throw Error("io_error", "chain file holds no states",
                {{"path", input.string()}});
  }
  std::vector<SvgCurve> curves;
  std::vector<std::vector<std::pair<double, double>>> polys;
  for (size_t i = 0; i < states.size(); ++i) {
    auto pts = boundary_curve(states[i].f, 256);
    polys.push_back(pts);
    const int shade = 32 + static_cast<int>(160.0 * i /
                                            std::max<size_t>(1, states.size() - 1));
    char color[16];
    std::snprintf(color, sizeof(color), "#%02x%02x%02x", shade, shade, shade);
    curves.push_back(SvgCurve{std::move(pts), color, 1.0, true});
  }
  auto out = open_output(out_path);
  write_svg(out, curves);
  std::cout << "wrote " << out_path.string() << "\n";

  if (check_subordination) {
    for (size_t i = 0; i + 1 < polys.size(); ++i) {
      for (const auto& [x, y] : polys[i]) {
        if (!inside_polygon(polys[i + 1], x, y)) {
          std::cerr << "code=subordination_violation message=\"earlier"
                       " boundary leaves later domain\" frame="
                    << i << "\n";
          return kExitIdentityFailure;
        }
      }
    }
    std::cout << "subordination check passed (" << polys.size()
              << " frames nested)\n";
  }
  return 0;
}

int plot_csv(const fs::path& input, const fs::path& out_path) {
  std::ifstream in(input);
  if (!in) {
    throw Error("io_error", "cannot open input", {{"path", input.string()}});
  }
  std::string header;
  if (!std::getline(in, header)) {
    throw Error("io_error", "empty csv", {{"path", input.string()}});
  }
  std::vector<std::vector<double>> columns;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> row;
    while (std::getline(ss, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw Error("io_error", "non-numeric csv cell",
                    {{"path", input.string()}, {"cell", cell}});
      }
    }
    if (columns.empty()) columns.resize(row.size());
    if (row.size() != columns.size()) {
      throw Error("io_error", "ragged csv row", {{"path", input.string()}});
    }
    for (size_t c = 0; c < row.size(); ++c) columns[c].push_back(row[c]);
  }
  if (columns.size() < 2 || columns[0].empty()) {
    throw Error("io_error", "csv needs a time column and data",
                {{"path", input.string()}});
  }
  const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                           "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22"};
  std::vector<SvgCurve> curves;
  for (size_t c = 1; c < columns.size(); ++c) {
    SvgCurve curve;
    curve.stroke = palette[(c - 1) % 8];
    for (size_t r = 0; r < columns[0].size(); ++r) {
      curve.points.emplace_back(columns[0][r], columns[c][r]);
    }
    curves.push_back(std::move(curve));
  }
  auto out = open_output(out_path);
  write_svg(out, curves);
  std::cout << "wrote " << out_path.string() << "\n";
  return 0;
}

int cmd_plot(const std::vector<std::string>& inputs, const std::string& out_dir,
             bool check_subordination) {
  // --out ending in .svg names the output file itself (single input only)
  const bool explicit_file =
      !out_dir.empty() && fs::path(out_dir).extension() == ".svg";
  if (explicit_file && inputs.size() > 1) {
    throw Error("invalid_config",
                "--out names a single .svg but several inputs were given",
                {{"out", out_dir}});
  }
  int rc = 0;
  for (const std::string& name : inputs) {
    const fs::path input(name);
    if (!fs::exists(input)) {
      throw Error("io_error", "missing input file", {{"path", name}});
    }
    fs::path target;
    if (explicit_file) {
      target = fs::path(out_dir);
    } else {
      const fs::path dir =
          out_dir.empty() ? (input.has_parent_path() ? input.parent_path()
                                                     : fs::path("."))
                          : fs::path(out_dir);
      target = dir / (input.stem().string() + ".svg");
    }
    if (input.extension() == ".jsonl") {
      rc = std::max(rc, plot_chain(input, target, check_subordination));
    } else if (input.extension() == ".csv") {
      rc = std::max(rc, plot_csv(input, target));
    } else {
      throw Error("io_error", "unrecognized input kind (.jsonl or .csv)",
                  {{"path", name}});
    }
  }
  return rc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"subordination chain evolution and variation toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  double tolerance = -1.0;
  long long seed = -1;
  int kmax = -1;
  double charge = 0.0;
  bool charge_set = false;
  int variation_mode = 0;
  std::vector<std::string> plot_inputs;
  bool check_subordination = false;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "config JSON path");
    sub->add_option("--out", out_dir, "output directory override");
    sub->add_option("--tolerance", tolerance, "gate tolerance override");
    sub->add_option("--seed", seed, "seed override");
  };

  CLI::App* evolve = app.add_subcommand("evolve", "run the coefficient chain");
  add_common(evolve);
  CLI::App* action = app.add_subcommand("action", "evaluate both action routes");
  add_common(action);
  CLI::App* verify =
      app.add_subcommand("verify-theorem1", "finite-difference variation check");
  add_common(verify);
  CLI::App* virasoro =
      app.add_subcommand("virasoro-check", "algebraic identity suite");
  add_common(virasoro);
  virasoro->add_option("--kmax", kmax, "polynomial table depth");
  virasoro->add_option("--charge", charge, "central charge")
      ->each([&](const std::string&) { charge_set = true; });
  CLI::App* neretin = app.add_subcommand("neretin", "emit the polynomial table");
  add_common(neretin);
  neretin->add_option("--table,--kmax", kmax, "polynomial table depth");
  neretin->add_option("--charge", charge, "central charge")
      ->each([&](const std::string&) { charge_set = true; });
  CLI::App* variation =
      app.add_subcommand("variation", "contour variation for one basis mode");
  add_common(variation);
  variation->add_option("--k", variation_mode, "basis mode index");
  CLI::App* plot = app.add_subcommand("plot", "render chain/csv files to SVG");
  plot->add_option("inputs", plot_inputs, "files produced by other commands");
  plot->add_option("--out", out_dir, "output directory override");
  plot->add_flag("--check-subordination", check_subordination,
                 "verify nested boundaries");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(plot)) {
      if (plot_inputs.empty()) {
        throw Error("invalid_config", "plot needs at least one input file");
      }
      return cmd_plot(plot_inputs, out_dir, check_subordination);
    }

    RunConfig config;
    if (!config_path.empty()) {
      config = load_config(config_path);
    } else {
      validate_config(config);
    }
    if (!out_dir.empty()) config.out_dir = out_dir;
    if (tolerance > 0.0) config.tolerance = tolerance;
    if (seed >= 0) config.seed = static_cast<unsigned long long>(seed);
    if (kmax >= 0) config.kmax = kmax;
    if (charge_set) config.charge = charge;
    validate_config(config);

    if (app.got_subcommand(evolve)) return cmd_evolve(config);
    if (app.got_subcommand(action)) return cmd_action(config);
    if (app.got_subcommand(verify)) return cmd_verify_theorem1(config);
    if (app.got_subcommand(virasoro)) return cmd_virasoro_check(config);
    if (app.got_subcommand(neretin)) return cmd_neretin(config, !out_dir.empty());
    if (app.got_subcommand(variation)) return cmd_variation(config, variation_mode);
    throw Error("invalid_config", "no subcommand selected");
  } catch (const Error& e) {
    std::cerr << e.diagnostic_line() << "\n";
    return classify(e);
  } catch (const std::exception& e) {
    std::cerr << "code=internal_error message=\"" << e.what() << "\"\n";
    return kExitBadInput;
  }
}
