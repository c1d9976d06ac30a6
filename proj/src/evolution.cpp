#include "loewner/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <string>
#include <utility>
#include <variant>

#include "json.hpp"
#include "loewner/errors.hpp"

namespace loewner {

namespace {

constexpr double kTimeCoalesce = 1e-13;

void require_unit_p0(const TruncatedSeries& p) {
  if (std::abs(p.coeff(0) - Complex(1.0, 0.0)) > 1e-12) {
    throw Error("invalid_driver", "driving function must have p_0 = 1",
                {{"p0_re", std::to_string(p.coeff(0).real())},
                 {"p0_im", std::to_string(p.coeff(0).imag())}});
  }
}

std::vector<Complex> rhs_from(const std::vector<Complex>& a,
                              const TruncatedSeries& p) {
  const int N = static_cast<int>(a.size());
  std::vector<Complex> out(a.size());
  for (int n = 1; n <= N; ++n) {
    Complex acc(0.0, 0.0);
    for (int m = 1; m <= n; ++m) {
      acc += static_cast<double>(m) * a[static_cast<size_t>(m - 1)] *
             p.coeff(n - m);
    }
    out[static_cast<size_t>(n - 1)] = acc;
  }
  return out;
}

std::vector<double> merge_output_times(std::vector<double> outputs,
                                       double t_end) {
  if (outputs.empty()) outputs.push_back(t_end);
  for (size_t i = 0; i < outputs.size(); ++i) {
    const double t = outputs[i];
    if (t < -kTimeCoalesce || t > t_end + kTimeCoalesce) {
      throw Error("invalid_config", "output time outside [0, t_end]",
                  {{"t", std::to_string(t)}, {"t_end", std::to_string(t_end)}});
    }
    if (i > 0 && !(t > outputs[i - 1])) {
      throw Error("invalid_config", "output times must be strictly increasing",
                  {{"t", std::to_string(t)},
                   {"previous", std::to_string(outputs[i - 1])}});
    }
  }
  return outputs;
}

}  // namespace

std::vector<Complex> coefficient_rhs(const UnivalentCoefficients& f,
                                     const TruncatedSeries& p) {
  require_unit_p0(p);
  return rhs_from(f.raw(), p);
}

std::vector<ChainState> evolve_chain(const UnivalentCoefficients& f0,
                                     const DrivingSpec& spec, double t_end,
                                     const EvolveControls& controls,
                                     std::vector<double> output_times) {
  validate_spec(spec);
  if (!(t_end > 0.0) || !(controls.dt > 0.0)) {
    throw Error("invalid_config", "t_end and dt must be positive",
                {{"t_end", std::to_string(t_end)},
                 {"dt", std::to_string(controls.dt)}});
  }
  const int N = f0.order();
  const double a1_0 = f0.conformal_radius();
  std::vector<double> outputs = merge_output_times(std::move(output_times), t_end);

  DrivingSpec local = spec;
  if (controls.lg_modes > 0) {
    if (auto* lg = std::get_if<LaplacianGrowthDriver>(&local)) {
      lg->K = controls.lg_modes;
    }
  }

  const auto eval_rhs = [&](double t, const std::vector<Complex>& a) {
    const UnivalentCoefficients f{std::vector<Complex>(a)};
    const TruncatedSeries p = driver_series(local, f, t, N);
    require_unit_p0(p);
    return rhs_from(a, p);
  };

  std::vector<Complex> y = f0.raw();
  double t = 0.0;
  size_t out_idx = 0;
  long step_count = 0;
  std::vector<ChainState> states;

  const auto record_if_due = [&]() {
    while (out_idx < outputs.size() &&
           outputs[out_idx] <= t + kTimeCoalesce * std::max(1.0, t)) {
      ChainState state{outputs[out_idx], UnivalentCoefficients{y}};
      const double expected = a1_0 * std::exp(state.t);
      const double drift = std::abs(state.f.conformal_radius() - expected);
      if (drift > 10.0 * controls.a1_tolerance * std::max(1.0, expected)) {
        throw Error("conformal_radius_drift",
                    "a_1 deviates from the exponential law",
                    {{"t", std::to_string(state.t)},
                     {"drift", std::to_string(drift)}});
      }
      states.push_back(std::move(state));
      ++out_idx;
    }
  };

  record_if_due();
  while (t < t_end - kTimeCoalesce * std::max(1.0, t_end)) {
    double t_next = controls.dt * static_cast<double>(step_count + 1);
    if (out_idx < outputs.size()) t_next = std::min(t_next, outputs[out_idx]);
    t_next = std::min(t_next, t_end);
    const double h = t_next - t;
    if (h <= kTimeCoalesce * std::max(1.0, t)) {
      t = t_next;
      record_if_due();
      continue;
    }

    // classical RK4 step
    const std::vector<Complex> k1 = eval_rhs(t, y);
    std::vector<Complex> stage(y.size());
    for (size_t i = 0; i < y.size(); ++i) stage[i] = y[i] + 0.5 * h * k1[i];
    const std::vector<Complex> k2 = eval_rhs(t + 0.5 * h, stage);
    for (size_t i = 0; i < y.size(); ++i) stage[i] = y[i] + 0.5 * h * k2[i];
    const std::vector<Complex> k3 = eval_rhs(t + 0.5 * h, stage);
    for (size_t i = 0; i < y.size(); ++i) stage[i] = y[i] + h * k3[i];
    const std::vector<Complex> k4 = eval_rhs(t + h, stage);
    for (size_t i = 0; i < y.size(); ++i) {
      y[i] += (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }

    t = t_next;
    if (t >= controls.dt * static_cast<double>(step_count + 1) -
                 kTimeCoalesce * std::max(1.0, t)) {
      ++step_count;
    }
    record_if_due();
  }
  record_if_due();
  return states;
}

namespace {

// Shared characteristic integrator: lands exactly on each probe time and
// reports w there.  Co-evolves the coefficient chain when the driver needs it.
std::vector<Complex> integrate_characteristic(
    Complex z0, const DrivingSpec& spec, const std::vector<double>& probes,
    const TrajectoryControls& controls, Trajectory* record) {
  validate_spec(spec);
  if (!(std::abs(z0) < 1.0)) {
    throw Error("trajectory_escape", "initial point must lie inside the disk",
                {{"abs_z0", std::to_string(std::abs(z0))}});
  }
  const bool with_chain = needs_chain_state(spec);
  const int N = controls.lg_order;
  std::vector<Complex> y;
  if (with_chain) y = UnivalentCoefficients::identity(N).raw();

  const double t_end = probes.empty() ? 0.0 : probes.back();
  const auto p_at = [&](double t, Complex w,
                        const std::vector<Complex>& a) -> Complex {
    if (with_chain) {
      const UnivalentCoefficients f{std::vector<Complex>(a)};
      return driver_value(spec, &f, t, w, N);
    }
    return driver_value(spec, nullptr, t, w, N);
  };

  const auto guard = [&](double t, Complex w) {
    if (const auto* slit = std::get_if<SlitKernelDriver>(&spec)) {
      const Complex gap = Complex(1.0, 0.0) - std::polar(1.0, -slit->u(t)) * w;
      if (std::abs(gap) < controls.slit_guard) {
        throw Error("slit_singularity",
                    "trajectory reached the slit singularity",
                    {{"t", std::to_string(t)}});
      }
    }
    if (!(std::abs(w) < 1.0 + 1e-14)) {
      throw Error("trajectory_escape", "trajectory left the unit disk",
                  {{"t", std::to_string(t)}, {"abs_w", std::to_string(std::abs(w))}});
    }
  };

  Complex w = z0;
  double t = 0.0;
  size_t probe_idx = 0;
  long step_count = 0;
  long recorded_steps = 0;
  std::vector<Complex> probe_values;

  if (record != nullptr) {
    record->z0 = z0;
    record->times.push_back(0.0);
    record->w.push_back(w);
  }
  while (probe_idx < probes.size() && probes[probe_idx] <= kTimeCoalesce) {
    probe_values.push_back(w);
    ++probe_idx;
  }

  while (t < t_end - kTimeCoalesce * std::max(1.0, t_end)) {
    double t_next = controls.dt * static_cast<double>(step_count + 1);
    if (probe_idx < probes.size()) t_next = std::min(t_next, probes[probe_idx]);
    t_next = std::min(t_next, t_end);
    const double h = t_next - t;
    if (h <= kTimeCoalesce * std::max(1.0, t)) {
      t = t_next;
    } else {
      guard(t, w);
      // RK4 on (w, chain)
      const auto stage_rhs = [&](double ts, Complex ws,
                                 const std::vector<Complex>& as)
          -> std::pair<Complex, std::vector<Complex>> {
        const Complex dw = -ws * p_at(ts, ws, as);
        std::vector<Complex> da;
        if (with_chain) {
          const UnivalentCoefficients f{std::vector<Complex>(as)};
          da = rhs_from(as, driver_series(spec, f, ts, N));
        }
        return {dw, da};
      };
      const auto [kw1, ka1] = stage_rhs(t, w, y);
      auto advance = [&](double c, const Complex& kw,
                         const std::vector<Complex>& ka) {
        Complex ws = w + c * h * kw;
        std::vector<Complex> as(y);
        for (size_t i = 0; i < as.size(); ++i) as[i] += c * h * ka[i];
        return std::make_pair(ws, as);
      };
      const auto [w2, y2] = advance(0.5, kw1, ka1);
      const auto [kw2, ka2] = stage_rhs(t + 0.5 * h, w2, y2);
      const auto [w3, y3] = advance(0.5, kw2, ka2);
      const auto [kw3, ka3] = stage_rhs(t + 0.5 * h, w3, y3);
      const auto [w4, y4] = advance(1.0, kw3, ka3);
      const auto [kw4, ka4] = stage_rhs(t + h, w4, y4);
      w += (h / 6.0) * (kw1 + 2.0 * kw2 + 2.0 * kw3 + kw4);
      for (size_t i = 0; i < y.size(); ++i) {
        y[i] += (h / 6.0) * (ka1[i] + 2.0 * ka2[i] + 2.0 * ka3[i] + ka4[i]);
      }
      t = t_next;
      ++recorded_steps;
      if (record != nullptr && recorded_steps % controls.sample_stride == 0) {
        record->times.push_back(t);
        record->w.push_back(w);
      }
    }
    if (t >= controls.dt * static_cast<double>(step_count + 1) -
                 kTimeCoalesce * std::max(1.0, t)) {
      ++step_count;
    }
    while (probe_idx < probes.size() &&
           probes[probe_idx] <= t + kTimeCoalesce * std::max(1.0, t)) {
      probe_values.push_back(w);
      ++probe_idx;
    }
  }
  guard(t, w);
  if (record != nullptr &&
      (record->times.empty() || record->times.back() != t)) {
    record->times.push_back(t);
    record->w.push_back(w);
  }
  while (probe_idx < probes.size()) {
    probe_values.push_back(w);
    ++probe_idx;
  }
  return probe_values;
}

}  // namespace

Trajectory solve_lkord(Complex z0, const DrivingSpec& spec, double t_end,
                       const TrajectoryControls& controls) {
  if (!(t_end >= 0.0)) {
    throw Error("invalid_config", "t_end must be nonnegative");
  }
  Trajectory trajectory;
  integrate_characteristic(z0, spec, {t_end}, controls, &trajectory);
  return trajectory;
}

LimitRecovery recover_f_limit(const DrivingSpec& spec,
                              const std::vector<Complex>& z_grid, double T,
                              const TrajectoryControls& controls,
                              double tolerance) {
  if (!(T > 0.0)) {
    throw Error("invalid_config", "horizon must be positive");
  }
  LimitRecovery out;
  out.grid = z_grid;
  out.horizon = 2.0 * T;
  const double eT = std::exp(T);
  const double e2T = std::exp(2.0 * T);
  for (const Complex& z : z_grid) {
    const std::vector<Complex> w =
        integrate_characteristic(z, spec, {T, 2.0 * T}, controls, nullptr);
    const Complex fT = eT * w[0];
    const Complex f2T = e2T * w[1];
    out.error_estimate = std::max(out.error_estimate, std::abs(fT - f2T));
    out.f_values.push_back(f2T);
  }
  out.converged = out.error_estimate <= 10.0 * tolerance;
  if (!out.converged) {
    throw Error("non_convergence",
                "horizon doubling did not stabilize the limit map",
                {{"estimate", std::to_string(out.error_estimate)},
                 {"T", std::to_string(T)},
                 {"tolerance", std::to_string(tolerance)}});
  }
  return out;
}

UnivalentCoefficients recover_f_coefficients(const DrivingSpec& spec, int N,
                                             double T,
                                             const TrajectoryControls& controls,
                                             double tolerance,
                                             double sample_radius) {
  const int M = std::max(2 * N + 2, 32);
  std::vector<Complex> grid;
  grid.reserve(static_cast<size_t>(M));
  for (double theta : circle_grid(M))
    grid.push_back(std::polar(sample_radius, theta));
  const LimitRecovery rec = recover_f_limit(spec, grid, T, controls, tolerance);
  const TruncatedSeries projected = fourier_project(rec.f_values, N, 1);
  std::vector<Complex> a;
  a.reserve(static_cast<size_t>(N));
  double rk = sample_radius;
  for (int k = 1; k <= N; ++k) {
    a.push_back(projected.coeff(k) / rk);
    rk *= sample_radius;
  }
  return UnivalentCoefficients(std::move(a));
}

double hamiltonian_residual(const ChainState& state, const TruncatedSeries& p) {
  require_unit_p0(p);
  const int N = state.f.order();
  const std::vector<Complex> dots = coefficient_rhs(state.f, p);
  const TruncatedSeries f_dot =
      TruncatedSeries::from_coefficients(N, 1, dots);
  const TruncatedSeries route_a = f_dot.derivative();

  const TruncatedSeries zfp =
      state.f.to_series().derivative().shifted(1) * p.retruncated(N);
  const TruncatedSeries route_b = zfp.derivative();

  const int top = std::min(route_a.top_meaningful_degree(),
                           route_b.top_meaningful_degree());
  double residual = 0.0;
  for (int k = 0; k <= top; ++k)
    residual = std::max(residual, std::abs(route_a.coeff(k) - route_b.coeff(k)));
  return residual;
}

namespace {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void write_chain_jsonl(std::ostream& os, const std::vector<ChainState>& chain) {
  for (const ChainState& state : chain) {
    os << "{\"t\": " << format_double(state.t) << ", \"a\": [";
    for (int k = 1; k <= state.f.order(); ++k) {
      if (k > 1) os << ", ";
      os << '[' << format_double(state.f.a(k).real()) << ", "
         << format_double(state.f.a(k).imag()) << ']';
    }
    os << "]}\n";
  }
}

std::vector<ChainState> read_chain_jsonl(std::istream& is) {
  std::vector<ChainState> chain;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw Error("io_error", std::string("bad chain line: ") + e.what());
    }
    std::vector<Complex> a;
    for (const auto& entry : j.at("a")) {
      a.emplace_back(entry.at(0).get<double>(), entry.at(1).get<double>());
    }
    chain.push_back(ChainState{j.at("t").get<double>(),
                               UnivalentCoefficients{std::move(a)}});
  }
  return chain;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& trajectory) {
  os << "t,re_w,im_w\n";
  for (size_t i = 0; i < trajectory.times.size(); ++i) {
    os << format_double(trajectory.times[i]) << ','
       << format_double(trajectory.w[i].real()) << ','
       << format_double(trajectory.w[i].imag()) << '\n';
  }
}

}  // namespace loewner
