#include "loewner/driving.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "loewner/errors.hpp"

namespace loewner {

double BoundaryDensity::evaluate(double theta) const {
  double value = nu_hat.empty() ? 0.0 : nu_hat[0].real();
  for (int k = 1; k <= K; ++k) {
    const Complex term = nu_hat[static_cast<size_t>(k)] * std::polar(1.0, k * theta);
    value += 2.0 * term.real();
  }
  return value;
}

BoundaryDensity BoundaryDensity::constant() {
  BoundaryDensity d;
  d.K = 0;
  d.nu_hat = {Complex(2.0, 0.0)};
  return d;
}

BoundaryDensity BoundaryDensity::cosine(
    const std::vector<std::tuple<int, double, double>>& modes) {
  int K = 0;
  for (const auto& [k, amp, phase] : modes) K = std::max(K, k);
  BoundaryDensity d;
  d.K = K;
  d.nu_hat.assign(static_cast<size_t>(K + 1), Complex(0.0, 0.0));
  d.nu_hat[0] = Complex(2.0, 0.0);
  for (const auto& [k, amp, phase] : modes) {
    // amp*cos(k theta + phase) contributes (amp/2) e^{i phase} at mode k
    d.nu_hat[static_cast<size_t>(k)] += 0.5 * amp * std::polar(1.0, phase);
  }
  return d;
}

DensityDiagnostics validate_density(const BoundaryDensity& density) {
  DensityDiagnostics diag;
  if (density.nu_hat.size() != static_cast<size_t>(density.K + 1)) {
    throw Error("invalid_density", "mode count does not match K",
                {{"K", std::to_string(density.K)},
                 {"modes", std::to_string(density.nu_hat.size())}});
  }
  diag.grid_points = std::max(4 * density.K, 8);
  diag.min_on_grid = std::numeric_limits<double>::infinity();
  for (int j = 0; j < diag.grid_points; ++j) {
    const double theta = 2.0 * std::numbers::pi * j / diag.grid_points;
    diag.min_on_grid = std::min(diag.min_on_grid, density.evaluate(theta));
  }
  diag.normalization_residual = density.nu_hat[0].real() - 2.0;
  diag.hermitian_residual = std::abs(density.nu_hat[0].imag());
  return diag;
}

void require_valid_density(const BoundaryDensity& density) {
  const DensityDiagnostics diag = validate_density(density);
  for (const auto& c : density.nu_hat) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
      throw Error("invalid_density", "non-finite Fourier mode");
    }
  }
  if (diag.hermitian_residual > 1e-12) {
    throw Error("invalid_density", "nu_hat_0 must be real",
                {{"im", std::to_string(diag.hermitian_residual)}});
  }
  if (std::abs(diag.normalization_residual) > kDensityNormalizationTol) {
    throw Error("invalid_density", "normalization nu_hat_0 = 2 violated",
                {{"nu_hat_0", std::to_string(density.nu_hat[0].real())}});
  }
  if (!(diag.min_on_grid > kDensityPositivityFloor)) {
    throw Error("invalid_density", "density not strictly positive on grid",
                {{"min", std::to_string(diag.min_on_grid)},
                 {"grid", std::to_string(diag.grid_points)}});
  }
}

TruncatedSeries herglotz_from_density(const BoundaryDensity& density, int N) {
  require_valid_density(density);
  TruncatedSeries p(N, 0);
  p.set_coeff(0, Complex(1.0, 0.0));
  for (int k = 1; k <= std::min(N, density.K); ++k)
    p.set_coeff(k, density.nu_hat[static_cast<size_t>(k)]);
  return p;
}

TruncatedSeries slit_kernel_series(double u, int N) {
  TruncatedSeries p(N, 0);
  p.set_coeff(0, Complex(1.0, 0.0));
  for (int k = 1; k <= N; ++k) p.set_coeff(k, 2.0 * std::polar(1.0, -k * u));
  return p;
}

Complex slit_kernel_value(double u, Complex w) {
  const Complex e = std::polar(1.0, u);
  return (e + w) / (e - w);
}

BoundaryDensity laplacian_density(const UnivalentCoefficients& f, int K,
                                  double min_abs_fprime) {
  const int N = f.order();
  const int M = std::max({4 * K, 4 * N, 16});
  const TruncatedSeries fprime = f.to_series().derivative();
  const std::vector<Complex> fp = evaluate_on_circle(fprime, M);

  std::vector<double> inv_sq(static_cast<size_t>(M));
  double sigma = 0.0;
  for (int j = 0; j < M; ++j) {
    const double mag = std::abs(fp[static_cast<size_t>(j)]);
    if (mag < min_abs_fprime) {
      throw Error("boundary_degeneracy", "|f'| too small on the circle",
                  {{"min_abs", std::to_string(mag)},
                   {"node", std::to_string(j)}});
    }
    inv_sq[static_cast<size_t>(j)] = 1.0 / (mag * mag);
    sigma += inv_sq[static_cast<size_t>(j)];
  }
  sigma /= M;  // circle mean of 1/|f'|^2

  BoundaryDensity d;
  d.K = K;
  d.nu_hat.assign(static_cast<size_t>(K + 1), Complex(0.0, 0.0));
  for (int k = 0; k <= K; ++k) {
    Complex acc(0.0, 0.0);
    for (int j = 0; j < M; ++j) {
      const double theta = 2.0 * std::numbers::pi * j / M;
      acc += (2.0 / (sigma * 1.0)) * inv_sq[static_cast<size_t>(j)] *
             std::polar(1.0, -k * theta);
    }
    d.nu_hat[static_cast<size_t>(k)] = acc / static_cast<double>(M);
  }
  // the mean renormalization makes mode 0 equal to 2 up to rounding; pin it
  d.nu_hat[0] = Complex(2.0, 0.0);
  return d;
}

BoundaryDensity SmoothDensityDriver::at(double t) const {
  if (keyframes.empty()) {
    throw Error("invalid_config", "smooth density driver has no keyframes");
  }
  if (keyframes.size() == 1 || t <= keyframes.front().first)
    return keyframes.front().second;
  if (t >= keyframes.back().first) return keyframes.back().second;
  size_t hi = 1;
  while (keyframes[hi].first < t) ++hi;
  const auto& [t0, d0] = keyframes[hi - 1];
  const auto& [t1, d1] = keyframes[hi];
  const double s = (t - t0) / (t1 - t0);
  BoundaryDensity out;
  out.K = d0.K;
  out.nu_hat.resize(d0.nu_hat.size());
  for (size_t k = 0; k < out.nu_hat.size(); ++k)
    out.nu_hat[k] = (1.0 - s) * d0.nu_hat[k] + s * d1.nu_hat[k];
  return out;
}

double SlitKernelDriver::u(double t) const {
  if (knots.empty()) {
    throw Error("invalid_config", "slit driver has no knots");
  }
  if (knots.size() == 1 || t <= knots.front().first) return knots.front().second;
  if (t >= knots.back().first) return knots.back().second;
  size_t hi = 1;
  while (knots[hi].first < t) ++hi;
  const auto& [t0, u0] = knots[hi - 1];
  const auto& [t1, u1] = knots[hi];
  return u0 + (u1 - u0) * (t - t0) / (t1 - t0);
}

void validate_spec(const DrivingSpec& spec) {
  if (const auto* smooth = std::get_if<SmoothDensityDriver>(&spec)) {
    if (smooth->keyframes.empty()) {
      throw Error("invalid_config", "smooth density driver has no keyframes");
    }
    const int K = smooth->keyframes.front().second.K;
    for (size_t i = 0; i < smooth->keyframes.size(); ++i) {
      if (i > 0 && !(smooth->keyframes[i].first > smooth->keyframes[i - 1].first)) {
        throw Error("invalid_config", "keyframe times must strictly increase",
                    {{"index", std::to_string(i)}});
      }
      if (smooth->keyframes[i].second.K != K) {
        throw Error("invalid_config", "keyframes must share the same K");
      }
      require_valid_density(smooth->keyframes[i].second);
    }
  } else if (const auto* slit = std::get_if<SlitKernelDriver>(&spec)) {
    if (slit->knots.empty()) {
      throw Error("invalid_config", "slit driver has no knots");
    }
    for (size_t i = 0; i < slit->knots.size(); ++i) {
      if (!std::isfinite(slit->knots[i].second)) {
        throw Error("invalid_config", "slit angle must be finite");
      }
      if (i > 0 && !(slit->knots[i].first > slit->knots[i - 1].first)) {
        throw Error("invalid_config", "slit knot times must strictly increase");
      }
    }
  } else if (const auto* lg = std::get_if<LaplacianGrowthDriver>(&spec)) {
    if (lg->K < 0) {
      throw Error("invalid_config", "laplacian growth K must be nonnegative");
    }
  }
}

bool needs_chain_state(const DrivingSpec& spec) {
  return std::holds_alternative<LaplacianGrowthDriver>(spec);
}

bool admits_theorem1_check(const DrivingSpec& spec) {
  if (std::holds_alternative<ConstantUnitDriver>(spec)) return true;
  if (std::holds_alternative<LaplacianGrowthDriver>(spec)) return true;
  if (const auto* smooth = std::get_if<SmoothDensityDriver>(&spec))
    return smooth->time_constant();
  return false;
}

TruncatedSeries driver_series(const DrivingSpec& spec,
                              const UnivalentCoefficients& f, double t, int N) {
  return std::visit(
      [&](const auto& d) -> TruncatedSeries {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, ConstantUnitDriver>) {
          return TruncatedSeries::constant(Complex(1.0, 0.0), N);
        } else if constexpr (std::is_same_v<T, SmoothDensityDriver>) {
          return herglotz_from_density(d.at(t), N);
        } else if constexpr (std::is_same_v<T, SlitKernelDriver>) {
          return slit_kernel_series(d.u(t), N);
        } else {
          const int K = d.K > 0 ? d.K : N;
          return herglotz_from_density(laplacian_density(f, K), N);
        }
      },
      spec);
}

Complex driver_value(const DrivingSpec& spec, const UnivalentCoefficients* f,
                     double t, Complex w, int N) {
  return std::visit(
      [&](const auto& d) -> Complex {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, ConstantUnitDriver>) {
          return Complex(1.0, 0.0);
        } else if constexpr (std::is_same_v<T, SmoothDensityDriver>) {
          const BoundaryDensity density = d.at(t);
          Complex acc(0.0, 0.0);
          for (int k = density.K; k >= 1; --k)
            acc = (acc + density.nu_hat[static_cast<size_t>(k)]) * w;
          return Complex(1.0, 0.0) + acc;
        } else if constexpr (std::is_same_v<T, SlitKernelDriver>) {
          return slit_kernel_value(d.u(t), w);
        } else {
          if (f == nullptr) {
            throw Error("invalid_config",
                        "laplacian growth trajectories need the chain state");
          }
          const int K = d.K > 0 ? d.K : N;
          return herglotz_from_density(laplacian_density(*f, K), N).evaluate(w);
        }
      },
      spec);
}

BoundaryDensity driver_density(const DrivingSpec& spec,
                               const UnivalentCoefficients& f, double t, int K) {
  return std::visit(
      [&](const auto& d) -> BoundaryDensity {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, ConstantUnitDriver>) {
          return BoundaryDensity::constant();
        } else if constexpr (std::is_same_v<T, SmoothDensityDriver>) {
          return d.at(t);
        } else if constexpr (std::is_same_v<T, SlitKernelDriver>) {
          throw Error("invalid_config",
                      "slit kernel is a point mass, not a smooth density");
        } else {
          return laplacian_density(f, d.K > 0 ? d.K : K);
        }
      },
      spec);
}

// Serialization ---------------------------------------------------------------

namespace {

nlohmann::json complex_to_json(const Complex& z) {
  return nlohmann::json::array({z.real(), z.imag()});
}

Complex complex_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 2) {
    throw Error("invalid_config", "complex values are [re, im] pairs");
  }
  return Complex(j[0].get<double>(), j[1].get<double>());
}

}  // namespace

nlohmann::json density_to_json(const BoundaryDensity& density) {
  nlohmann::json modes = nlohmann::json::array();
  for (const auto& c : density.nu_hat) modes.push_back(complex_to_json(c));
  return nlohmann::json{{"K", density.K}, {"nu_hat", modes}};
}

BoundaryDensity density_from_json(const nlohmann::json& j) {
  BoundaryDensity d;
  if (!j.contains("K") || !j.contains("nu_hat")) {
    throw Error("invalid_config", "density needs K and nu_hat");
  }
  d.K = j.at("K").get<int>();
  for (const auto& m : j.at("nu_hat")) d.nu_hat.push_back(complex_from_json(m));
  if (d.nu_hat.size() != static_cast<size_t>(d.K + 1)) {
    throw Error("invalid_config", "nu_hat must list modes k = 0..K",
                {{"K", std::to_string(d.K)},
                 {"modes", std::to_string(d.nu_hat.size())}});
  }
  return d;
}

nlohmann::json spec_to_json(const DrivingSpec& spec) {
  return std::visit(
      [](const auto& d) -> nlohmann::json {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, ConstantUnitDriver>) {
          return {{"type", "constant"}};
        } else if constexpr (std::is_same_v<T, SmoothDensityDriver>) {
          if (d.keyframes.size() == 1) {
            return {{"type", "smooth_density"},
                    {"density", density_to_json(d.keyframes.front().second)}};
          }
          nlohmann::json frames = nlohmann::json::array();
          for (const auto& [t, density] : d.keyframes)
            frames.push_back({{"t", t}, {"density", density_to_json(density)}});
          return {{"type", "smooth_density"}, {"keyframes", frames}};
        } else if constexpr (std::is_same_v<T, SlitKernelDriver>) {
          nlohmann::json knots = nlohmann::json::array();
          for (const auto& [t, u] : d.knots)
            knots.push_back(nlohmann::json::array({t, u}));
          return {{"type", "slit"}, {"u", knots}};
        } else {
          return {{"type", "laplacian_growth"}, {"K", d.K}};
        }
      },
      spec);
}

DrivingSpec spec_from_json(const nlohmann::json& j) {
  const std::string type = j.value("type", "");
  if (type == "constant") return ConstantUnitDriver{};
  if (type == "smooth_density") {
    SmoothDensityDriver d;
    if (j.contains("keyframes")) {
      for (const auto& frame : j.at("keyframes")) {
        d.keyframes.emplace_back(frame.at("t").get<double>(),
                                 density_from_json(frame.at("density")));
      }
    } else if (j.contains("density")) {
      d.keyframes.emplace_back(0.0, density_from_json(j.at("density")));
    } else {
      throw Error("invalid_config",
                  "smooth_density needs a density or keyframes");
    }
    return d;
  }
  if (type == "slit") {
    SlitKernelDriver d;
    if (j.contains("u") && j.at("u").is_number()) {
      d.knots.emplace_back(0.0, j.at("u").get<double>());
    } else if (j.contains("u")) {
      for (const auto& knot : j.at("u")) {
        d.knots.emplace_back(knot.at(0).get<double>(), knot.at(1).get<double>());
      }
    } else {
      throw Error("invalid_config", "slit driver needs u");
    }
    return d;
  }
  if (type == "laplacian_growth") {
    LaplacianGrowthDriver d;
    d.K = j.value("K", 0);
    return d;
  }
  throw Error("invalid_config", "unknown driver type", {{"type", type}});
}

}  // namespace loewner
