#include "loewner/action.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

#include "loewner/errors.hpp"

namespace loewner {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kPi = 3.1415926535897932384626433832795;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// h = f''/f' as a truncated series; meaningful through degree order-2.
TruncatedSeries log_derivative_of_fprime(const UnivalentCoefficients& f) {
  const TruncatedSeries fs = f.to_series();
  const TruncatedSeries fp = fs.derivative();
  return fp.derivative() * fp.reciprocal();
}

int theorem1_grid(int requested, int N, int K) {
  const int floor_points = std::max({4 * N, 2 * N + K + 8, 64});
  return std::max(requested, floor_points);
}

}  // namespace

double dirichlet_energy(const ChainState& state) {
  return kTwoPi * std::log(state.f.conformal_radius());
}

double dirichlet_energy_quadrature(const ChainState& state, double epsilon,
                                   int angular_points) {
  if (!(epsilon > 0.0) || epsilon >= 0.5 * state.f.conformal_radius()) {
    throw Error("invalid_config",
                "epsilon must be positive and small against the radius",
                {{"epsilon", fmt(epsilon)}});
  }
  const int M = std::max(angular_points, 16);
  const TruncatedSeries fs = state.f.to_series();
  const TruncatedSeries fp = fs.derivative();
  const double a1 = state.f.conformal_radius();

  double acc = 0.0;
  for (double theta : circle_grid(M)) {
    const Complex dir = std::polar(1.0, theta);
    double r = std::min(epsilon / a1, 0.5);
    bool done = false;
    for (int it = 0; it < 60; ++it) {
      const Complex fv = fs.evaluate(r * dir);
      const double mod = std::abs(fv);
      const double g = mod - epsilon;
      if (std::abs(g) <= 1e-14 * epsilon) {
        done = true;
        break;
      }
      const Complex fpv = fp.evaluate(r * dir);
      const double dg = (std::conj(fv) * fpv * dir).real() / mod;
      if (!(std::abs(dg) > 0.0)) break;
      r -= g / dg;
      r = std::clamp(r, 1e-14, 0.999);
    }
    if (!done) {
      throw Error("newton_failure", "inner boundary radius did not converge",
                  {{"theta", fmt(theta)}});
    }
    acc += std::log(epsilon / r);
  }
  return acc * kTwoPi / static_cast<double>(M);
}

ActionSeriesValue log_action_series(const ChainState& state) {
  if (state.f.order() < 4) {
    throw Error("invalid_config", "action needs order >= 4",
                {{"order", std::to_string(state.f.order())}});
  }
  const TruncatedSeries h = log_derivative_of_fprime(state.f);
  const int top = h.top_meaningful_degree();
  double sum = 0.0;
  for (int n = 0; n <= top; ++n) {
    sum += std::norm(h.coeff(n)) / static_cast<double>(n + 1);
  }
  ActionSeriesValue out;
  out.value = kPi * sum + kTwoPi * std::log(state.f.conformal_radius());
  out.tail_estimate = kPi * std::norm(h.coeff(top)) / static_cast<double>(top + 1);
  return out;
}

namespace {

double disk_integral(const TruncatedSeries& h, int R, int M) {
  const auto [nodes, weights] = gauss_legendre(R);
  const std::vector<double> angles = circle_grid(M);
  double acc = 0.0;
  for (int i = 0; i < R; ++i) {
    const double r = 0.5 * (nodes[static_cast<size_t>(i)] + 1.0);
    const double wr = 0.5 * weights[static_cast<size_t>(i)];
    double ring = 0.0;
    for (double theta : angles) {
      const Complex zeta = std::polar(r, theta);
      const Complex hv = h.evaluate(zeta);
      const Complex inv = Complex(1.0, 0.0) / zeta;
      // |h + 1/zeta|^2 - 1/|zeta|^2 expanded exactly; no cancellation
      ring += std::norm(hv) + 2.0 * (hv * std::conj(inv)).real();
    }
    acc += wr * r * ring * (kTwoPi / static_cast<double>(M));
  }
  return acc;
}

}  // namespace

ActionQuadratureValue log_action_quadrature(
    const ChainState& state, const ActionQuadratureControls& controls) {
  if (state.f.order() < 4) {
    throw Error("invalid_config", "action needs order >= 4",
                {{"order", std::to_string(state.f.order())}});
  }
  const int N = state.f.order();
  const int R = std::max(controls.radial_points, 64);
  const int M = std::max(controls.angular_points > 0 ? controls.angular_points
                                                     : 4 * N,
                         4 * N);
  const TruncatedSeries h = log_derivative_of_fprime(state.f);
  const double capacity = kTwoPi * std::log(state.f.conformal_radius());

  const double coarse = disk_integral(h, R, M) + capacity;
  const double fine = disk_integral(h, 2 * R, 2 * M) + capacity;
  ActionQuadratureValue out;
  out.value = fine;
  out.refinement_estimate = std::abs(fine - coarse);
  out.converged = out.refinement_estimate <= controls.tolerance;
  return out;
}

Theorem1Terms theorem1_rhs(const ChainState& state,
                           const BoundaryDensity& density, int angular_points) {
  require_valid_density(density);
  const int N = state.f.order();
  if (N < 4) {
    throw Error("invalid_config", "variation terms need order >= 4",
                {{"order", std::to_string(N)}});
  }
  const int M = theorem1_grid(angular_points, N, density.K);
  const TruncatedSeries fs = state.f.to_series();
  const TruncatedSeries h = log_derivative_of_fprime(state.f);
  const TruncatedSeries sf = schwarzian(fs);

  double term1 = 0.0;
  double term2 = 0.0;
  for (double theta : circle_grid(M)) {
    const Complex w = std::polar(1.0, theta);
    const double nu = density.evaluate(theta);
    const double curv = 1.0 + (w * h.evaluate(w)).real();
    term1 += curv * curv * nu;
    term2 += (w * w * sf.evaluate(w)).real() * nu;
  }
  const double scale = kTwoPi / static_cast<double>(M);
  Theorem1Terms out;
  out.term1 = term1 * scale;
  out.term2 = term2 * scale;
  out.rhs = out.term1 + out.term2 - kTwoPi;
  return out;
}

CurvatureSamples curvature_decomposition(const ChainState& state,
                                         const BoundaryDensity& density,
                                         int angular_points) {
  require_valid_density(density);
  const int N = state.f.order();
  const int M = theorem1_grid(angular_points, N, density.K);
  const TruncatedSeries fs = state.f.to_series();
  const TruncatedSeries fp = fs.derivative();
  const TruncatedSeries h = log_derivative_of_fprime(state.f);

  CurvatureSamples out;
  out.theta = circle_grid(M);
  out.kappa.reserve(out.theta.size());
  out.v_n.reserve(out.theta.size());
  out.kappa_vn.reserve(out.theta.size());

  double rearranged = 0.0;
  double direct = 0.0;
  for (double theta : out.theta) {
    const Complex w = std::polar(1.0, theta);
    const double mod_fp = std::abs(fp.evaluate(w));
    if (!(mod_fp > 1e-9)) {
      throw Error("boundary_degeneracy", "|f'| vanished on the circle grid",
                  {{"theta", fmt(theta)}, {"abs_fprime", fmt(mod_fp)}});
    }
    const double nu = density.evaluate(theta);
    const double curv_scaled = 1.0 + (w * h.evaluate(w)).real();
    const double kappa = curv_scaled / mod_fp;
    const double vn = 0.5 * mod_fp * nu;
    out.kappa.push_back(kappa);
    out.v_n.push_back(vn);
    out.kappa_vn.push_back(kappa * vn);
    rearranged += (kappa * vn) * (kappa * vn) / nu;
    direct += curv_scaled * curv_scaled * nu;
  }
  const double scale = kTwoPi / static_cast<double>(M);
  out.term1 = 4.0 * rearranged * scale;
  out.identity_gap = std::abs(out.term1 - direct * scale);
  return out;
}

EnergyReport verify_theorem1(const DrivingSpec& spec, int N, double t,
                             const Theorem1Controls& controls) {
  if (!admits_theorem1_check(spec)) {
    throw Error("invalid_config",
                "variation check needs a driver with a time-constant density");
  }
  const double h = controls.fd_step;
  if (!(h > 0.0) || !(t - h > 0.0)) {
    throw Error("invalid_config", "need 0 < fd_step < t",
                {{"t", fmt(t)}, {"fd_step", fmt(h)}});
  }

  const std::vector<double> outputs = {t - h, t - 0.5 * h, t, t + 0.5 * h,
                                       t + h};
  const std::vector<ChainState> states = evolve_chain(
      UnivalentCoefficients::identity(N), spec, t + h, controls.evolve, outputs);

  double S[5];
  for (int i = 0; i < 5; ++i) {
    S[i] = log_action_series(states[static_cast<size_t>(i)]).value;
  }
  const double fd_full = (S[4] - S[0]) / (2.0 * h);
  const double fd_half = (S[3] - S[1]) / h;
  const double fd_rich = (4.0 * fd_half - fd_full) / 3.0;

  const ChainState& at_t = states[2];
  const ActionSeriesValue series = log_action_series(at_t);
  const ActionQuadratureValue quad =
      log_action_quadrature(at_t, controls.quadrature);
  const BoundaryDensity density = driver_density(spec, at_t.f, t, N);
  const Theorem1Terms terms =
      theorem1_rhs(at_t, density, controls.angular_points);
  const CurvatureSamples curv =
      curvature_decomposition(at_t, density, controls.angular_points);

  // the final-display variant with the raw arclength weight, kept as a
  // diagnostic value only
  double literal = 0.0;
  for (size_t j = 0; j < curv.theta.size(); ++j) {
    const double nu = density.evaluate(curv.theta[j]);
    const double mod_fp = 2.0 * curv.v_n[j] / nu;
    literal += curv.kappa_vn[j] * curv.kappa_vn[j] * mod_fp;
  }
  literal *= 4.0 * kPi * kTwoPi / static_cast<double>(curv.theta.size());

  EnergyReport report;
  report.t = t;
  report.dirichlet = dirichlet_energy(at_t);
  report.log_action_series = series.value;
  report.log_action_series_tail = series.tail_estimate;
  report.log_action_quadrature = quad.value;
  report.theorem1_term1 = terms.term1;
  report.theorem1_term2 = terms.term2;
  report.theorem1_rhs = terms.rhs;
  report.fd_dSdt = fd_full;
  report.fd_step = h;
  report.residuals["fd_vs_rhs"] = std::abs(fd_full - terms.rhs);
  report.residuals["fd_vs_rhs_half"] = std::abs(fd_half - terms.rhs);
  report.residuals["fd_vs_rhs_richardson"] = std::abs(fd_rich - terms.rhs);
  report.residuals["fd_refinement"] = std::abs(fd_half - fd_full);
  report.residuals["action_route_gap"] = std::abs(series.value - quad.value);
  report.residuals["action_tail_estimate"] = series.tail_estimate;
  report.residuals["quadrature_refinement"] = quad.refinement_estimate;
  report.residuals["curvature_identity_gap"] = curv.identity_gap;
  report.residuals["literal_curvature_display"] = literal;
  report.residuals["velocity_convention_ratio"] = kTwoPi;
  return report;
}

Complex invert_univalent(const TruncatedSeries& f, Complex z, Complex zeta0,
                         int max_iter, double tolerance) {
  const TruncatedSeries fp = f.derivative();
  Complex zeta = zeta0;
  const double scale = std::max(1.0, std::abs(z));
  for (int it = 0; it < max_iter; ++it) {
    const Complex gap = f.evaluate(zeta) - z;
    if (std::abs(gap) <= tolerance * scale) return zeta;
    const Complex fpv = fp.evaluate(zeta);
    if (!(std::abs(fpv) > 1e-14)) {
      throw Error("newton_failure", "derivative vanished during inversion",
                  {{"re_z", fmt(z.real())}, {"im_z", fmt(z.imag())}});
    }
    zeta -= gap / fpv;
    if (std::abs(zeta) > 1.5) {
      throw Error("newton_failure", "inversion iterate left the disk",
                  {{"re_z", fmt(z.real())}, {"im_z", fmt(z.imag())}});
    }
  }
  throw Error("newton_failure", "inversion did not converge",
              {{"re_z", fmt(z.real())}, {"im_z", fmt(z.imag())}});
}

namespace {

double metric_phi(const TruncatedSeries& fp, Complex zeta) {
  return -std::log(std::norm(zeta)) - std::log(std::norm(fp.evaluate(zeta)));
}

}  // namespace

HarmonicityReport harmonicity_check(const ChainState& state,
                                    const HarmonicityControls& controls) {
  if (!(controls.delta > 0.0) || !(controls.inner > 0.0) ||
      !(controls.outer < 1.0) || !(controls.inner < controls.outer) ||
      controls.radial < 2 || controls.angular < 4) {
    throw Error("invalid_config", "bad harmonicity patch controls");
  }
  const TruncatedSeries fs = state.f.to_series();
  const TruncatedSeries fp = fs.derivative();

  const auto phi_at_image = [&](Complex z, Complex start) {
    const Complex zeta = invert_univalent(fs, z, start);
    return metric_phi(fp, zeta);
  };

  double max_full = 0.0;
  double max_half = 0.0;
  double max_extrap = 0.0;
  for (int i = 0; i < controls.radial; ++i) {
    const double r = controls.inner +
                     (controls.outer - controls.inner) * i /
                         static_cast<double>(controls.radial - 1);
    for (double theta : circle_grid(controls.angular)) {
      const Complex zeta0 = std::polar(r, theta);
      const Complex z0 = fs.evaluate(zeta0);
      const double centre = metric_phi(fp, zeta0);
      const auto laplacian = [&](double d) {
        const double east = phi_at_image(z0 + Complex(d, 0.0), zeta0);
        const double west = phi_at_image(z0 - Complex(d, 0.0), zeta0);
        const double north = phi_at_image(z0 + Complex(0.0, d), zeta0);
        const double south = phi_at_image(z0 - Complex(0.0, d), zeta0);
        return (east + west + north + south - 4.0 * centre) / (d * d);
      };
      const double full = laplacian(controls.delta);
      const double half = laplacian(0.5 * controls.delta);
      max_full = std::max(max_full, std::abs(full));
      max_half = std::max(max_half, std::abs(half));
      max_extrap = std::max(max_extrap, std::abs((4.0 * half - full) / 3.0));
    }
  }

  HarmonicityReport report;
  report.residual = max_full;
  report.residual_half = max_half;
  report.slope = max_half > 0.0 ? std::log2(max_full / max_half) : 2.0;
  report.extrapolated = max_extrap;
  return report;
}

GreenFieldSamples complex_green_field(const ChainState& state,
                                      const std::vector<Complex>& z_samples) {
  const TruncatedSeries fs = state.f.to_series();
  const TruncatedSeries fp = fs.derivative();

  // coarse preimage grid for Newton starts
  std::vector<Complex> grid;
  std::vector<Complex> grid_values;
  for (int i = 1; i <= 9; ++i) {
    const double r = 0.1 * i;
    for (double theta : circle_grid(64)) {
      const Complex zeta = std::polar(r, theta);
      grid.push_back(zeta);
      grid_values.push_back(fs.evaluate(zeta));
    }
  }

  GreenFieldSamples out;
  out.z = z_samples;
  for (const Complex& z : z_samples) {
    size_t best = 0;
    double best_gap = std::abs(grid_values[0] - z);
    for (size_t g = 1; g < grid.size(); ++g) {
      const double gap = std::abs(grid_values[g] - z);
      if (gap < best_gap) {
        best_gap = gap;
        best = g;
      }
    }
    const Complex zeta = invert_univalent(fs, z, grid[best]);
    if (std::abs(zeta) < 1e-8) {
      throw Error("invalid_config", "field is singular at the origin");
    }
    const Complex fpv = fp.evaluate(zeta);
    const Complex wp = -1.0 / (zeta * fpv);
    out.preimage.push_back(zeta);
    out.w_prime.push_back(wp);
    const Complex pullback = wp * fpv;
    out.max_pullback_residual =
        std::max(out.max_pullback_residual,
                 std::abs(pullback * pullback - 1.0 / (zeta * zeta)));
  }
  return out;
}

MetricDensity metric_density(const ChainState& state, int radial, int angular) {
  if (radial < 2 || angular < 4) {
    throw Error("invalid_config", "metric grid too small");
  }
  const TruncatedSeries fs = state.f.to_series();
  const TruncatedSeries fp = fs.derivative();

  MetricDensity out;
  out.theta = circle_grid(angular);
  const double r_min = 1e-4;
  const double r_max = 0.9;
  for (int i = 0; i < radial; ++i) {
    const double s = static_cast<double>(i) / static_cast<double>(radial - 1);
    out.r.push_back(r_min * std::pow(r_max / r_min, s));
  }
  for (double r : out.r) {
    std::vector<double> row;
    for (double theta : out.theta) {
      const Complex zeta = std::polar(r, theta);
      const double phi = metric_phi(fp, zeta);
      row.push_back(phi);
      const double bound = phi + std::log(std::norm(fs.evaluate(zeta)));
      out.origin_bound = std::max(out.origin_bound, std::abs(bound));
    }
    out.phi.push_back(std::move(row));
  }
  return out;
}

std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n) {
  if (n < 1) {
    throw Error("invalid_config", "quadrature needs at least one node");
  }
  std::vector<double> nodes(static_cast<size_t>(n));
  std::vector<double> weights(static_cast<size_t>(n));
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = 1.0;
      double p2 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j - 1.0) * x * p2 - (j - 1.0) * p3) / j;
      }
      dp = n * (x * p1 - p2) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes[static_cast<size_t>(i)] = -x;
    nodes[static_cast<size_t>(n - 1 - i)] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    weights[static_cast<size_t>(i)] = w;
    weights[static_cast<size_t>(n - 1 - i)] = w;
  }
  return {nodes, weights};
}

nlohmann::json report_to_json(const EnergyReport& report) {
  nlohmann::json j{{"t", report.t},
                   {"dirichlet", report.dirichlet},
                   {"log_action_series", report.log_action_series},
                   {"log_action_series_tail", report.log_action_series_tail},
                   {"log_action_quadrature", report.log_action_quadrature},
                   {"theorem1_term1", report.theorem1_term1},
                   {"theorem1_term2", report.theorem1_term2},
                   {"theorem1_rhs", report.theorem1_rhs},
                   {"fd_dSdt", report.fd_dSdt},
                   {"fd_step", report.fd_step}};
  j["residuals"] = nlohmann::json::object();
  for (const auto& [name, value] : report.residuals) {
    j["residuals"][name] = value;
  }
  return j;
}

void write_report_csv_header(std::ostream& os) {
  os << "t,dirichlet,S_series,S_quadrature,term1,term2,rhs,fd_dSdt,residual\n";
}

void write_report_csv_row(std::ostream& os, const EnergyReport& report) {
  const auto it = report.residuals.find("fd_vs_rhs");
  const double residual = it == report.residuals.end() ? 0.0 : it->second;
  os << fmt(report.t) << ',' << fmt(report.dirichlet) << ','
     << fmt(report.log_action_series) << ',' << fmt(report.log_action_quadrature)
     << ',' << fmt(report.theorem1_term1) << ',' << fmt(report.theorem1_term2)
     << ',' << fmt(report.theorem1_rhs) << ',' << fmt(report.fd_dSdt) << ','
     << fmt(residual) << '\n';
}

}  // namespace loewner
