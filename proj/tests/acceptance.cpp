// Acceptance gates for the chain/action/variation toolkit.  Each numbered
// check prints one [PASS]/[FAIL] line; the exit code is the failure count.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "loewner/action.hpp"
#include "loewner/driving.hpp"
#include "loewner/errors.hpp"
#include "loewner/evolution.hpp"
#include "loewner/series.hpp"
#include "loewner/virasoro.hpp"

using namespace loewner;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

int g_failures = 0;

void report(int index, const std::string& name, bool pass,
            const std::string& detail) {
  std::printf("[%s] %d. %s (%s)\n", pass ? "PASS" : "FAIL", index, name.c_str(),
              detail.c_str());
  if (!pass) ++g_failures;
}

void run(int index, const std::string& name,
         const std::function<std::pair<bool, std::string>()>& check) {
  try {
    const auto [pass, detail] = check();
    report(index, name, pass, detail);
  } catch (const Error& e) {
    report(index, name, false, e.diagnostic_line());
  } catch (const std::exception& e) {
    report(index, name, false, std::string("exception: ") + e.what());
  }
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

double ms_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - start)
      .count();
}

DrivingSpec cosine_spec() {
  SmoothDensityDriver driver;
  driver.keyframes = {{0.0, BoundaryDensity::cosine({{1, 1.0, 0.0}})}};
  return driver;
}

DrivingSpec slit_spec() {
  SlitKernelDriver driver;
  driver.knots = {{0.0, 0.0}};
  return driver;
}

UnivalentCoefficients quadratic_map(int N) {
  std::vector<Complex> a(static_cast<size_t>(N), Complex(0.0, 0.0));
  a[0] = Complex(1.0, 0.0);
  a[1] = Complex(0.25, 0.0);
  return UnivalentCoefficients{std::move(a)};
}

UnivalentCoefficients quartic_map(int N) {
  std::vector<Complex> a(static_cast<size_t>(N), Complex(0.0, 0.0));
  a[0] = Complex(1.0, 0.0);
  a[1] = Complex(0.2, 0.0);
  a[2] = Complex(0.08, 0.0);
  a[3] = Complex(0.02, 0.0);
  return UnivalentCoefficients{std::move(a)};
}

UnivalentCoefficients koebe_map(int N) {
  std::vector<Complex> a;
  for (int n = 1; n <= N; ++n) a.emplace_back(n, 0.0);
  return UnivalentCoefficients{std::move(a)};
}

CircleVectorField random_field(std::mt19937_64& rng, int K) {
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  CircleVectorField out(K);
  for (int k = -K; k <= K; ++k) out.set_mode(k, Complex(uni(rng), uni(rng)));
  return out;
}

// --- 1. trivial chain --------------------------------------------------------

std::pair<bool, std::string> criterion_trivial_chain() {
  const auto start = std::chrono::steady_clock::now();
  double worst_a1 = 0.0;
  double worst_action = 0.0;
  const std::vector<ChainState> chain =
      evolve_chain(UnivalentCoefficients::identity(12), ConstantUnitDriver{},
                   1.0, {}, {0.0, 0.25, 0.5, 0.75, 1.0});
  for (const ChainState& state : chain) {
    worst_a1 = std::max(worst_a1,
                        std::abs(state.f.a(1) - Complex(std::exp(state.t), 0.0)));
    worst_action = std::max(
        worst_action,
        std::abs(log_action_series(state).value - kTwoPi * state.t));
  }

  Theorem1Controls controls;
  controls.fd_step = 1e-3;
  double worst_side = 0.0;
  for (double t : {0.25, 0.5, 0.75, 1.0}) {
    const EnergyReport rep = verify_theorem1(ConstantUnitDriver{}, 12, t, controls);
    worst_side = std::max(worst_side, std::abs(rep.fd_dSdt - kTwoPi));
    worst_side = std::max(worst_side, std::abs(rep.theorem1_rhs - kTwoPi));
  }
  const double elapsed = ms_since(start);
  const bool pass = worst_a1 < 1e-8 && worst_action < 1e-10 &&
                    worst_side < 1e-10 && elapsed < 1000.0;
  return {pass, "|a1-e^t|=" + fmt(worst_a1) + " |S-2pit|=" + fmt(worst_action) +
                    " |sides-2pi|=" + fmt(worst_side) + " " + fmt(elapsed) +
                    "ms"};
}

// --- 2. headline variation check --------------------------------------------

std::pair<bool, std::string> criterion_variation() {
  const auto start = std::chrono::steady_clock::now();
  double worst = 0.0;
  double worst_ratio = 1e9;
  for (double t : {0.1, 0.2, 0.3, 0.4, 0.5}) {
    Theorem1Controls controls;
    controls.fd_step = 1e-4;
    const EnergyReport rep = verify_theorem1(cosine_spec(), 16, t, controls);
    worst = std::max(worst, rep.residuals.at("fd_vs_rhs"));

    // halving response measured at a step where truncation dominates rounding
    Theorem1Controls coarse;
    coarse.fd_step = 2e-3;
    const EnergyReport ratio_rep = verify_theorem1(cosine_spec(), 16, t, coarse);
    const double full = ratio_rep.residuals.at("fd_vs_rhs");
    const double half = ratio_rep.residuals.at("fd_vs_rhs_half");
    if (half > 0.0) worst_ratio = std::min(worst_ratio, full / half);
  }
  const double elapsed = ms_since(start);
  const bool pass = worst < 1e-4 && worst_ratio > 2.5 && elapsed < 10000.0;
  return {pass, "max|fd-rhs|=" + fmt(worst) + " min halving ratio=" +
                    fmt(worst_ratio) + " " + fmt(elapsed) + "ms"};
}

// --- 3. dual-route action -----------------------------------------------------

std::pair<bool, std::string> criterion_action_routes() {
  const ChainState quad{0.0, quadratic_map(24)};
  const ActionSeriesValue series_q = log_action_series(quad);
  const ActionQuadratureValue quad_q = log_action_quadrature(quad);
  const double gap_q = std::abs(series_q.value - quad_q.value);
  const double closed = -std::numbers::pi * std::log(0.75);
  const double anchor = std::abs(series_q.value - closed);

  const ChainState koebe{0.0, koebe_map(24)};
  const double gap_k = std::abs(log_action_series(koebe).value -
                                log_action_quadrature(koebe).value);

  const bool pass = gap_q < 1e-6 && gap_k < 1e-4 && anchor < 1e-8;
  return {pass, "quadratic gap=" + fmt(gap_q) + " koebe gap=" + fmt(gap_k) +
                    " closed-form gap=" + fmt(anchor)};
}

// --- 4. laplacian growth ------------------------------------------------------

std::pair<bool, std::string> criterion_laplacian_growth() {
  const std::vector<ChainState> chain =
      evolve_chain(UnivalentCoefficients::identity(16),
                   LaplacianGrowthDriver{}, 1.0, {},
                   {0.25, 0.5, 0.75, 1.0});
  double worst_coeff = 0.0;
  for (const ChainState& state : chain) {
    for (int n = 2; n <= 16; ++n) {
      worst_coeff = std::max(worst_coeff, std::abs(state.f.a(n)));
    }
  }
  const EnergyReport rep = verify_theorem1(LaplacianGrowthDriver{}, 16, 0.5);
  const double residual = rep.residuals.at("fd_vs_rhs");
  const bool pass = worst_coeff < 1e-7 && residual < 1e-6;
  return {pass, "max|a_n>=2|=" + fmt(worst_coeff) + " variation residual=" +
                    fmt(residual)};
}

// --- 5. variation identity suite ----------------------------------------------

std::pair<bool, std::string> criterion_contour_and_brackets() {
  const UnivalentCoefficients f = quartic_map(16);
  const TruncatedSeries fs = f.to_series();
  std::vector<Complex> zetas;
  for (int i = 0; i < 20; ++i) {
    zetas.push_back(std::polar(0.08 + 0.54 * i / 19.0, 0.37 + 0.31 * i));
  }
  double contour_gap = 0.0;
  for (int k = -2; k <= 3; ++k) {
    const std::vector<Complex> got = goluzin_schiffer(
        f, CircleVectorField::basis(k, std::max(std::abs(k), 1)), zetas);
    for (size_t i = 0; i < zetas.size(); ++i) {
      contour_gap = std::max(
          contour_gap, std::abs(got[i] - variation_closed_form(fs, k, zetas[i])));
    }
  }

  std::mt19937_64 rng(2026);
  double algebra = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const CircleVectorField a = random_field(rng, 6);
    const CircleVectorField b = random_field(rng, 6);
    const CircleVectorField c = random_field(rng, 6);
    const CircleVectorField ab = witt_bracket(a, b);
    const CircleVectorField ba = witt_bracket(b, a);
    for (int k = -ab.max_mode(); k <= ab.max_mode(); ++k) {
      algebra = std::max(algebra, std::abs(ab.mode(k) + ba.mode(k)));
    }
    const CircleVectorField j1 = witt_bracket(a, witt_bracket(b, c));
    const CircleVectorField j2 = witt_bracket(b, witt_bracket(c, a));
    const CircleVectorField j3 = witt_bracket(c, witt_bracket(a, b));
    for (int k = -j1.max_mode(); k <= j1.max_mode(); ++k) {
      algebra = std::max(algebra,
                         std::abs(j1.mode(k) + j2.mode(k) + j3.mode(k)));
    }
    algebra = std::max(algebra, std::abs(gelfand_fuks(ab, c) +
                                         gelfand_fuks(witt_bracket(b, c), a) +
                                         gelfand_fuks(witt_bracket(c, a), b)));
  }

  double kernel = 0.0;
  for (int m : {-1, 0, 1}) {
    kernel = std::max(kernel,
                      std::abs(gelfand_fuks(CircleVectorField::basis(m, 2),
                                            CircleVectorField::basis(-m, 2))));
  }

  const bool pass = contour_gap < 1e-8 && algebra < 1e-10 && kernel == 0.0;
  return {pass, "contour gap=" + fmt(contour_gap) + " algebra residual=" +
                    fmt(algebra) + " kernel=" + fmt(kernel)};
}

// --- 6. polynomial anchors ------------------------------------------------------

std::pair<bool, std::string> criterion_polynomials() {
  double anchor_gap = 0.0;
  for (double charge : {1.0, 12.0}) {
    const std::vector<CoordinatePolynomial> P = neretin_recursion(3, charge);
    CoordinatePolynomial p2 = CoordinatePolynomial::variable(3) -
                              CoordinatePolynomial::variable(2) *
                                  CoordinatePolynomial::variable(2);
    p2 *= Complex(charge / 2.0, 0.0);
    CoordinatePolynomial p3 =
        CoordinatePolynomial::variable(4) -
        Complex(2.0, 0.0) * (CoordinatePolynomial::variable(2) *
                             CoordinatePolynomial::variable(3)) +
        CoordinatePolynomial::variable(2) * CoordinatePolynomial::variable(2) *
            CoordinatePolynomial::variable(2);
    p3 *= Complex(2.0 * charge, 0.0);
    anchor_gap = std::max(anchor_gap, (P[2] - p2).max_abs());
    anchor_gap = std::max(anchor_gap, (P[3] - p3).max_abs());
  }

  const double charge = 1.0;
  const int kmax = 8;
  const std::vector<CoordinatePolynomial> table = neretin_recursion(kmax, charge);
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> uni(-0.5, 0.5);
  double dual_gap = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Complex> a(12, Complex(0.0, 0.0));
    a[0] = Complex(1.0, 0.0);
    std::map<int, Complex> values;
    for (int j = 2; j <= 12; ++j) {
      a[static_cast<size_t>(j - 1)] = Complex(uni(rng), uni(rng));
      values[j] = a[static_cast<size_t>(j - 1)];
    }
    const TruncatedSeries gen =
        neretin_generatrix(UnivalentCoefficients{std::move(a)}, charge);
    for (int k = 2; k <= kmax; ++k) {
      dual_gap = std::max(
          dual_gap,
          std::abs(gen.coeff(k) - table[static_cast<size_t>(k)].evaluate(values)));
    }
  }

  const bool pass = anchor_gap < 1e-10 && dual_gap < 1e-10;
  return {pass,
          "anchor gap=" + fmt(anchor_gap) + " dual-route gap=" + fmt(dual_gap)};
}

// --- 7. coefficient bounds ------------------------------------------------------

std::pair<bool, std::string> criterion_coefficient_bounds() {
  SmoothDensityDriver smooth_b;
  smooth_b.keyframes = {
      {0.0, BoundaryDensity::cosine({{1, 0.6, 0.3}, {3, 0.4, -1.0}})}};
  SmoothDensityDriver smooth_c;
  smooth_c.keyframes = {{0.0, BoundaryDensity::cosine({{1, 0.2, 0.0}})},
                        {1.0, BoundaryDensity::cosine({{1, 0.8, 0.0}})}};

  struct Case {
    DrivingSpec spec;
    double t_end;
  };
  const std::vector<Case> matrix = {
      {ConstantUnitDriver{}, 1.0},
      {cosine_spec(), 0.5},
      {DrivingSpec{smooth_b}, 0.5},
      {DrivingSpec{smooth_c}, 0.5},
      {slit_spec(), 0.25},
      {LaplacianGrowthDriver{}, 1.0},
  };

  double worst_excess = 0.0;
  for (const Case& item : matrix) {
    std::vector<double> times;
    for (int i = 1; i <= 5; ++i) times.push_back(item.t_end * i / 5.0);
    const std::vector<ChainState> chain = evolve_chain(
        UnivalentCoefficients::identity(16), item.spec, item.t_end, {}, times);
    for (const ChainState& state : chain) {
      const Complex c2 = state.f.c(2);
      const Complex c3 = state.f.c(3);
      worst_excess = std::max(worst_excess, std::abs(c2) - 2.0);
      worst_excess = std::max(worst_excess, std::abs(c3) - 3.0);
      worst_excess = std::max(worst_excess, std::abs(c3 - c2 * c2) - 1.0);
    }
  }

  const UnivalentCoefficients limit = recover_f_coefficients(slit_spec(), 4, 20.0);
  const Complex c2 = limit.c(2);
  const Complex c3 = limit.c(3);
  const double cusp_gap = std::abs(std::abs(c3 - c2 * c2) - 1.0);

  const bool pass = worst_excess < 1e-8 && cusp_gap < 1e-6;
  return {pass, "worst bound excess=" + fmt(worst_excess) +
                    " |c3-c2^2| limit gap=" + fmt(cusp_gap)};
}

// --- 8. harmonicity --------------------------------------------------------------

std::pair<bool, std::string> criterion_harmonicity() {
  const std::vector<ChainState> evolved =
      evolve_chain(UnivalentCoefficients::identity(16), cosine_spec(), 0.4, {},
                   {0.4});
  const std::vector<ChainState> states = {
      ChainState{0.0, UnivalentCoefficients::identity(8)},
      ChainState{0.0, quadratic_map(16)},
      evolved.back(),
  };
  double worst_extrapolated = 0.0;
  double worst_slope = 10.0;
  for (const ChainState& state : states) {
    const HarmonicityReport rep = harmonicity_check(state);
    worst_extrapolated = std::max(worst_extrapolated, rep.extrapolated);
    if (rep.residual > 1e-12) worst_slope = std::min(worst_slope, rep.slope);
  }
  const bool pass = worst_extrapolated < 1e-6 && worst_slope > 1.5;
  return {pass, "max extrapolated=" + fmt(worst_extrapolated) +
                    " min slope=" + fmt(worst_slope)};
}

// --- 9. slit first integral -------------------------------------------------------

std::pair<bool, std::string> criterion_slit_invariant() {
  double worst = 0.0;
  for (double r : {0.25, 0.5}) {
    for (double angle : {0.1, 1.3, 2.4, 3.8}) {
      const Complex z0 = std::polar(r, angle);
      const Trajectory traj = solve_lkord(z0, slit_spec(), 3.0);
      const Complex invariant0 = z0 / ((1.0 + z0) * (1.0 + z0));
      for (size_t i = 0; i < traj.times.size(); ++i) {
        const Complex w = traj.w[i];
        const Complex inv =
            std::exp(traj.times[i]) * w / ((1.0 + w) * (1.0 + w));
        worst = std::max(worst, std::abs(inv - invariant0));
      }
    }
  }
  const bool pass = worst < 1e-8;
  return {pass, "max invariant drift=" + fmt(worst)};
}

}  // namespace

int main() {
  run(1, "trivial chain exactness", criterion_trivial_chain);
  run(2, "headline variation check", criterion_variation);
  run(3, "dual-route action agreement", criterion_action_routes);
  run(4, "laplacian-growth circle invariance", criterion_laplacian_growth);
  run(5, "variation identity suite", criterion_contour_and_brackets);
  run(6, "polynomial anchors", criterion_polynomials);
  run(7, "coefficient-bound properties", criterion_coefficient_bounds);
  run(8, "harmonicity of the metric potential", criterion_harmonicity);
  run(9, "slit-driver first integral", criterion_slit_invariant);

  if (g_failures == 0) {
    std::printf("all acceptance checks passed\n");
  } else {
    std::printf("%d acceptance check(s) failed\n", g_failures);
  }
  return g_failures;
}
