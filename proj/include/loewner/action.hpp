#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "loewner/driving.hpp"
#include "loewner/evolution.hpp"
#include "loewner/series.hpp"

namespace loewner {

// Everything a variation run reports: both action routes, the boundary
// integrals, the finite-difference slope of the action, and named
// diagnostics (cross-check gaps, refinement estimates, convention notes).
struct EnergyReport {
  double t = 0.0;
  double dirichlet = 0.0;
  double log_action_series = 0.0;
  double log_action_series_tail = 0.0;
  double log_action_quadrature = 0.0;
  double theorem1_term1 = 0.0;
  double theorem1_term2 = 0.0;
  double theorem1_rhs = 0.0;
  double fd_dSdt = 0.0;
  double fd_step = 0.0;
  std::map<std::string, double> residuals;
};

// 2*pi*log a_1(t); for the unit driver this is exactly 2*pi*t.
double dirichlet_energy(const ChainState& state);

// Quadrature cross-check of the same energy: the field integral over the
// image domain minus the epsilon-disk, pulled back to the unit disk where the
// integrand is 1/|zeta|^2, plus the 2*pi*log(epsilon) counterterm.  The inner
// boundary radius r(theta) with |f(r e^{i theta})| = epsilon is found by
// Newton per angle, so the value is exp-convergent in the angular count and
// O(epsilon^2) from the counterterm.
double dirichlet_energy_quadrature(const ChainState& state, double epsilon,
                                   int angular_points = 256);

struct ActionSeriesValue {
  double value = 0.0;
  double tail_estimate = 0.0;  // pi |h_top|^2 / (top+1), h = f''/f'
};

// Coefficient-sum route: pi * sum |h_n|^2/(n+1) + 2*pi*log a_1 with
// h = f''/f' as a truncated series.  Requires order >= 4.
ActionSeriesValue log_action_series(const ChainState& state);

struct ActionQuadratureControls {
  int radial_points = 64;   // Gauss-Legendre nodes on [0,1]
  int angular_points = 0;   // 0 means 4*order
  double tolerance = 1e-6;  // refinement gate for the converged flag
};

struct ActionQuadratureValue {
  double value = 0.0;
  double refinement_estimate = 0.0;  // |coarse - doubled|
  bool converged = true;
};

// Disk-integral route: integral of |h + 1/zeta|^2 - 1/|zeta|^2 in polar
// coordinates (Gauss-Legendre radially, trapezoid in the angle) plus the
// capacity term.  h is evaluated from the same truncated series as the
// coefficient route, so the two must agree to rounding.
ActionQuadratureValue log_action_quadrature(
    const ChainState& state, const ActionQuadratureControls& controls = {});

struct Theorem1Terms {
  double term1 = 0.0;  // integral of [Re(1 + e^{i theta} f''/f')]^2 nu
  double term2 = 0.0;  // integral of Re(e^{2 i theta} S_f) nu
  double rhs = 0.0;    // term1 + term2 - 2*pi
};

// Boundary integrals of the variation formula by uniform trapezoid; the
// integrands are trigonometric polynomials, so the default grid (at least
// 4*order, widened for high density modes) makes the quadrature exact.
Theorem1Terms theorem1_rhs(const ChainState& state,
                           const BoundaryDensity& density,
                           int angular_points = 0);

struct Theorem1Controls {
  double fd_step = 1e-4;
  EvolveControls evolve;
  ActionQuadratureControls quadrature;
  int angular_points = 0;
};

// End-to-end check of dS/dt = term1 + term2 - 2*pi for a driver whose density
// is constant in time (unit, fixed smooth density, or Laplacian growth).
// Evolves from the identity, differentiates the series action centrally at
// fd_step and fd_step/2, and reports the boundary-integral prediction with
// the gaps in residuals: fd_vs_rhs, fd_vs_rhs_half, fd_vs_rhs_richardson,
// fd_refinement, action_route_gap, curvature_identity_gap, and the
// convention diagnostics literal_curvature_display / velocity_convention_ratio.
EnergyReport verify_theorem1(const DrivingSpec& spec, int N, double t,
                             const Theorem1Controls& controls = {});

struct CurvatureSamples {
  std::vector<double> theta;
  std::vector<double> kappa;     // boundary curvature of the image circle
  std::vector<double> v_n;       // normal velocity |f'| nu / 2
  std::vector<double> kappa_vn;  // their product, Re(1+e^{i t}f''/f') nu/2
  double term1 = 0.0;            // recomputed as 4 * integral (kappa v_n)^2 / nu
  double identity_gap = 0.0;     // |term1 - theorem1 term1|
};

// Boundary geometry behind term1: kappa |f'| = Re(1 + e^{i theta} f''/f'),
// v_n = |f'| nu/2, and the rearrangement term1 = 4 * integral (kappa v_n)^2/nu.
CurvatureSamples curvature_decomposition(const ChainState& state,
                                         const BoundaryDensity& density,
                                         int angular_points = 0);

struct HarmonicityControls {
  double delta = 1e-3;   // image-plane stencil spacing
  double inner = 0.2;    // annulus radii in the preimage disk
  double outer = 0.9;
  int radial = 5;
  int angular = 16;
};

struct HarmonicityReport {
  double residual = 0.0;       // max |five-point Laplacian of phi| at delta
  double residual_half = 0.0;  // same at delta/2
  double slope = 0.0;          // log2(residual / residual_half), ~2
  double extrapolated = 0.0;   // max |(4 L_{d/2} - L_d)/3|, the genuine defect
};

// phi(z) = -log(|zeta|^2 |f'(zeta)|^2) at zeta = f^{-1}(z) is harmonic away
// from the origin.  Checks this with a five-point Laplacian on image-plane
// stencils centred at f(annulus grid); preimages of stencil points come from
// Newton inversion, so the only residual is the O(delta^2) stencil error.
HarmonicityReport harmonicity_check(const ChainState& state,
                                    const HarmonicityControls& controls = {});

struct GreenFieldSamples {
  std::vector<Complex> z;
  std::vector<Complex> preimage;
  std::vector<Complex> w_prime;        // -1/(zeta f'(zeta))
  double max_pullback_residual = 0.0;  // |(W' f')^2 - 1/zeta^2|
};

// Gradient of the Green potential at the given image points, located by
// Newton inversion of f from the best coarse-grid preimage.
GreenFieldSamples complex_green_field(const ChainState& state,
                                      const std::vector<Complex>& z_samples);

struct MetricDensity {
  std::vector<double> r;      // preimage radii (log-spaced toward 0)
  std::vector<double> theta;  // preimage angles
  // phi[i][j] = -log(r_i^2 |f'(r_i e^{i theta_j})|^2)
  std::vector<std::vector<double>> phi;
  // max |phi(f(zeta)) + log |f(zeta)|^2|: stays bounded as r -> 0
  double origin_bound = 0.0;
};

MetricDensity metric_density(const ChainState& state, int radial = 16,
                             int angular = 32);

// Newton inversion of a univalent truncated series: solves f(zeta) = z from
// the given start.  Throws Error("newton_failure") after max_iter steps.
Complex invert_univalent(const TruncatedSeries& f, Complex z, Complex zeta0,
                         int max_iter = 50, double tolerance = 1e-13);

// Nodes and weights on [-1, 1].
std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n);

nlohmann::json report_to_json(const EnergyReport& report);
void write_report_csv_header(std::ostream& os);
void write_report_csv_row(std::ostream& os, const EnergyReport& report);

}  // namespace loewner
