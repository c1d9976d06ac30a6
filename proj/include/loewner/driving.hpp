#pragma once

#include <optional>
#include <tuple>
#include <utility>
#include <variant>
#include <vector>

#include "json.hpp"
#include "loewner/series.hpp"

namespace loewner {

// Boundary speed density nu(theta) stored through its Fourier modes
// nu_hat_k, k = 0..K; negative modes are implied by nu_hat_{-k} = conj(nu_hat_k)
// so reality is structural.  A valid density has nu_hat_0 = 2 (total mass
// 4*pi) and is strictly positive on the circle.
struct BoundaryDensity {
  int K = 0;
  std::vector<Complex> nu_hat;  // size K+1, index k

  double evaluate(double theta) const;

  static BoundaryDensity constant();  // nu = 2
  // nu = 2 + sum_k amp_k cos(k theta + phase_k), modes passed as
  // (k, amp, phase) triples.
  static BoundaryDensity cosine(
      const std::vector<std::tuple<int, double, double>>& modes);
};

struct DensityDiagnostics {
  double min_on_grid = 0.0;
  double normalization_residual = 0.0;  // nu_hat_0 - 2
  double hermitian_residual = 0.0;      // |Im nu_hat_0|
  int grid_points = 0;
};

inline constexpr double kDensityPositivityFloor = 1e-10;
inline constexpr double kDensityNormalizationTol = 1e-9;

DensityDiagnostics validate_density(const BoundaryDensity& density);
// Throws Error("invalid_density", ...) naming the violated invariant.
void require_valid_density(const BoundaryDensity& density);

// Carathéodory-class driving function p(zeta) = 1 + sum_{k>=1} p_k zeta^k
// with p_k = nu_hat_k (the exact Fourier pairing of the boundary kernel).
TruncatedSeries herglotz_from_density(const BoundaryDensity& density, int N);

// p(zeta) = (e^{iu} + zeta) / (e^{iu} - zeta): p_0 = 1, p_k = 2 e^{-iku}.
TruncatedSeries slit_kernel_series(double u, int N);
Complex slit_kernel_value(double u, Complex w);

// nu = 2 / (sigma |f'|^2) on the boundary with sigma the circle mean of
// 1/|f'|^2, so nu_hat_0 = 2 exactly.  Errors if |f'| degenerates on the grid.
BoundaryDensity laplacian_density(const UnivalentCoefficients& f, int K,
                                  double min_abs_fprime = 1e-6);

// Driver descriptions ---------------------------------------------------------

struct ConstantUnitDriver {};

struct SmoothDensityDriver {
  // keyframes (t_i, density_i) with strictly increasing t_i; linear
  // interpolation of modes in between, clamped outside.  A single keyframe
  // means a time-constant density.
  std::vector<std::pair<double, BoundaryDensity>> keyframes;

  BoundaryDensity at(double t) const;
  bool time_constant() const { return keyframes.size() <= 1; }
};

struct SlitKernelDriver {
  // piecewise-linear angle u(t) through knots (t_i, u_i); single knot means
  // constant u.
  std::vector<std::pair<double, double>> knots;

  double u(double t) const;
};

struct LaplacianGrowthDriver {
  int K = 0;  // density modes kept; 0 means "use the evolution order"
};

using DrivingSpec = std::variant<ConstantUnitDriver, SmoothDensityDriver,
                                 SlitKernelDriver, LaplacianGrowthDriver>;

void validate_spec(const DrivingSpec& spec);
bool needs_chain_state(const DrivingSpec& spec);
// True when a finite-difference d/dt check against the boundary integrals is
// meaningful (time-constant smooth density, constant driver, or Laplacian
// growth).
bool admits_theorem1_check(const DrivingSpec& spec);

// Truncated p(.,t) for the coefficient system.  f is consulted only by the
// Laplacian-growth driver.
TruncatedSeries driver_series(const DrivingSpec& spec,
                              const UnivalentCoefficients& f, double t, int N);

// Pointwise p(w,t) for trajectories; exact kernels, no truncation.  f may be
// null except for Laplacian growth.
Complex driver_value(const DrivingSpec& spec, const UnivalentCoefficients* f,
                     double t, Complex w, int N);

// The density seen at time t (for reports); requires a driver with one.
BoundaryDensity driver_density(const DrivingSpec& spec,
                               const UnivalentCoefficients& f, double t, int K);

// Serialization ---------------------------------------------------------------

nlohmann::json density_to_json(const BoundaryDensity& density);
BoundaryDensity density_from_json(const nlohmann::json& j);
nlohmann::json spec_to_json(const DrivingSpec& spec);
DrivingSpec spec_from_json(const nlohmann::json& j);

}  // namespace loewner
