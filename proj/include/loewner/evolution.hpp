#pragma once

#include <iosfwd>
#include <vector>

#include "loewner/driving.hpp"
#include "loewner/series.hpp"

namespace loewner {

struct ChainState {
  double t = 0.0;
  UnivalentCoefficients f = UnivalentCoefficients::identity(1);
};

struct EvolveControls {
  double dt = 1e-3;
  // |a_1(t) - a_1(0) e^t| is checked against 10x this at every output.
  double a1_tolerance = 1e-8;
  int lg_modes = 0;  // Laplacian-growth density modes; 0 means order N
};

// Right-hand side of the coefficient system: da_n/dt = sum_m m a_m p_{n-m}.
// p must satisfy p_0 = 1.
std::vector<Complex> coefficient_rhs(const UnivalentCoefficients& f,
                                     const TruncatedSeries& p);

// Classical fixed-step RK4 march of the coefficient system, landing exactly
// on every requested output time (ascending, within [0, t_end]; empty list
// means {t_end}).  Time-dependent drivers are evaluated per stage.
std::vector<ChainState> evolve_chain(const UnivalentCoefficients& f0,
                                     const DrivingSpec& spec, double t_end,
                                     const EvolveControls& controls = {},
                                     std::vector<double> output_times = {});

struct Trajectory {
  Complex z0;
  std::vector<double> times;
  std::vector<Complex> w;
};

struct TrajectoryControls {
  double dt = 1e-3;
  int sample_stride = 100;        // record every k-th step
  double slit_guard = 1e-9;       // stop when |1 - e^{-iu} w| drops below
  int lg_order = 16;              // co-evolved chain order for Laplacian growth
};

// Characteristic flow dw/dt = -w p(w,t), w(0) = z0, |z0| < 1.
Trajectory solve_lkord(Complex z0, const DrivingSpec& spec, double t_end,
                       const TrajectoryControls& controls = {});

struct LimitRecovery {
  std::vector<Complex> grid;
  std::vector<Complex> f_values;   // from the doubled horizon
  double error_estimate = 0.0;     // max grid deviation between horizons
  bool converged = true;
  double horizon = 0.0;
};

// f(z) = lim_{t->inf} e^t w(z,t) sampled on a grid, with a horizon-doubling
// consistency estimate: values at T and 2T must agree within 10x tolerance.
LimitRecovery recover_f_limit(const DrivingSpec& spec,
                              const std::vector<Complex>& z_grid, double T,
                              const TrajectoryControls& controls = {},
                              double tolerance = 1e-6);

// Limit map coefficients a_1..a_N via circle samples at |z| = sample_radius.
UnivalentCoefficients recover_f_coefficients(const DrivingSpec& spec, int N,
                                             double T,
                                             const TrajectoryControls& controls = {},
                                             double tolerance = 1e-6,
                                             double sample_radius = 0.5);

// Sup-norm gap between d(f')/dt computed from the coefficient system and the
// zeta-derivative of zeta f' p, over the degrees both routes determine.
// Vanishes up to rounding when p matches the chain's driver.
double hamiltonian_residual(const ChainState& state, const TruncatedSeries& p);

// Chain serialization: one JSON object per line, {"t": ..., "a": [[re,im],...]}.
void write_chain_jsonl(std::ostream& os, const std::vector<ChainState>& chain);
std::vector<ChainState> read_chain_jsonl(std::istream& is);

// Trajectory CSV: header "t,re_w,im_w".
void write_trajectory_csv(std::ostream& os, const Trajectory& trajectory);

}  // namespace loewner
