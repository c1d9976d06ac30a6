#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "json.hpp"
#include "loewner/driving.hpp"
#include "loewner/series.hpp"

namespace loewner {

// Trigonometric-polynomial vector field on the circle, stored by Fourier
// modes e^{ik theta}, |k| <= K.  Complex coefficients are allowed: the
// variation formulas extend by complex linearity.
class CircleVectorField {
 public:
  explicit CircleVectorField(int K);

  // nu_k = -i e^{ik theta}
  static CircleVectorField basis(int k, int K);

  int max_mode() const { return K_; }
  Complex mode(int k) const;
  void set_mode(int k, Complex value);

  Complex evaluate_angle(double theta) const;
  // Laurent extension sum_k phi_k w^k off the circle
  Complex evaluate(Complex w) const;
  bool is_real(double tol = 1e-12) const;

 private:
  int K_;
  std::vector<Complex> modes_;  // index k + K_
};

// [a, b] = a b' - a' b, exact on modes; output support grows to Ka + Kb.
CircleVectorField witt_bracket(const CircleVectorField& a,
                               const CircleVectorField& b);

// omega(a, b) = -(1/4 pi) integral (a' + a''') b dtheta
//             = (i/2) sum_k k (k^2 - 1) a_k b_{-k}; exact Fourier pairing.
Complex gelfand_fuks(const CircleVectorField& a, const CircleVectorField& b);

// Measured ratio omega(nu_m, nu_{-m}) / (m (m^2 - 1)) on the -i e^{ik theta}
// basis; the mode-form central term m(m^2-1) holds after dividing by this.
inline constexpr Complex kGelfandFuksBasisFactor{0.0, -0.5};

struct VirasoroElement {
  CircleVectorField field;
  Complex central{0.0, 0.0};
};

// [(a, x), (b, y)] = (witt_bracket(a, b), (charge/12) omega(a, b)); the
// central coordinates of the inputs do not enter.
VirasoroElement virasoro_bracket(const VirasoroElement& a,
                                 const VirasoroElement& b, double charge);

// Sparse polynomials in the affine coordinates c_2, c_3, ... ----------------

// variable index (>= 2) -> positive exponent
using Monomial = std::map<int, int>;

class CoordinatePolynomial {
 public:
  CoordinatePolynomial() = default;

  static CoordinatePolynomial constant(Complex value);
  static CoordinatePolynomial variable(int j);

  const std::map<Monomial, Complex>& terms() const { return terms_; }
  Complex coeff(const Monomial& m) const;
  void add_term(const Monomial& m, Complex coefficient);

  CoordinatePolynomial& operator+=(const CoordinatePolynomial& rhs);
  CoordinatePolynomial& operator-=(const CoordinatePolynomial& rhs);
  CoordinatePolynomial& operator*=(Complex scalar);

  friend CoordinatePolynomial operator+(CoordinatePolynomial a,
                                        const CoordinatePolynomial& b) {
    a += b;
    return a;
  }
  friend CoordinatePolynomial operator-(CoordinatePolynomial a,
                                        const CoordinatePolynomial& b) {
    a -= b;
    return a;
  }
  friend CoordinatePolynomial operator*(Complex s, CoordinatePolynomial a) {
    a *= s;
    return a;
  }
  friend CoordinatePolynomial operator*(const CoordinatePolynomial& a,
                                        const CoordinatePolynomial& b);

  CoordinatePolynomial derivative(int j) const;  // d/dc_j
  // absent variables evaluate as 0
  Complex evaluate(const std::map<int, Complex>& values) const;

  int max_variable() const;
  double max_abs() const;
  bool is_zero(double tol = 0.0) const;
  void prune(double tol);

  // grading weight(c_j) = j - 1
  static int monomial_weight(const Monomial& m);
  // weight if homogeneous (zero polynomial reports weight 0), else nullopt
  std::optional<int> homogeneous_weight() const;

 private:
  std::map<Monomial, Complex> terms_;
};

// The derivation matching the closed variation forms on coefficients:
//   k = 0:  sum_{n>=2} (n-1) c_n d/dc_n
//   k >= 1: d/dc_{k+1} + sum_{n>=2} n c_n d/dc_{n+k}
// restricted to variables <= var_limit; generator terms that would reach past
// the limit are skipped and counted in dropped_terms when they would have
// acted on P.
CoordinatePolynomial kirillov_coordinate_operator(int k,
                                                  const CoordinatePolynomial& P,
                                                  int var_limit,
                                                  int* dropped_terms = nullptr);

// P_0..P_{k_max} solving L_m(P_n) = (n+m) P_{n-m} + (charge/12) m (m^2-1)
// delta_{n,m}, each P_n homogeneous of weight n.  Solved per weight by least
// squares over the partition monomials and re-verified; an unsatisfiable
// system throws Error("recursion_inconsistency").
std::vector<CoordinatePolynomial> neretin_recursion(int k_max, double charge);

// (charge/12) zeta^2 S_f(zeta): the k-th coefficient equals P_k at f's
// coordinates.  Needs order >= 5; f is rescaled to a_1 = 1 internally.
TruncatedSeries neretin_generatrix(const UnivalentCoefficients& f,
                                   double charge);

struct BieberbachValues {
  double abs_c2 = 0.0;            // <= 2 on univalent maps
  double abs_c3_minus_c2sq = 0.0; // <= 1, extremal on the cusp map
  Complex p2_over_c{0.0, 0.0};    // (c_3 - c_2^2)/2
  Complex p3_over_c{0.0, 0.0};    // 2 (c_4 - 2 c_2 c_3 + c_2^3)
};

BieberbachValues bieberbach_functionals(const UnivalentCoefficients& f);

// Contour variation ----------------------------------------------------------

struct ContourControls {
  double contour_radius = 0.9;
  int nodes = 1024;
};

// L_nu[f](zeta) = (f(zeta)^2 / 2 pi) contour-int (w f'/f)^2 nu(w) /
// (f(w) - f(zeta)) dw/w over |w| = contour_radius.  Before evaluating, the
// winding number of f - f(zeta) around the contour is checked to be one
// (injectivity inside), else Error("contour_injectivity").
std::vector<Complex> goluzin_schiffer(const TruncatedSeries& f,
                                      const CircleVectorField& nu,
                                      const std::vector<Complex>& zeta_samples,
                                      const ContourControls& controls = {});
std::vector<Complex> goluzin_schiffer(const UnivalentCoefficients& f,
                                      const CircleVectorField& nu,
                                      const std::vector<Complex>& zeta_samples,
                                      const ContourControls& controls = {});

// The same variation as a Laurent series on the window [-4, order], recovered
// from circle samples at |zeta| = sample_radius.
TruncatedSeries goluzin_schiffer_series(const TruncatedSeries& f,
                                        const CircleVectorField& nu,
                                        const ContourControls& controls = {},
                                        double sample_radius = 0.5);

// Printed closed forms, evaluated pointwise:
//   k >= 1: zeta^{1+k} f'        k = 0: zeta f' - f
//   k = -1: f' - 1 - 2 c_2 f     k = -2: f'/zeta - 1/f - 3c_2 + (c_2^2-4c_3) f
// The k < 0 forms require a_1 = 1.  k < -2 is not covered.
Complex variation_closed_form(const TruncatedSeries& f, int k, Complex zeta);

struct CommutatorCheck {
  TruncatedSeries nested;  // D_2 L_1 - D_1 L_2 by central differences
  TruncatedSeries direct;  // L_{[nu1,nu2]}[f]
  double max_gap = 0.0;    // over the degrees both sides carry
};

// Nested first-order variations against the bracket field: the gap decays
// as O(eps^2).
CommutatorCheck commutator_variation(const UnivalentCoefficients& f,
                                     const CircleVectorField& nu1,
                                     const CircleVectorField& nu2, double eps,
                                     const ContourControls& controls = {});

// (Psi, nu)_f = integral e^{2 i theta} nu(e^{i theta}) S_f(e^{i theta}) dtheta
// by uniform trapezoid (exact for the trigonometric integrand).
Complex psi_pairing(const UnivalentCoefficients& f, const CircleVectorField& nu,
                    int angular_points = 0);

// Hermitian extension of a boundary density's modes into a real field.
CircleVectorField field_from_density(const BoundaryDensity& density);

// [{"monomial": {"2": e2, ...}, "coeff": [re, im]}, ...]
nlohmann::json polynomial_to_json(const CoordinatePolynomial& p);
CoordinatePolynomial polynomial_from_json(const nlohmann::json& j);

}  // namespace loewner
