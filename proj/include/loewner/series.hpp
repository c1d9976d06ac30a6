#pragma once

#include <complex>
#include <vector>

namespace loewner {

using Complex = std::complex<double>;

// Power series truncated at a fixed top degree ("order").  Coefficients run
// from lowest_index() to order(); lowest_index may be negative, which covers
// the few Laurent tails the variation formulas need (f'/zeta, 1/f).
//
// Arithmetic never changes the order.  When an operation cannot determine the
// top coefficients from its inputs (differentiation, reciprocal of a series
// with positive valuation) the missing degrees are zero-padded and counted in
// lost_degrees(); top_meaningful_degree() tells consumers how far the entries
// are trustworthy.  Mixed-order operands are an error, not an implicit
// re-truncation; use retruncated() to change order deliberately.
class TruncatedSeries {
 public:
  explicit TruncatedSeries(int order, int lowest = 0);

  static TruncatedSeries from_coefficients(int order, int lowest,
                                           std::vector<Complex> coeffs);
  static TruncatedSeries constant(Complex value, int order);
  // coeff * zeta^power, padded to the requested order.
  static TruncatedSeries monomial(Complex coeff, int power, int order);

  int order() const { return order_; }
  int lowest_index() const { return lowest_; }
  int lost_degrees() const { return lost_; }
  int top_meaningful_degree() const { return order_ - lost_; }

  // Zero outside [lowest_index, order]; set_coeff must stay in range.
  Complex coeff(int k) const;
  void set_coeff(int k, Complex value);

  TruncatedSeries& operator+=(const TruncatedSeries& rhs);
  TruncatedSeries& operator-=(const TruncatedSeries& rhs);
  TruncatedSeries& operator*=(Complex scalar);

  friend TruncatedSeries operator+(TruncatedSeries a, const TruncatedSeries& b) {
    a += b;
    return a;
  }
  friend TruncatedSeries operator-(TruncatedSeries a, const TruncatedSeries& b) {
    a -= b;
    return a;
  }
  friend TruncatedSeries operator*(Complex s, TruncatedSeries a) {
    a *= s;
    return a;
  }
  friend TruncatedSeries operator*(TruncatedSeries a, Complex s) {
    a *= s;
    return a;
  }
  friend TruncatedSeries operator-(TruncatedSeries a) {
    a *= Complex(-1.0, 0.0);
    return a;
  }
  // Cauchy product truncated at the common order.  Degrees above the
  // meaningful window are stored as zero, so evaluation never mixes in
  // partial convolution sums.
  friend TruncatedSeries operator*(const TruncatedSeries& a,
                                   const TruncatedSeries& b);

  // 1/s.  Requires a nonzero coefficient at the lowest index.  Degrees above
  // the meaningful window are stored as zero.
  TruncatedSeries reciprocal() const;
  TruncatedSeries derivative() const;
  // Explicit re-truncation (or zero-padded extension) to a new order.
  TruncatedSeries retruncated(int new_order) const;
  // Multiply by zeta^delta without changing the order window.
  TruncatedSeries shifted(int delta) const;

  Complex evaluate(Complex z) const;
  double max_abs() const;
  bool is_zero(double tol) const;

 private:
  int order_;
  int lowest_;
  int lost_;
  std::vector<Complex> coeffs_;  // index i holds degree lowest_ + i

  friend TruncatedSeries compose(const TruncatedSeries&, const TruncatedSeries&);
};

TruncatedSeries div(const TruncatedSeries& a, const TruncatedSeries& b);

// outer(inner(zeta)); inner must have lowest_index >= 1, outer >= 0.
TruncatedSeries compose(const TruncatedSeries& outer,
                        const TruncatedSeries& inner);

// S_f = f'''/f' - (3/2)(f''/f')^2 for a univalent-normalized series
// (lowest index 1, nonzero linear coefficient).  The result is meaningful
// through degree order-3 and zero-padded above.
TruncatedSeries schwarzian(const TruncatedSeries& f);

// Uniform angles 2*pi*j/M, j = 0..M-1.
std::vector<double> circle_grid(int M);

std::vector<Complex> evaluate_on_circle(const TruncatedSeries& s, int M);
std::vector<Complex> evaluate_on_circle(const TruncatedSeries& s,
                                        const std::vector<double>& angles);

// Inverse of evaluate_on_circle on a uniform M-point grid: recovers the
// coefficients of degrees [lowest, order] by DFT.  Exact (up to rounding)
// when the sampled function is a Laurent polynomial supported in that window
// and M >= order - lowest + 1.
TruncatedSeries fourier_project(const std::vector<Complex>& samples, int order,
                                int lowest);

// Coefficients a_1..a_N of an expanding univalent map f = a_1 zeta + ...
// with a_1 real and positive (the conformal radius).
class UnivalentCoefficients {
 public:
  // a[0] holds a_1.  Imaginary drift on a_1 below 1e-8 (relative) is coerced
  // to zero; anything larger is rejected.
  explicit UnivalentCoefficients(std::vector<Complex> a);

  static UnivalentCoefficients identity(int order);  // f = zeta
  static UnivalentCoefficients from_series(const TruncatedSeries& s);

  int order() const { return static_cast<int>(a_.size()); }
  Complex a(int k) const;  // k in [1, order]
  double conformal_radius() const { return a_[0].real(); }

  TruncatedSeries to_series() const;  // lowest index 1
  UnivalentCoefficients rescaled() const;  // divide by a_1 so a_1 = 1
  // Affine coordinate c_k = a_k / a_1, k >= 2.
  Complex c(int k) const;

  const std::vector<Complex>& raw() const { return a_; }

 private:
  std::vector<Complex> a_;
};

}  // namespace loewner
