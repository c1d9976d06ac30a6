#include "loewner/series.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "loewner/errors.hpp"

namespace loewner {

namespace {

void require_same_order(const TruncatedSeries& a, const TruncatedSeries& b,
                        const char* op) {
  if (a.order() != b.order()) {
    throw Error("order_mismatch", std::string(op) + " requires equal orders",
                {{"lhs_order", std::to_string(a.order())},
                 {"rhs_order", std::to_string(b.order())}});
  }
}

}  // namespace

TruncatedSeries::TruncatedSeries(int order, int lowest)
    : order_(order), lowest_(lowest), lost_(0) {
  if (order < lowest) {
    throw Error("order_mismatch", "series order below lowest index",
                {{"order", std::to_string(order)},
                 {"lowest", std::to_string(lowest)}});
  }
  coeffs_.assign(static_cast<size_t>(order - lowest + 1), Complex(0.0, 0.0));
}

TruncatedSeries TruncatedSeries::from_coefficients(int order, int lowest,
                                                   std::vector<Complex> coeffs) {
  TruncatedSeries s(order, lowest);
  if (coeffs.size() != s.coeffs_.size()) {
    throw Error("order_mismatch", "coefficient count does not match window",
                {{"expected", std::to_string(s.coeffs_.size())},
                 {"got", std::to_string(coeffs.size())}});
  }
  s.coeffs_ = std::move(coeffs);
  return s;
}

TruncatedSeries TruncatedSeries::constant(Complex value, int order) {
  TruncatedSeries s(order, 0);
  s.coeffs_[0] = value;
  return s;
}

TruncatedSeries TruncatedSeries::monomial(Complex coeff, int power, int order) {
  TruncatedSeries s(order, std::min(power, order));
  s.set_coeff(std::min(power, order), power <= order ? coeff : Complex(0.0));
  if (power > order) {
    // the monomial itself truncates away; keep a zero placeholder window
    s.lost_ = 0;
    s.set_coeff(order, Complex(0.0));
  }
  return s;
}

Complex TruncatedSeries::coeff(int k) const {
  if (k < lowest_ || k > order_) return Complex(0.0, 0.0);
  return coeffs_[static_cast<size_t>(k - lowest_)];
}

void TruncatedSeries::set_coeff(int k, Complex value) {
  if (k < lowest_ || k > order_) {
    throw Error("order_mismatch", "coefficient index outside window",
                {{"index", std::to_string(k)},
                 {"lowest", std::to_string(lowest_)},
                 {"order", std::to_string(order_)}});
  }
  coeffs_[static_cast<size_t>(k - lowest_)] = value;
}

TruncatedSeries& TruncatedSeries::operator+=(const TruncatedSeries& rhs) {
  require_same_order(*this, rhs, "addition");
  if (rhs.lowest_ < lowest_) {
    coeffs_.insert(coeffs_.begin(), static_cast<size_t>(lowest_ - rhs.lowest_),
                   Complex(0.0, 0.0));
    lowest_ = rhs.lowest_;
  }
  for (int k = rhs.lowest_; k <= order_; ++k) {
    coeffs_[static_cast<size_t>(k - lowest_)] += rhs.coeff(k);
  }
  lost_ = std::max(lost_, rhs.lost_);
  return *this;
}

TruncatedSeries& TruncatedSeries::operator-=(const TruncatedSeries& rhs) {
  TruncatedSeries neg = rhs;
  neg *= Complex(-1.0, 0.0);
  return *this += neg;
}

TruncatedSeries& TruncatedSeries::operator*=(Complex scalar) {
  for (auto& c : coeffs_) c *= scalar;
  return *this;
}

TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b) {
  require_same_order(a, b, "multiplication");
  const int order = a.order();
  const int lowest = std::min(a.lowest_ + b.lowest_, order);
  TruncatedSeries out(order, lowest);
  for (int k = lowest; k <= order; ++k) {
    Complex sum(0.0, 0.0);
    const int i_min = std::max(a.lowest_, k - order);
    const int i_max = std::min(order, k - b.lowest_);
    for (int i = i_min; i <= i_max; ++i) sum += a.coeff(i) * b.coeff(k - i);
    out.set_coeff(k, sum);
  }
  // unknown top degrees of either factor contaminate the product top
  out.lost_ = std::max({0, a.lost_ - b.lowest_, b.lost_ - a.lowest_});
  out.lost_ = std::min(out.lost_, order - lowest);
  // keep contaminated degrees at zero so evaluation sees only the honest window
  for (int k = order - out.lost_ + 1; k <= order; ++k) out.set_coeff(k, Complex(0.0, 0.0));
  return out;
}

TruncatedSeries TruncatedSeries::reciprocal() const {
  const Complex lead = coeff(lowest_);
  if (lead == Complex(0.0, 0.0)) {
    throw Error("vanishing_leading_coefficient",
                "reciprocal of series with zero leading coefficient",
                {{"lowest", std::to_string(lowest_)}});
  }
  // invert g = s * zeta^{-L}, a unit power series of degree order-L
  const int m = order_ - lowest_;  // top degree of g
  std::vector<Complex> g(coeffs_);
  std::vector<Complex> b(static_cast<size_t>(m + 1));
  b[0] = 1.0 / g[0];
  for (int k = 1; k <= m; ++k) {
    Complex acc(0.0, 0.0);
    for (int j = 1; j <= k; ++j) acc += g[static_cast<size_t>(j)] * b[static_cast<size_t>(k - j)];
    b[static_cast<size_t>(k)] = -acc / g[0];
  }
  // honest window of 1/s is [-L, order - 2L]; re-fit to the fixed order
  TruncatedSeries out(order_, -lowest_);
  for (int k = 0; k <= m; ++k) {
    const int degree = k - lowest_;
    if (degree <= order_) out.set_coeff(degree, b[static_cast<size_t>(k)]);
  }
  out.lost_ = std::min(std::max(0, lost_ + 2 * lowest_), order_ + lowest_);
  for (int k = order_ - out.lost_ + 1; k <= order_; ++k) out.set_coeff(k, Complex(0.0, 0.0));
  return out;
}

TruncatedSeries TruncatedSeries::derivative() const {
  const int new_lowest = (lowest_ == 0) ? 0 : lowest_ - 1;
  TruncatedSeries out(order_, new_lowest);
  for (int k = lowest_; k <= order_; ++k) {
    if (k == 0) continue;
    const int degree = k - 1;
    if (degree >= new_lowest && degree <= order_)
      out.set_coeff(degree, static_cast<double>(k) * coeff(k));
  }
  out.lost_ = std::min(lost_ + 1, order_ - new_lowest);
  return out;
}

TruncatedSeries TruncatedSeries::retruncated(int new_order) const {
  TruncatedSeries out(new_order, std::min(lowest_, new_order));
  for (int k = out.lowest_; k <= std::min(order_, new_order); ++k)
    out.set_coeff(k, coeff(k));
  if (new_order > order_) {
    out.lost_ = std::min(lost_ + (new_order - order_), new_order - out.lowest_);
  } else {
    out.lost_ = std::max(0, lost_ - (order_ - new_order));
  }
  return out;
}

TruncatedSeries TruncatedSeries::shifted(int delta) const {
  TruncatedSeries out(order_, std::min(lowest_ + delta, order_));
  for (int k = lowest_; k <= order_; ++k) {
    const int degree = k + delta;
    if (degree >= out.lowest_ && degree <= order_) out.set_coeff(degree, coeff(k));
  }
  out.lost_ = std::min(std::max(0, lost_ - delta), order_ - out.lowest_);
  return out;
}

Complex TruncatedSeries::evaluate(Complex z) const {
  Complex acc(0.0, 0.0);
  for (int k = order_; k >= lowest_; --k) acc = acc * z + coeff(k);
  if (lowest_ == 0) return acc;
  if (lowest_ > 0) {
    Complex zp(1.0, 0.0);
    for (int i = 0; i < lowest_; ++i) zp *= z;
    return acc * zp;
  }
  if (z == Complex(0.0, 0.0)) {
    throw Error("vanishing_leading_coefficient",
                "Laurent series evaluated at zero");
  }
  Complex zp(1.0, 0.0);
  for (int i = 0; i < -lowest_; ++i) zp *= z;
  return acc / zp;
}

double TruncatedSeries::max_abs() const {
  double m = 0.0;
  for (const auto& c : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

bool TruncatedSeries::is_zero(double tol) const { return max_abs() <= tol; }

TruncatedSeries div(const TruncatedSeries& a, const TruncatedSeries& b) {
  return a * b.reciprocal();
}

TruncatedSeries compose(const TruncatedSeries& outer,
                        const TruncatedSeries& inner) {
  require_same_order(outer, inner, "composition");
  if (inner.lowest_index() < 0 ||
      (inner.lowest_index() == 0 && inner.coeff(0) != Complex(0.0, 0.0))) {
    throw Error("inner_constant_term",
                "composition requires inner series vanishing at zero");
  }
  if (outer.lowest_index() < 0) {
    throw Error("order_mismatch",
                "composition requires outer series with nonnegative degrees");
  }
  const int order = outer.order();
  TruncatedSeries acc = TruncatedSeries::constant(outer.coeff(order), order);
  for (int k = order - 1; k >= 0; --k) {
    acc = acc * inner;
    acc += TruncatedSeries::constant(outer.coeff(k), order);
  }
  acc.lost_ = std::min(std::max(outer.lost_degrees(), inner.lost_degrees()),
                       order - acc.lowest_index());
  return acc;
}

TruncatedSeries schwarzian(const TruncatedSeries& f) {
  if (f.lowest_index() != 1 || f.coeff(1) == Complex(0.0, 0.0)) {
    throw Error("vanishing_leading_coefficient",
                "schwarzian requires a map with nonzero linear coefficient");
  }
  if (f.order() < 4) {
    throw Error("order_mismatch", "schwarzian needs order >= 4",
                {{"order", std::to_string(f.order())}});
  }
  const TruncatedSeries f1 = f.derivative();
  const TruncatedSeries f2 = f1.derivative();
  const TruncatedSeries f3 = f2.derivative();
  const TruncatedSeries inv = f1.reciprocal();
  const TruncatedSeries h = f2 * inv;
  return f3 * inv - Complex(1.5, 0.0) * (h * h);
}

std::vector<double> circle_grid(int M) {
  std::vector<double> angles(static_cast<size_t>(M));
  for (int j = 0; j < M; ++j)
    angles[static_cast<size_t>(j)] = 2.0 * std::numbers::pi * j / M;
  return angles;
}

std::vector<Complex> evaluate_on_circle(const TruncatedSeries& s, int M) {
  return evaluate_on_circle(s, circle_grid(M));
}

std::vector<Complex> evaluate_on_circle(const TruncatedSeries& s,
                                        const std::vector<double>& angles) {
  std::vector<Complex> out;
  out.reserve(angles.size());
  for (double theta : angles)
    out.push_back(s.evaluate(std::polar(1.0, theta)));
  return out;
}

TruncatedSeries fourier_project(const std::vector<Complex>& samples, int order,
                                int lowest) {
  const int M = static_cast<int>(samples.size());
  if (M < order - lowest + 1) {
    throw Error("order_mismatch", "too few samples for requested window",
                {{"samples", std::to_string(M)},
                 {"window", std::to_string(order - lowest + 1)}});
  }
  TruncatedSeries out(order, lowest);
  for (int k = lowest; k <= order; ++k) {
    Complex acc(0.0, 0.0);
    for (int j = 0; j < M; ++j) {
      const double angle = -2.0 * std::numbers::pi * k * j / M;
      acc += samples[static_cast<size_t>(j)] * std::polar(1.0, angle);
    }
    out.set_coeff(k, acc / static_cast<double>(M));
  }
  return out;
}

UnivalentCoefficients::UnivalentCoefficients(std::vector<Complex> a)
    : a_(std::move(a)) {
  if (a_.empty()) {
    throw Error("invalid_normalization", "empty coefficient vector");
  }
  const double re = a_[0].real();
  const double im = a_[0].imag();
  if (!(re > 0.0) || std::abs(im) > 1e-8 * std::max(1.0, std::abs(re))) {
    throw Error("invalid_normalization",
                "leading coefficient must be real and positive",
                {{"re", std::to_string(re)}, {"im", std::to_string(im)}});
  }
  a_[0] = Complex(re, 0.0);
}

UnivalentCoefficients UnivalentCoefficients::identity(int order) {
  std::vector<Complex> a(static_cast<size_t>(order), Complex(0.0, 0.0));
  a[0] = Complex(1.0, 0.0);
  return UnivalentCoefficients(std::move(a));
}

UnivalentCoefficients UnivalentCoefficients::from_series(
    const TruncatedSeries& s) {
  if (s.lowest_index() != 1) {
    throw Error("invalid_normalization",
                "univalent coefficients need a series starting at degree 1",
                {{"lowest", std::to_string(s.lowest_index())}});
  }
  std::vector<Complex> a;
  a.reserve(static_cast<size_t>(s.order()));
  for (int k = 1; k <= s.order(); ++k) a.push_back(s.coeff(k));
  return UnivalentCoefficients(std::move(a));
}

Complex UnivalentCoefficients::a(int k) const {
  if (k < 1 || k > order()) {
    throw Error("order_mismatch", "coefficient index out of range",
                {{"index", std::to_string(k)},
                 {"order", std::to_string(order())}});
  }
  return a_[static_cast<size_t>(k - 1)];
}

TruncatedSeries UnivalentCoefficients::to_series() const {
  return TruncatedSeries::from_coefficients(order(), 1, a_);
}

UnivalentCoefficients UnivalentCoefficients::rescaled() const {
  std::vector<Complex> a(a_);
  const double r = conformal_radius();
  for (auto& v : a) v /= r;
  return UnivalentCoefficients(std::move(a));
}

Complex UnivalentCoefficients::c(int k) const { return a(k) / conformal_radius(); }

}  // namespace loewner
