#include "loewner/virasoro.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>

#include "loewner/errors.hpp"

namespace loewner {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
const Complex kI{0.0, 1.0};

}  // namespace

CircleVectorField::CircleVectorField(int K) : K_(K) {
  if (K < 0) {
    throw Error("invalid_config", "mode support must be nonnegative",
                {{"K", std::to_string(K)}});
  }
  modes_.assign(static_cast<size_t>(2 * K + 1), Complex(0.0, 0.0));
}

CircleVectorField CircleVectorField::basis(int k, int K) {
  CircleVectorField out(K);
  out.set_mode(k, Complex(0.0, -1.0));
  return out;
}

Complex CircleVectorField::mode(int k) const {
  if (k < -K_ || k > K_) return Complex(0.0, 0.0);
  return modes_[static_cast<size_t>(k + K_)];
}

void CircleVectorField::set_mode(int k, Complex value) {
  if (k < -K_ || k > K_) {
    throw Error("invalid_config", "mode outside the field's support",
                {{"k", std::to_string(k)}, {"K", std::to_string(K_)}});
  }
  modes_[static_cast<size_t>(k + K_)] = value;
}

Complex CircleVectorField::evaluate_angle(double theta) const {
  return evaluate(std::polar(1.0, theta));
}

Complex CircleVectorField::evaluate(Complex w) const {
  // positive part by Horner, negative part by Horner in 1/w
  Complex pos(0.0, 0.0);
  for (int k = K_; k >= 1; --k) pos = (pos + mode(k)) * w;
  Complex neg(0.0, 0.0);
  if (K_ >= 1) {
    const Complex winv = Complex(1.0, 0.0) / w;
    for (int k = -K_; k <= -1; ++k) neg = (neg + mode(k)) * winv;
  }
  return pos + neg + mode(0);
}

bool CircleVectorField::is_real(double tol) const {
  for (int k = 0; k <= K_; ++k) {
    if (std::abs(mode(-k) - std::conj(mode(k))) > tol) return false;
  }
  return true;
}

CircleVectorField witt_bracket(const CircleVectorField& a,
                               const CircleVectorField& b) {
  CircleVectorField out(a.max_mode() + b.max_mode());
  for (int m = -a.max_mode(); m <= a.max_mode(); ++m) {
    const Complex am = a.mode(m);
    if (am == Complex(0.0, 0.0)) continue;
    for (int n = -b.max_mode(); n <= b.max_mode(); ++n) {
      const Complex bn = b.mode(n);
      if (bn == Complex(0.0, 0.0)) continue;
      out.set_mode(m + n, out.mode(m + n) +
                              kI * static_cast<double>(n - m) * am * bn);
    }
  }
  return out;
}

Complex gelfand_fuks(const CircleVectorField& a, const CircleVectorField& b) {
  const int K = std::min(a.max_mode(), b.max_mode());
  Complex acc(0.0, 0.0);
  for (int k = -K; k <= K; ++k) {
    const double weight = static_cast<double>(k) *
                          (static_cast<double>(k) * k - 1.0);
    acc += weight * a.mode(k) * b.mode(-k);
  }
  return 0.5 * kI * acc;
}

VirasoroElement virasoro_bracket(const VirasoroElement& a,
                                 const VirasoroElement& b, double charge) {
  return VirasoroElement{witt_bracket(a.field, b.field),
                         (charge / 12.0) * gelfand_fuks(a.field, b.field)};
}

// Coordinate polynomials ------------------------------------------------------

CoordinatePolynomial CoordinatePolynomial::constant(Complex value) {
  CoordinatePolynomial p;
  p.add_term(Monomial{}, value);
  return p;
}

CoordinatePolynomial CoordinatePolynomial::variable(int j) {
  if (j < 2) {
    throw Error("invalid_config", "coordinates start at c_2",
                {{"j", std::to_string(j)}});
  }
  CoordinatePolynomial p;
  p.add_term(Monomial{{j, 1}}, Complex(1.0, 0.0));
  return p;
}

Complex CoordinatePolynomial::coeff(const Monomial& m) const {
  const auto it = terms_.find(m);
  return it == terms_.end() ? Complex(0.0, 0.0) : it->second;
}

void CoordinatePolynomial::add_term(const Monomial& m, Complex coefficient) {
  if (coefficient == Complex(0.0, 0.0)) return;
  for (const auto& [j, e] : m) {
    if (j < 2 || e <= 0) {
      throw Error("invalid_config", "bad monomial entry",
                  {{"variable", std::to_string(j)},
                   {"exponent", std::to_string(e)}});
    }
  }
  terms_[m] += coefficient;
  if (terms_[m] == Complex(0.0, 0.0)) terms_.erase(m);
}

CoordinatePolynomial& CoordinatePolynomial::operator+=(
    const CoordinatePolynomial& rhs) {
  for (const auto& [m, c] : rhs.terms_) add_term(m, c);
  return *this;
}

CoordinatePolynomial& CoordinatePolynomial::operator-=(
    const CoordinatePolynomial& rhs) {
  for (const auto& [m, c] : rhs.terms_) add_term(m, -c);
  return *this;
}

CoordinatePolynomial& CoordinatePolynomial::operator*=(Complex scalar) {
  if (scalar == Complex(0.0, 0.0)) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, c] : terms_) c *= scalar;
  return *this;
}

CoordinatePolynomial operator*(const CoordinatePolynomial& a,
                               const CoordinatePolynomial& b) {
  CoordinatePolynomial out;
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) {
      Monomial m = ma;
      for (const auto& [j, e] : mb) m[j] += e;
      out.add_term(m, ca * cb);
    }
  }
  return out;
}

CoordinatePolynomial CoordinatePolynomial::derivative(int j) const {
  CoordinatePolynomial out;
  for (const auto& [m, c] : terms_) {
    const auto it = m.find(j);
    if (it == m.end()) continue;
    Monomial reduced = m;
    if (it->second == 1) {
      reduced.erase(j);
    } else {
      reduced[j] -= 1;
    }
    out.add_term(reduced, c * static_cast<double>(it->second));
  }
  return out;
}

Complex CoordinatePolynomial::evaluate(
    const std::map<int, Complex>& values) const {
  Complex acc(0.0, 0.0);
  for (const auto& [m, c] : terms_) {
    Complex term = c;
    for (const auto& [j, e] : m) {
      const auto it = values.find(j);
      if (it == values.end()) {
        term = Complex(0.0, 0.0);
        break;
      }
      for (int p = 0; p < e; ++p) term *= it->second;
    }
    acc += term;
  }
  return acc;
}

int CoordinatePolynomial::max_variable() const {
  int top = 0;
  for (const auto& [m, c] : terms_) {
    if (!m.empty()) top = std::max(top, m.rbegin()->first);
  }
  return top;
}

double CoordinatePolynomial::max_abs() const {
  double top = 0.0;
  for (const auto& [m, c] : terms_) top = std::max(top, std::abs(c));
  return top;
}

bool CoordinatePolynomial::is_zero(double tol) const {
  return max_abs() <= tol;
}

void CoordinatePolynomial::prune(double tol) {
  for (auto it = terms_.begin(); it != terms_.end();) {
    if (std::abs(it->second) <= tol) {
      it = terms_.erase(it);
    } else {
      ++it;
    }
  }
}

int CoordinatePolynomial::monomial_weight(const Monomial& m) {
  int w = 0;
  for (const auto& [j, e] : m) w += (j - 1) * e;
  return w;
}

std::optional<int> CoordinatePolynomial::homogeneous_weight() const {
  if (terms_.empty()) return 0;
  const int w = monomial_weight(terms_.begin()->first);
  for (const auto& [m, c] : terms_) {
    if (monomial_weight(m) != w) return std::nullopt;
  }
  return w;
}

CoordinatePolynomial kirillov_coordinate_operator(int k,
                                                  const CoordinatePolynomial& P,
                                                  int var_limit,
                                                  int* dropped_terms) {
  if (k < 0) {
    throw Error("invalid_config", "coordinate operators take k >= 0",
                {{"k", std::to_string(k)}});
  }
  if (var_limit < 2) {
    throw Error("invalid_config", "variable window must reach c_2",
                {{"var_limit", std::to_string(var_limit)}});
  }
  if (P.max_variable() > var_limit) {
    throw Error("invalid_config", "polynomial variables exceed the window",
                {{"max_variable", std::to_string(P.max_variable())},
                 {"var_limit", std::to_string(var_limit)}});
  }
  int dropped = 0;
  CoordinatePolynomial out;
  if (k == 0) {
    for (int n = 2; n <= var_limit; ++n) {
      CoordinatePolynomial piece =
          CoordinatePolynomial::variable(n) * P.derivative(n);
      piece *= Complex(static_cast<double>(n - 1), 0.0);
      out += piece;
    }
  } else {
    if (k + 1 <= var_limit) {
      out += P.derivative(k + 1);
    } else {
      ++dropped;
    }
    for (int n = 2; n <= var_limit; ++n) {
      if (n + k > var_limit) {
        ++dropped;
        continue;
      }
      CoordinatePolynomial piece =
          CoordinatePolynomial::variable(n) * P.derivative(n + k);
      piece *= Complex(static_cast<double>(n), 0.0);
      out += piece;
    }
  }
  if (dropped_terms != nullptr) *dropped_terms = dropped;
  return out;
}

namespace {

void collect_partitions(int remaining, int max_part, Monomial& current,
                        std::vector<Monomial>& out) {
  if (remaining == 0) {
    out.push_back(current);
    return;
  }
  for (int s = std::min(remaining, max_part); s >= 1; --s) {
    // part of size s corresponds to the variable c_{s+1}
    current[s + 1] += 1;
    collect_partitions(remaining - s, s, current, out);
    if (--current[s + 1] == 0) current.erase(s + 1);
  }
}

std::vector<Monomial> weight_monomials(int w) {
  std::vector<Monomial> out;
  if (w == 0) {
    out.push_back(Monomial{});
    return out;
  }
  Monomial scratch;
  collect_partitions(w, w, scratch, out);
  return out;
}

}  // namespace

std::vector<CoordinatePolynomial> neretin_recursion(int k_max, double charge) {
  if (k_max < 0) {
    throw Error("invalid_config", "polynomial count must be nonnegative",
                {{"k_max", std::to_string(k_max)}});
  }
  std::vector<CoordinatePolynomial> P(static_cast<size_t>(k_max) + 1);
  const double tol = 1e-10 * (1.0 + std::abs(charge));

  for (int n = 2; n <= k_max; ++n) {
    const int var_limit = n + 1;
    const std::vector<Monomial> unknowns = weight_monomials(n);
    const int cols = static_cast<int>(unknowns.size());

    // operator images of each candidate monomial, for m = 1..n
    std::vector<std::vector<CoordinatePolynomial>> images(
        static_cast<size_t>(n) + 1);
    for (int m = 1; m <= n; ++m) {
      images[static_cast<size_t>(m)].reserve(unknowns.size());
      for (const Monomial& mono : unknowns) {
        CoordinatePolynomial base;
        base.add_term(mono, Complex(1.0, 0.0));
        images[static_cast<size_t>(m)].push_back(
            kirillov_coordinate_operator(m, base, var_limit));
      }
    }

    std::vector<std::pair<int, Monomial>> rows;
    for (int m = 1; m <= n; ++m) {
      for (const Monomial& mono : weight_monomials(n - m)) {
        rows.emplace_back(m, mono);
      }
    }

    Eigen::MatrixXd A(static_cast<Eigen::Index>(rows.size()), cols);
    Eigen::VectorXd b(static_cast<Eigen::Index>(rows.size()));
    for (size_t r = 0; r < rows.size(); ++r) {
      const auto& [m, mono] = rows[r];
      for (int j = 0; j < cols; ++j) {
        A(static_cast<Eigen::Index>(r), j) =
            images[static_cast<size_t>(m)][static_cast<size_t>(j)]
                .coeff(mono)
                .real();
      }
      double rhs = static_cast<double>(n + m) *
                   P[static_cast<size_t>(n - m)].coeff(mono).real();
      if (m == n && mono.empty()) {
        rhs += (charge / 12.0) * m * (static_cast<double>(m) * m - 1.0);
      }
      b(static_cast<Eigen::Index>(r)) = rhs;
    }

    const Eigen::VectorXd x = A.colPivHouseholderQr().solve(b);
    CoordinatePolynomial poly;
    for (int j = 0; j < cols; ++j) {
      poly.add_term(unknowns[static_cast<size_t>(j)], Complex(x(j), 0.0));
    }
    poly.prune(1e-11 * (1.0 + std::abs(charge)));

    for (int m = 1; m <= n; ++m) {
      CoordinatePolynomial residual =
          kirillov_coordinate_operator(m, poly, var_limit);
      CoordinatePolynomial rhs = P[static_cast<size_t>(n - m)];
      rhs *= Complex(static_cast<double>(n + m), 0.0);
      if (m == n) {
        rhs += CoordinatePolynomial::constant(Complex(
            (charge / 12.0) * m * (static_cast<double>(m) * m - 1.0), 0.0));
      }
      residual -= rhs;
      if (residual.max_abs() > tol) {
        throw Error("recursion_inconsistency",
                    "polynomial recursion failed verification",
                    {{"n", std::to_string(n)},
                     {"m", std::to_string(m)},
                     {"residual", std::to_string(residual.max_abs())}});
      }
    }
    P[static_cast<size_t>(n)] = std::move(poly);
  }
  return P;
}

TruncatedSeries neretin_generatrix(const UnivalentCoefficients& f,
                                   double charge) {
  if (f.order() < 5) {
    throw Error("invalid_config", "generatrix needs order >= 5",
                {{"order", std::to_string(f.order())}});
  }
  const TruncatedSeries sf = schwarzian(f.rescaled().to_series());
  TruncatedSeries out = sf.shifted(2);
  out *= Complex(charge / 12.0, 0.0);
  return out;
}

BieberbachValues bieberbach_functionals(const UnivalentCoefficients& f) {
  if (f.order() < 4) {
    throw Error("invalid_config", "functionals need order >= 4",
                {{"order", std::to_string(f.order())}});
  }
  const UnivalentCoefficients g = f.rescaled();
  const Complex c2 = g.a(2);
  const Complex c3 = g.a(3);
  const Complex c4 = g.a(4);
  BieberbachValues out;
  out.abs_c2 = std::abs(c2);
  out.abs_c3_minus_c2sq = std::abs(c3 - c2 * c2);
  out.p2_over_c = 0.5 * (c3 - c2 * c2);
  out.p3_over_c = 2.0 * (c4 - 2.0 * c2 * c3 + c2 * c2 * c2);
  return out;
}

// Contour variation -----------------------------------------------------------

namespace {

struct ContourData {
  std::vector<Complex> fw;    // f on the contour
  std::vector<Complex> base;  // (w f'/f)^2 nu(w)
};

ContourData build_contour(const TruncatedSeries& f,
                          const CircleVectorField& nu,
                          const ContourControls& controls) {
  if (!(controls.contour_radius > 0.0) || !(controls.contour_radius < 1.0)) {
    throw Error("invalid_config", "contour radius must lie in (0, 1)",
                {{"radius", std::to_string(controls.contour_radius)}});
  }
  if (controls.nodes < 64) {
    throw Error("invalid_config", "contour needs at least 64 nodes",
                {{"nodes", std::to_string(controls.nodes)}});
  }
  const TruncatedSeries fp = f.derivative();
  ContourData data;
  data.fw.reserve(static_cast<size_t>(controls.nodes));
  data.base.reserve(static_cast<size_t>(controls.nodes));
  for (double theta : circle_grid(controls.nodes)) {
    const Complex w = std::polar(controls.contour_radius, theta);
    const Complex fwv = f.evaluate(w);
    if (!(std::abs(fwv) > 1e-12)) {
      throw Error("contour_injectivity", "map vanishes on the contour",
                  {{"theta", std::to_string(theta)}});
    }
    const Complex ratio = w * fp.evaluate(w) / fwv;
    data.fw.push_back(fwv);
    data.base.push_back(ratio * ratio * nu.evaluate(w));
  }
  return data;
}

void require_normalized_origin(const TruncatedSeries& f) {
  if (f.lowest_index() > 1 || f.coeff(1) == Complex(0.0, 0.0)) {
    throw Error("invalid_config", "variation needs f = a_1 zeta + ...");
  }
  if (f.lowest_index() < 1 &&
      std::abs(f.coeff(0)) + (f.lowest_index() < 0
                                  ? std::abs(f.coeff(f.lowest_index()))
                                  : 0.0) >
          1e-9) {
    throw Error("invalid_config", "variation needs f(0) = 0");
  }
}

}  // namespace

std::vector<Complex> goluzin_schiffer(const TruncatedSeries& f,
                                      const CircleVectorField& nu,
                                      const std::vector<Complex>& zeta_samples,
                                      const ContourControls& controls) {
  require_normalized_origin(f);
  const ContourData data = build_contour(f, nu, controls);
  const int M = controls.nodes;

  std::vector<Complex> out;
  out.reserve(zeta_samples.size());
  for (const Complex& zeta : zeta_samples) {
    if (!(std::abs(zeta) <= controls.contour_radius - 0.02)) {
      throw Error("invalid_config", "sample too close to the contour",
                  {{"abs_zeta", std::to_string(std::abs(zeta))},
                   {"radius", std::to_string(controls.contour_radius)}});
    }
    const Complex fz = f.evaluate(zeta);
    double winding = 0.0;
    for (int j = 0; j < M; ++j) {
      const Complex cur = data.fw[static_cast<size_t>(j)] - fz;
      const Complex nxt = data.fw[static_cast<size_t>((j + 1) % M)] - fz;
      winding += std::arg(nxt / cur);
    }
    const long turns = std::lround(winding / kTwoPi);
    if (turns != 1) {
      throw Error("contour_injectivity",
                  "winding number around the sample is not one",
                  {{"turns", std::to_string(turns)},
                   {"abs_zeta", std::to_string(std::abs(zeta))}});
    }
    Complex acc(0.0, 0.0);
    for (int j = 0; j < M; ++j) {
      acc += data.base[static_cast<size_t>(j)] /
             (data.fw[static_cast<size_t>(j)] - fz);
    }
    out.push_back(kI * fz * fz * acc / static_cast<double>(M));
  }
  return out;
}

std::vector<Complex> goluzin_schiffer(const UnivalentCoefficients& f,
                                      const CircleVectorField& nu,
                                      const std::vector<Complex>& zeta_samples,
                                      const ContourControls& controls) {
  return goluzin_schiffer(f.to_series(), nu, zeta_samples, controls);
}

TruncatedSeries goluzin_schiffer_series(const TruncatedSeries& f,
                                        const CircleVectorField& nu,
                                        const ContourControls& controls,
                                        double sample_radius) {
  if (!(sample_radius > 0.0) ||
      !(sample_radius <= controls.contour_radius - 0.02)) {
    throw Error("invalid_config", "sample circle must sit inside the contour",
                {{"sample_radius", std::to_string(sample_radius)}});
  }
  const int N = f.order();
  const int lowest = -4;
  const int M = std::max(4 * N, 64);
  std::vector<Complex> points;
  points.reserve(static_cast<size_t>(M));
  for (double theta : circle_grid(M)) {
    points.push_back(std::polar(sample_radius, theta));
  }
  const std::vector<Complex> values =
      goluzin_schiffer(f, nu, points, controls);
  const TruncatedSeries projected = fourier_project(values, N, lowest);
  TruncatedSeries out(N, lowest);
  for (int k = lowest; k <= N; ++k) {
    out.set_coeff(k, projected.coeff(k) * std::pow(sample_radius, -k));
  }
  return out;
}

Complex variation_closed_form(const TruncatedSeries& f, int k, Complex zeta) {
  const TruncatedSeries fp = f.derivative();
  const Complex fv = f.evaluate(zeta);
  const Complex fpv = fp.evaluate(zeta);
  if (k >= 1) {
    return std::pow(zeta, k + 1) * fpv;
  }
  if (k == 0) {
    return zeta * fpv - fv;
  }
  if (std::abs(f.coeff(1) - Complex(1.0, 0.0)) > 1e-9) {
    throw Error("invalid_config", "negative-mode closed forms need a_1 = 1");
  }
  const Complex c2 = f.coeff(2);
  const Complex c3 = f.coeff(3);
  if (k == -1) {
    return fpv - 1.0 - 2.0 * c2 * fv;
  }
  if (k == -2) {
    return fpv / zeta - 1.0 / fv - 3.0 * c2 + (c2 * c2 - 4.0 * c3) * fv;
  }
  throw Error("invalid_config", "no closed form below k = -2",
              {{"k", std::to_string(k)}});
}

CommutatorCheck commutator_variation(const UnivalentCoefficients& f,
                                     const CircleVectorField& nu1,
                                     const CircleVectorField& nu2, double eps,
                                     const ContourControls& controls) {
  if (!(eps > 0.0)) {
    throw Error("invalid_config", "variation step must be positive");
  }
  const TruncatedSeries fs = f.to_series();
  const TruncatedSeries l1 = goluzin_schiffer_series(fs, nu1, controls);
  const TruncatedSeries l2 = goluzin_schiffer_series(fs, nu2, controls);

  const auto vary = [&](const TruncatedSeries& direction,
                        const CircleVectorField& nu) {
    TruncatedSeries plus = fs;
    TruncatedSeries minus = fs;
    TruncatedSeries step = direction;
    step *= Complex(eps, 0.0);
    plus += step;
    minus -= step;
    TruncatedSeries diff = goluzin_schiffer_series(plus, nu, controls) -
                           goluzin_schiffer_series(minus, nu, controls);
    diff *= Complex(1.0 / (2.0 * eps), 0.0);
    return diff;
  };

  const auto depth = [](const CircleVectorField& nu) {
    int d = 0;
    for (int k = 1; k <= nu.max_mode(); ++k) {
      if (nu.mode(-k) != Complex(0.0, 0.0)) d = k;
    }
    return d;
  };

  CommutatorCheck out{vary(l2, nu1) - vary(l1, nu2),
                      goluzin_schiffer_series(fs, witt_bracket(nu1, nu2),
                                              controls),
                      0.0};
  const int top = f.order() - depth(nu1) - depth(nu2);
  for (int k = -4; k <= top; ++k) {
    out.max_gap =
        std::max(out.max_gap, std::abs(out.nested.coeff(k) - out.direct.coeff(k)));
  }
  return out;
}

Complex psi_pairing(const UnivalentCoefficients& f, const CircleVectorField& nu,
                    int angular_points) {
  if (f.order() < 5) {
    throw Error("invalid_config", "pairing needs order >= 5",
                {{"order", std::to_string(f.order())}});
  }
  const int N = f.order();
  const int M = std::max({angular_points, 4 * N,
                          2 * N + 2 * nu.max_mode() + 8, 64});
  const TruncatedSeries sf = schwarzian(f.to_series());
  Complex acc(0.0, 0.0);
  for (double theta : circle_grid(M)) {
    const Complex w = std::polar(1.0, theta);
    acc += w * w * nu.evaluate(w) * sf.evaluate(w);
  }
  return acc * kTwoPi / static_cast<double>(M);
}

CircleVectorField field_from_density(const BoundaryDensity& density) {
  CircleVectorField out(density.K);
  for (int k = 0; k <= density.K; ++k) {
    const Complex v = density.nu_hat[static_cast<size_t>(k)];
    out.set_mode(k, v);
    if (k > 0) out.set_mode(-k, std::conj(v));
  }
  return out;
}

nlohmann::json polynomial_to_json(const CoordinatePolynomial& p) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& [m, c] : p.terms()) {
    nlohmann::json mono = nlohmann::json::object();
    for (const auto& [j, e] : m) mono[std::to_string(j)] = e;
    out.push_back(nlohmann::json{{"monomial", mono},
                                 {"coeff", {c.real(), c.imag()}}});
  }
  return out;
}

CoordinatePolynomial polynomial_from_json(const nlohmann::json& j) {
  CoordinatePolynomial out;
  for (const auto& term : j) {
    Monomial m;
    for (const auto& [key, value] : term.at("monomial").items()) {
      m[std::stoi(key)] = value.get<int>();
    }
    const auto& c = term.at("coeff");
    out.add_term(m, Complex(c.at(0).get<double>(), c.at(1).get<double>()));
  }
  return out;
}

}  // namespace loewner
