#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "loewner/driving.hpp"
#include "loewner/errors.hpp"
#include "loewner/series.hpp"

using namespace loewner;

TEST_CASE("constant density is nu = 2 with unit kernel") {
  const BoundaryDensity d = BoundaryDensity::constant();
  CHECK(d.evaluate(0.0) == doctest::Approx(2.0));
  CHECK(d.evaluate(1.7) == doctest::Approx(2.0));
  const DensityDiagnostics diag = validate_density(d);
  CHECK(std::abs(diag.normalization_residual) < 1e-15);

  const TruncatedSeries p = herglotz_from_density(d, 8);
  CHECK(std::abs(p.coeff(0) - Complex(1.0, 0.0)) < 1e-15);
  for (int k = 1; k <= 8; ++k) CHECK(std::abs(p.coeff(k)) == 0.0);
}

TEST_CASE("cosine density places half-amplitude modes") {
  const BoundaryDensity d = BoundaryDensity::cosine({{1, 1.0, 0.0}});
  CHECK(d.evaluate(0.0) == doctest::Approx(3.0));
  CHECK(d.evaluate(std::numbers::pi) == doctest::Approx(1.0));
  CHECK(std::abs(d.nu_hat[1] - Complex(0.5, 0.0)) < 1e-15);

  const TruncatedSeries p = herglotz_from_density(d, 6);
  CHECK(std::abs(p.coeff(1) - Complex(0.5, 0.0)) < 1e-15);
  for (int k = 2; k <= 6; ++k) CHECK(std::abs(p.coeff(k)) == 0.0);
}

TEST_CASE("kernel real part recovers half the density on the circle") {
  const BoundaryDensity d =
      BoundaryDensity::cosine({{1, 0.6, 0.3}, {3, 0.4, -1.0}});
  require_valid_density(d);
  const TruncatedSeries p = herglotz_from_density(d, 12);
  for (double theta : circle_grid(17)) {
    const Complex w = std::polar(1.0, theta);
    CHECK(p.evaluate(w).real() == doctest::Approx(d.evaluate(theta) / 2.0)
                                      .epsilon(1e-12));
  }
}

TEST_CASE("densities violating the class are rejected") {
  BoundaryDensity bad_mass;
  bad_mass.K = 0;
  bad_mass.nu_hat = {Complex(1.5, 0.0)};
  CHECK_THROWS_AS(require_valid_density(bad_mass), Error);

  // 2 + 3 cos(theta) dips negative
  const BoundaryDensity negative = BoundaryDensity::cosine({{1, 3.0, 0.0}});
  CHECK_THROWS_AS(require_valid_density(negative), Error);
}

TEST_CASE("slit kernel series matches its pointwise form") {
  const double u = 0.4;
  const int N = 10;
  const TruncatedSeries p = slit_kernel_series(u, N);
  CHECK(std::abs(p.coeff(0) - Complex(1.0, 0.0)) < 1e-15);
  for (int k = 1; k <= N; ++k) {
    CHECK(std::abs(p.coeff(k) - 2.0 * std::polar(1.0, -k * u)) < 1e-14);
  }
  // truncation leaves a geometric tail 2 |w|^{N+1} / (1 - |w|)
  const Complex w(0.2, -0.1);
  const double tail = 2.0 * std::pow(std::abs(w), N + 1) / (1.0 - std::abs(w));
  CHECK(std::abs(p.evaluate(w) - slit_kernel_value(u, w)) < 1.1 * tail);
  CHECK(std::abs(p.evaluate(w) - slit_kernel_value(u, w)) > 0.9 * tail * 0.1);
}

TEST_CASE("laplacian density of a circle is the constant density") {
  const BoundaryDensity d =
      laplacian_density(UnivalentCoefficients::identity(8), 6);
  CHECK(std::abs(d.nu_hat[0] - Complex(2.0, 0.0)) < 1e-14);
  for (int k = 1; k <= 6; ++k) CHECK(std::abs(d.nu_hat[k]) < 1e-13);

  std::vector<Complex> a(8, Complex(0.0, 0.0));
  a[0] = Complex(3.0, 0.0);
  const BoundaryDensity scaled = laplacian_density(UnivalentCoefficients{std::move(a)}, 6);
  CHECK(std::abs(scaled.nu_hat[0] - Complex(2.0, 0.0)) < 1e-14);
  for (int k = 1; k <= 6; ++k) CHECK(std::abs(scaled.nu_hat[k]) < 1e-13);
}

TEST_CASE("laplacian density is normalized and positive off circles") {
  std::vector<Complex> a(12, Complex(0.0, 0.0));
  a[0] = Complex(1.0, 0.0);
  a[1] = Complex(0.3, 0.1);
  a[2] = Complex(0.05, 0.0);
  const UnivalentCoefficients f{std::move(a)};
  const BoundaryDensity d = laplacian_density(f, 10);
  const DensityDiagnostics diag = validate_density(d);
  CHECK(diag.min_on_grid > 0.0);
  CHECK(std::abs(diag.normalization_residual) < 1e-12);
}

TEST_CASE("smooth driver interpolates keyframes linearly") {
  SmoothDensityDriver driver;
  driver.keyframes = {{0.0, BoundaryDensity::cosine({{1, 0.2, 0.0}})},
                      {1.0, BoundaryDensity::cosine({{1, 0.8, 0.0}})}};
  CHECK_FALSE(driver.time_constant());
  const BoundaryDensity mid = driver.at(0.5);
  CHECK(std::abs(mid.nu_hat[1] - Complex(0.25, 0.0)) < 1e-14);
  // clamped outside the keyframe range
  CHECK(std::abs(driver.at(-3.0).nu_hat[1] - Complex(0.1, 0.0)) < 1e-14);
  CHECK(std::abs(driver.at(9.0).nu_hat[1] - Complex(0.4, 0.0)) < 1e-14);
}

TEST_CASE("slit driver angle interpolates knots") {
  SlitKernelDriver driver;
  driver.knots = {{0.0, 0.0}, {2.0, 1.0}};
  CHECK(driver.u(1.0) == doctest::Approx(0.5));
  CHECK(driver.u(-1.0) == doctest::Approx(0.0));
  CHECK(driver.u(5.0) == doctest::Approx(1.0));
}

TEST_CASE("spec predicates sort the drivers") {
  const DrivingSpec constant = ConstantUnitDriver{};
  SmoothDensityDriver smooth;
  smooth.keyframes = {{0.0, BoundaryDensity::constant()}};
  SlitKernelDriver slit;
  slit.knots = {{0.0, 0.0}};
  const DrivingSpec lg = LaplacianGrowthDriver{8};

  CHECK_FALSE(needs_chain_state(constant));
  CHECK(needs_chain_state(lg));
  CHECK(admits_theorem1_check(constant));
  CHECK(admits_theorem1_check(DrivingSpec{smooth}));
  CHECK(admits_theorem1_check(lg));
  CHECK_FALSE(admits_theorem1_check(DrivingSpec{slit}));

  SmoothDensityDriver varying;
  varying.keyframes = {{0.0, BoundaryDensity::constant()},
                       {1.0, BoundaryDensity::cosine({{1, 0.5, 0.0}})}};
  CHECK_FALSE(admits_theorem1_check(DrivingSpec{varying}));
}

TEST_CASE("driver_series and driver_value agree inside the disk") {
  SmoothDensityDriver smooth;
  smooth.keyframes = {{0.0, BoundaryDensity::cosine({{2, 0.5, 0.4}})}};
  const DrivingSpec spec{smooth};
  const UnivalentCoefficients f = UnivalentCoefficients::identity(10);
  const TruncatedSeries p = driver_series(spec, f, 0.0, 10);
  const Complex w(0.35, 0.2);
  CHECK(std::abs(p.evaluate(w) - driver_value(spec, &f, 0.0, w, 10)) < 1e-12);
}

TEST_CASE("density json round trips") {
  const BoundaryDensity d = BoundaryDensity::cosine({{1, 0.7, 0.2}});
  const BoundaryDensity back = density_from_json(density_to_json(d));
  CHECK(back.K == d.K);
  for (int k = 0; k <= d.K; ++k) {
    CHECK(std::abs(back.nu_hat[k] - d.nu_hat[k]) < 1e-15);
  }
}

TEST_CASE("spec json round trips all four kinds") {
  SmoothDensityDriver smooth;
  smooth.keyframes = {{0.0, BoundaryDensity::constant()},
                      {0.5, BoundaryDensity::cosine({{1, 0.3, 0.0}})}};
  SlitKernelDriver slit;
  slit.knots = {{0.0, 0.1}, {1.0, 0.9}};

  for (const DrivingSpec& spec :
       {DrivingSpec{ConstantUnitDriver{}}, DrivingSpec{smooth},
        DrivingSpec{slit}, DrivingSpec{LaplacianGrowthDriver{12}}}) {
    const DrivingSpec back = spec_from_json(spec_to_json(spec));
    CHECK(back.index() == spec.index());
    const UnivalentCoefficients f = UnivalentCoefficients::identity(8);
    const TruncatedSeries pa = driver_series(spec, f, 0.3, 8);
    const TruncatedSeries pb = driver_series(back, f, 0.3, 8);
    for (int k = 0; k <= 8; ++k) {
      CHECK(std::abs(pa.coeff(k) - pb.coeff(k)) < 1e-15);
    }
  }
}

TEST_CASE("malformed spec json is rejected") {
  CHECK_THROWS_AS(spec_from_json(nlohmann::json{{"type", "warp_drive"}}),
                  Error);
  CHECK_THROWS_AS(spec_from_json(nlohmann::json{{"type", "slit"}}), Error);
}
