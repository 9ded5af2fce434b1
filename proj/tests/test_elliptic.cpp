#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "stepmap/elliptic.hpp"
#include "stepmap/harmonic.hpp"

using namespace stepmap;

TEST_CASE("a = 0 reduces to Cauchy-Riemann") {
  const auto c = system_coefficients(cplx(0.0));
  CHECK(c.a11 == 0.0);
  CHECK(c.a12 == 1.0);
  CHECK(c.a21 == 1.0);
  CHECK(c.a22 == 0.0);
  const auto check = ellipticity_margin(c);
  CHECK(check.margin == 4.0);
  CHECK(check.a12_positive);
}

TEST_CASE("a = 1/3 by hand substitution") {
  const auto c = system_coefficients(cplx(1.0 / 3.0));
  CHECK(c.a11 == doctest::Approx(0.0));
  CHECK(c.a22 == doctest::Approx(0.0));
  CHECK(c.a12 == doctest::Approx(2.0));
  CHECK(c.a21 == doctest::Approx(2.0));
  CHECK(ellipticity_margin(c).margin == doctest::Approx(16.0));
}

TEST_CASE("a = i/2 stays elliptic") {
  const auto check = ellipticity_margin(system_coefficients(cplx(0.0, 0.5)));
  CHECK(check.margin > 0.0);
  CHECK(check.a12_positive);
}

TEST_CASE("coefficient errors") {
  CHECK_THROWS_AS(system_coefficients(cplx(1.0)), SingularDenominator);
  CHECK_THROWS_AS(system_coefficients(cplx(0.0, 1.2)), NotContracting);
  CHECK_THROWS_AS(system_coefficients(cplx(-1.0, 0.0)), NotContracting);
}

TEST_CASE("non-elliptic synthetic coefficients report a negative margin") {
  const SystemCoefficients c{0.0, 1.0, -1.0, 0.0};
  CHECK(ellipticity_margin(c).margin == doctest::Approx(-4.0));
}

TEST_CASE("coefficients satisfy the two intermediate relations") {
  std::mt19937 rng(1234);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    cplx a(unit(rng), unit(rng));
    if (std::abs(a) >= 0.98) a *= 0.5;
    const double a1 = a.real(), a2 = a.imag();
    const auto c = system_coefficients(a);
    const double vx = unit(rng), vy = unit(rng);
    const double ux = c.a11 * vx + c.a12 * vy;
    const double uy = -(c.a21 * vx + c.a22 * vy);
    const double lhs1 = ux - vy;
    const double rhs1 = a1 * (ux + vy) - a2 * (vx - uy);
    const double lhs2 = -uy - vx;
    const double rhs2 = a1 * (vx - uy) + a2 * (ux + vy);
    CHECK(std::abs(lhs1 - rhs1) < 1e-12);
    CHECK(std::abs(lhs2 - rhs2) < 1e-12);
  }
}

TEST_CASE("ellipticity holds at random contractive points") {
  std::mt19937 rng(4321);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    cplx a(unit(rng), unit(rng));
    while (std::abs(a) >= 1.0) a *= 0.7;
    const auto check = ellipticity_margin(system_coefficients(a));
    CHECK(check.margin > 0.0);
    CHECK(check.a12_positive);
  }
}

TEST_CASE("system residual vanishes for f(z) = z") {
  auto id = [](cplx z) { return z; };
  auto zero = [](cplx) { return cplx(0.0); };
  const auto report = system_residual(id, zero);
  CHECK(report.at_roundoff);
  for (std::size_t i = 0; i < report.spacings.size(); ++i) {
    CHECK(report.max_residual_eq1[i] < 1e-12);
    CHECK(report.max_residual_eq2[i] < 1e-12);
  }
}

TEST_CASE("system residual vanishes for affine maps") {
  // f = alpha z + beta conj(z) has a = conj(beta)/alpha under the paper's
  // convention conj(f_zbar) = a f_z.
  const cplx alpha(1.0, 0.4);
  const cplx beta(0.3, -0.2);
  auto f = [alpha, beta](cplx z) { return alpha * z + beta * std::conj(z); };
  auto a = [alpha, beta](cplx) { return std::conj(beta) / alpha; };
  const auto report = system_residual(f, a);
  CHECK(report.at_roundoff);
  for (std::size_t i = 0; i < report.spacings.size(); ++i) {
    CHECK(report.max_residual_eq1[i] < 1e-12);
    CHECK(report.max_residual_eq2[i] < 1e-12);
  }

  auto f2 = [](cplx z) { return z + 0.3 * std::conj(z); };
  auto a2 = [](cplx) { return cplx(0.3); };
  const auto report2 = system_residual(f2, a2);
  for (std::size_t i = 0; i < report2.spacings.size(); ++i)
    CHECK(report2.max_residual_eq1[i] < 1e-12);
}

TEST_CASE("pentagon map residuals converge at second order") {
  const auto map = decompose(regular_ngon_step(5), 64);
  auto f = [&map](cplx z) { return map.eval(z); };
  auto a = [&map](cplx z) {
    return map.gprime.eval(z) / map.hprime.eval(z);
  };
  const auto report = system_residual(f, a);
  CHECK_FALSE(report.at_roundoff);
  CHECK(report.convergence_slope > 1.7);
  CHECK(report.convergence_slope < 2.3);
  CHECK(report.r_squared >= 0.98);
}

TEST_CASE("residual report JSON and CSV writers") {
  auto id = [](cplx z) { return z; };
  auto zero = [](cplx) { return cplx(0.0); };
  const auto report = system_residual(id, zero);
  const std::string json = residual_report_to_json(report);
  CHECK(json.find("convergence_slope") != std::string::npos);
  const std::string path = "residual_test.csv";
  write_residual_csv(id, zero, 1e-2, path);
  std::remove(path.c_str());
}
