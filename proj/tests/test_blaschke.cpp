#include <doctest.h>

#include <cstdio>

#include "oracles.hpp"
#include "stepmap/blaschke.hpp"

using namespace stepmap;

namespace {

AnalyticFunction moebius_self_map() {
  // a(z) = 0.9 (z + 0.3)/(1 + 0.3 z), the standing truncation test target.
  return AnalyticFunction::from_evaluator(
      [](cplx z) { return 0.9 * (z + 0.3) / (1.0 + 0.3 * z); });
}

double sup_on_radius(const AnalyticFunction& a, const FiniteBlaschke& b,
                     double r, int samples = 1000) {
  double mx = 0.0;
  for (int s = 0; s < samples; ++s) {
    const cplx z = std::polar(r, kTwoPi * s / samples);
    mx = std::max(mx, std::abs(a(z) - eval_blaschke(b, z)));
  }
  return mx;
}

}  // namespace

TEST_CASE("eval: identity factor and constants") {
  const auto ident = FiniteBlaschke::from_zeros({cplx(0.0)}, cplx(1.0));
  CHECK(std::abs(eval_blaschke(ident, cplx(0.5)) - cplx(0.5)) < 1e-15);

  const cplx u = std::polar(1.0, 1.234);
  const auto constant = FiniteBlaschke::from_zeros({}, u);
  CHECK(constant.degree == 0);
  for (const cplx z : {cplx(0.0), cplx(0.3, 0.4), cplx(-0.9, 0.0)})
    CHECK(std::abs(eval_blaschke(constant, z) - u) < 1e-15);
}

TEST_CASE("eval: zeros 0.5 and -0.5 at the origin") {
  const auto b =
      FiniteBlaschke::from_zeros({cplx(0.5), cplx(-0.5)}, cplx(1.0));
  // Each normalized factor takes the value |alpha| at 0, giving +0.25.
  CHECK(std::abs(eval_blaschke(b, cplx(0.0)) - cplx(0.25)) < 1e-14);
}

TEST_CASE("schur parameters of z, z^2 and constants") {
  const auto z1 = schur_parameters(
      AnalyticFunction::from_series({cplx(0.0), cplx(1.0)}), 5);
  CHECK(z1.terminated);
  REQUIRE(z1.params.size() == 2);
  CHECK(std::abs(z1.params[0]) < 1e-12);
  CHECK(std::abs(z1.params[1] - cplx(1.0)) < 1e-12);

  const auto z2 = schur_parameters(
      AnalyticFunction::from_series({cplx(0.0), cplx(0.0), cplx(1.0)}), 5);
  CHECK(z2.terminated);
  REQUIRE(z2.params.size() == 3);
  CHECK(std::abs(z2.params[2] - cplx(1.0)) < 1e-12);

  const auto c = schur_parameters(
      AnalyticFunction::from_series({cplx(0.5)}), 3);
  CHECK_FALSE(c.terminated);
  REQUIRE(c.params.size() == 3);
  CHECK(std::abs(c.params[0] - cplx(0.5)) < 1e-13);
  CHECK(std::abs(c.params[1]) < 1e-12);
  CHECK(std::abs(c.params[2]) < 1e-12);
}

TEST_CASE("schur: non-self-map detected") {
  CHECK_THROWS_AS(
      schur_parameters(AnalyticFunction::from_series({cplx(0.0), cplx(2.0)}),
                       4),
      NotASelfMap);
}

TEST_CASE("truncation: fixed point and constant shift") {
  const auto id = blaschke_truncation(
      AnalyticFunction::from_series({cplx(0.0), cplx(1.0)}), 1);
  CHECK(id.degree == 1);
  for (const cplx z : {cplx(0.5), cplx(-0.2, 0.7)})
    CHECK(std::abs(eval_blaschke(id, z) - z) < 1e-12);

  const auto half =
      blaschke_truncation(AnalyticFunction::from_series({cplx(0.5)}), 1);
  for (const cplx z : {cplx(0.0), cplx(0.3, -0.1), cplx(-0.6, 0.2)}) {
    const cplx expected = (0.5 + z) / (1.0 + 0.5 * z);
    CHECK(std::abs(eval_blaschke(half, z) - expected) < 1e-12);
  }
  CHECK(std::abs(eval_blaschke(half, cplx(0.0)) - cplx(0.5)) < 1e-13);
}

TEST_CASE("truncation error decreases in the degree") {
  const auto a = moebius_self_map();
  double previous = 1e9;
  for (const int m : {2, 4, 8}) {
    const auto b = blaschke_truncation(a, m);
    const double err = sup_on_radius(a, b, 0.5);
    CHECK(err < previous);
    previous = err;
  }
}

TEST_CASE("truncation matches leading Taylor coefficients") {
  const auto a = moebius_self_map();
  for (const int m : {2, 5, 8}) {
    const auto b = blaschke_truncation(a, m);
    const auto ca = a.taylor(static_cast<std::size_t>(m));
    const auto cb = b.as_handle().taylor(static_cast<std::size_t>(m));
    for (int k = 0; k < m; ++k)
      CHECK(std::abs(ca[static_cast<std::size_t>(k)] -
                     cb[static_cast<std::size_t>(k)]) < 1e-9);
  }
}

TEST_CASE("boundary unimodularity") {
  const auto b = FiniteBlaschke::from_zeros(
      {cplx(0.5, 0.1), cplx(-0.3, 0.4), cplx(0.0), cplx(0.2, -0.7)},
      std::polar(1.0, 0.77));
  double worst = 0.0;
  for (int s = 0; s < 4096; ++s) {
    const cplx z = std::polar(1.0, kTwoPi * s / 4096.0);
    worst = std::max(worst, std::abs(std::abs(eval_blaschke(b, z)) - 1.0));
  }
  CHECK(worst <= 1e-10);
}

TEST_CASE("strict contraction inside the disk") {
  const auto b = FiniteBlaschke::from_zeros({cplx(0.4, 0.2), cplx(-0.1, -0.6)},
                                            std::polar(1.0, -0.4));
  for (const cplx z : {cplx(0.0), cplx(0.5, 0.3), cplx(-0.8, 0.1)})
    CHECK(std::abs(eval_blaschke(b, z)) < 1.0);
}

TEST_CASE("degree additivity under products") {
  const auto b1 = FiniteBlaschke::from_zeros({cplx(0.5), cplx(0.1, 0.2)},
                                             std::polar(1.0, 0.3));
  const auto b2 =
      FiniteBlaschke::from_zeros({cplx(-0.4, 0.1)}, std::polar(1.0, -1.1));
  std::vector<cplx> zeros = b1.zeros;
  zeros.insert(zeros.end(), b2.zeros.begin(), b2.zeros.end());
  const auto prod = FiniteBlaschke::from_zeros(
      zeros, b1.unimodular_factor * b2.unimodular_factor);
  CHECK(prod.degree == 3);
  for (int s = 0; s < 32; ++s) {
    const cplx z = std::polar(0.6, kTwoPi * s / 32.0);
    CHECK(std::abs(eval_blaschke(prod, z) -
                   eval_blaschke(b1, z) * eval_blaschke(b2, z)) < 1e-12);
  }
}

TEST_CASE("schur round-trip of a degree-5 product") {
  const std::vector<cplx> zeros = {cplx(0.5), cplx(-0.3, 0.2), cplx(0.1, 0.6),
                                   cplx(0.0), cplx(-0.2, -0.4)};
  const auto b = FiniteBlaschke::from_zeros(zeros, std::polar(1.0, 0.9));
  const auto d = schur_parameters(b.as_handle(), 10);
  CHECK(d.terminated);
  CHECK(d.params.size() == 6);  // terminates at the degree
  const auto rebuilt = FiniteBlaschke::from_schur(d.params);
  CHECK(rebuilt.degree == 5);
  for (int s = 0; s < 64; ++s) {
    const cplx z = std::polar(0.5, kTwoPi * s / 64.0);
    CHECK(std::abs(eval_blaschke(rebuilt, z) - eval_blaschke(b, z)) < 1e-10);
  }
}

TEST_CASE("dilate_rho") {
  const auto id = AnalyticFunction::from_series({cplx(0.0), cplx(1.0)});
  const auto half = dilate_rho(id, 0.5);
  CHECK_FALSE(half.constant_unimodular);
  CHECK(std::abs(half.fn(cplx(1.0)) - cplx(0.5)) < 1e-14);
  CHECK(std::abs(half.fn(cplx(0.4, 0.2)) - cplx(0.2, 0.1)) < 1e-14);

  const cplx u = std::polar(1.0, 0.33);
  const auto constant = dilate_rho(AnalyticFunction::from_series({u}), 0.7);
  CHECK(constant.constant_unimodular);
  CHECK(std::abs(constant.fn(cplx(0.9)) - u) < 1e-13);

  const auto sq = dilate_rho(
      AnalyticFunction::from_series({cplx(0.0), cplx(0.0), cplx(1.0)}), 0.9);
  double mx = 0.0;
  for (int s = 0; s < 512; ++s)
    mx = std::max(mx, std::abs(sq.fn(std::polar(1.0, kTwoPi * s / 512.0))));
  CHECK(mx == doctest::Approx(0.81).epsilon(1e-12));

  CHECK_THROWS_AS(dilate_rho(id, 1.0), InvalidRho);
  CHECK_THROWS_AS(dilate_rho(id, -0.1), InvalidRho);
}

TEST_CASE("blaschke JSON round-trip and Schur CSV") {
  const auto b = FiniteBlaschke::from_zeros({cplx(0.3, -0.2), cplx(-0.5, 0.1)},
                                            std::polar(1.0, 2.2));
  const std::string path = "blaschke_roundtrip_test.json";
  write_blaschke(b, path);
  const auto back = read_blaschke(path);
  CHECK(back.degree == b.degree);
  for (int s = 0; s < 16; ++s) {
    const cplx z = std::polar(0.5, kTwoPi * s / 16.0);
    CHECK(std::abs(eval_blaschke(back, z) - eval_blaschke(b, z)) < 1e-12);
  }
  std::remove(path.c_str());

  const auto d = schur_parameters(b.as_handle(), 4);
  const std::string csv = "schur_test.csv";
  write_schur_csv(d, csv);
  std::remove(csv.c_str());
}
