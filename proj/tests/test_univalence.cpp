#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "stepmap/univalence.hpp"

using namespace stepmap;

TEST_CASE("winding of the identity") {
  auto id = [](cplx z) { return z; };
  CHECK(winding_number(id, 0.5, cplx(0.0)) == 1);
  CHECK(winding_number(id, 0.5, cplx(2.0)) == 0);
}

TEST_CASE("winding counts preimages for z^2") {
  auto sq = [](cplx z) { return z * z; };
  CHECK(winding_number(sq, 0.5, cplx(0.1)) == 2);
  CHECK(winding_number(sq, 0.5, cplx(0.5)) == 0);
}

TEST_CASE("winding throws OnCurve for probes on the image") {
  auto id = [](cplx z) { return z; };
  CHECK_THROWS_AS(winding_number(id, 0.5, cplx(0.5, 0.0)), OnCurve);
}

TEST_CASE("pentagon map winds once around its center image") {
  const auto map = decompose(regular_ngon_step(5), 64);
  auto f = [&map](cplx z) { return map.eval(z); };
  const cplx center = map.eval(cplx(0.0));
  CHECK(winding_number(f, 0.99, center) == 1);
  CHECK(winding_number(f, 0.5, center) == 1);
}

TEST_CASE("winding is invariant under affine post-composition") {
  const auto map = decompose(regular_ngon_step(5), 64);
  std::mt19937 rng(311);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (int trial = 0; trial < 5; ++trial) {
    const cplx alpha(unit(rng) + 1.5, unit(rng));  // bounded away from 0
    const cplx beta(unit(rng), unit(rng));
    const cplx probe = map.eval(cplx(0.2, -0.1));
    auto f = [&map](cplx z) { return map.eval(z); };
    auto g = [&map, alpha, beta](cplx z) { return alpha * map.eval(z) + beta; };
    CHECK(winding_number(f, 0.9, probe) ==
          winding_number(g, 0.9, alpha * probe + beta));
  }
}

TEST_CASE("certify: regular square is univalent") {
  const auto map = decompose(regular_ngon_step(4));
  const auto cert = certify(map);
  CHECK(cert.verdict == Verdict::univalent);
  CHECK(cert.orientation == SenseOrientation::preserving);
  CHECK(cert.dilatation_sup < 1.0);
  for (const int w : cert.winding_numbers) CHECK(w == 1);
  for (std::size_t r = 0; r < cert.radii_tested.size(); ++r)
    CHECK(cert.probes_per_radius[r] > 0);
}

TEST_CASE("certify: crossing quadrilateral yields a witness pair") {
  const auto crossing =
      validate_step_function({{0.0, cplx(1.0)},
                              {kPi / 2.0, cplx(-1.0)},
                              {kPi, cplx(0.0, 1.0)},
                              {3.0 * kPi / 2.0, cplx(0.0, -1.0)}});
  const auto cert = certify(decompose(crossing));
  CHECK(cert.verdict == Verdict::not_univalent);
  REQUIRE(cert.witnesses.has_value());
  const auto& w = *cert.witnesses;
  CHECK(std::abs(w.image_p - w.image_q) <= 1e-10);
  CHECK(std::abs(w.p - w.q) >= 1e-6);
  CHECK(std::abs(w.p) < 1.0);
  CHECK(std::abs(w.q) < 1.0);
}

TEST_CASE("certify: constant map is inconclusive and degenerate") {
  const auto cert = certify(decompose(validate_step_function({{0.0, cplx(3.0)}}), 8));
  CHECK(cert.verdict == Verdict::inconclusive);
  CHECK(cert.degenerate);
}

TEST_CASE("certificates are deterministic") {
  const auto map = decompose(regular_ngon_step(6));
  const CertifyConfig config;
  const auto a = certificate_to_json(certify(map, config), config);
  const auto b = certificate_to_json(certify(map, config), config);
  CHECK(a == b);
}

TEST_CASE("orientation preserving whenever the dilatation is contractive") {
  for (int n = 3; n <= 6; ++n) {
    const auto map = decompose(regular_ngon_step(n));
    const auto cert = certify(map);
    CHECK(cert.dilatation_sup < 1.0);
    CHECK(cert.orientation == SenseOrientation::preserving);
  }
}
