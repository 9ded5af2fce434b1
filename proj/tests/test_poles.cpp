#include <doctest.h>

#include "oracles.hpp"
#include "stepmap/pipeline.hpp"
#include "stepmap/poles.hpp"

using namespace stepmap;

namespace {

// Synthetic field with a pure power-law singularity of h' at zeta.
std::function<cplx(cplx)> power_law(cplx zeta, int hprime_order) {
  return [zeta, hprime_order](cplx z) {
    return 1.0 / std::pow(z - zeta, hprime_order);
  };
}

// Synthetic boundary expansion w = amp * e^{i phi1} cos(k phi - phi0)/r^k
// around zeta = 1.
std::function<cplx(cplx)> synthetic_expansion(double k, double phi0,
                                              double phi1, double amp) {
  return [k, phi0, phi1, amp](cplx z) {
    const cplx local = z - 1.0;
    const double r = std::abs(local);
    const double phi = std::arg(local);
    return amp * std::polar(1.0, phi1) * std::cos(k * phi - phi0) /
           std::pow(r, k);
  };
}

}  // namespace

TEST_CASE("pole_order_fit recovers pure power laws") {
  // h' of order m+1 at the boundary point means h has a pole of order m.
  for (int m = 1; m <= 5; ++m) {
    const double estimate = pole_order_fit(power_law(cplx(1.0), m + 1), cplx(1.0));
    CHECK(std::abs(estimate - m) < 0.01);
  }
  // Rotated location.
  const cplx zeta = std::polar(1.0, 2.1);
  CHECK(std::abs(pole_order_fit(power_law(zeta, 3), zeta) - 2.0) < 0.01);
}

TEST_CASE("pole_order_fit tolerates bounded perturbations") {
  auto field = [](cplx z) {
    return 1.0 / std::pow(z - 1.0, 3) + 1.0 / (z + 1.0);
  };
  CHECK(std::abs(pole_order_fit(field, cplx(1.0)) - 2.0) < 0.05);
}

TEST_CASE("pole_order_fit input validation") {
  CHECK_THROWS_AS(pole_order_fit(power_law(cplx(1.0), 2), cplx(1.0), {1e-2}),
                  Error);
  CHECK_THROWS_AS(
      pole_order_fit(power_law(cplx(1.0), 2), cplx(1.0), {1e-2, 1e-8}),
      Error);
  auto blows = [](cplx) { return cplx(1.0 / 0.0); };
  CHECK_THROWS_AS(pole_order_fit(blows, cplx(1.0)), EvalFailure);
}

TEST_CASE("expansion_fit recovers (k, phi0) = (4, 0.3)") {
  const auto f = synthetic_expansion(4.0, 0.3, 0.0, 2.0);
  const auto fit = expansion_fit(f, cplx(1.0), 1e-2);
  CHECK_FALSE(fit.poor_fit);
  CHECK(std::abs(fit.k_estimate - 4.0) < 0.05);
  CHECK(std::abs(fit.phi0 - 0.3) < 0.01);
}

TEST_CASE("expansion_fit survives lower-order contamination") {
  auto f = [](cplx z) {
    const cplx local = z - 1.0;
    const double r = std::abs(local);
    const double phi = std::arg(local);
    return cplx(2.0 * std::cos(4.0 * phi - 0.3) / std::pow(r, 4.0)) +
           cplx(1.0 / (r * r));
  };
  const auto fit = expansion_fit(f, cplx(1.0), 1e-3);
  CHECK(std::abs(fit.k_estimate - 4.0) < 0.1);
}

TEST_CASE("expansion_fit flags constants as poor fits") {
  auto constant = [](cplx) { return cplx(1.0, 2.0); };
  const auto fit = expansion_fit(constant, cplx(1.0), 1e-2);
  CHECK(fit.poor_fit);

  auto zero = [](cplx) { return cplx(0.0); };
  const auto fit0 = expansion_fit(zero, cplx(1.0), 1e-2);
  CHECK(fit0.poor_fit);
  CHECK(fit0.amplitude == 0.0);
}

TEST_CASE("expansion_fit is rotation-equivariant") {
  const double psi = 0.8;
  const auto base = expansion_fit(synthetic_expansion(4.0, 0.3, 0.0, 2.0),
                                  cplx(1.0), 1e-2);
  const auto rotated = expansion_fit(synthetic_expansion(4.0, 0.3, psi, 2.0),
                                     cplx(1.0), 1e-2);
  CHECK(std::abs(rotated.k_estimate - base.k_estimate) < 0.02);
  CHECK(std::abs(rotated.phi0 - base.phi0) < 0.01);
  double shift = rotated.phi1 - base.phi1 - psi;
  shift = std::remainder(shift, kTwoPi);
  CHECK(std::abs(shift) < 0.01);
}

TEST_CASE("coalescing hexagon family stays within the pole bound") {
  const auto family =
      coalescing_family(regular_ngon_step(6), {0, 1}, {0.2, 0.05});
  CHECK_FALSE(family.truncated);
  REQUIRE(family.members.size() == 2);
  for (const auto& member : family.members) {
    CHECK(member.certificate.verdict == Verdict::univalent);
    CHECK(member.order_estimate <= 3.05);
  }
}

TEST_CASE("no-merge probes at genuine jump points stay near simple poles") {
  const auto map = normalize(decompose(regular_ngon_step(6), 256));
  auto hp = [&map](cplx z) { return map.hprime.eval(z); };
  for (const auto& [theta, delta] : map.source.jumps()) {
    (void)delta;
    const double est = pole_order_fit(hp, std::polar(1.0, theta));
    CHECK(est <= 1.1);
  }
}

TEST_CASE("coalescing family input validation") {
  CHECK_THROWS_AS(
      coalescing_family(regular_ngon_step(6), {0, 2}, {0.1}), Error);
  CHECK_THROWS_AS(
      coalescing_family(regular_ngon_step(6), {0, 1}, {2.0}), Error);
}

TEST_CASE("boundary ratio approaches 1 at jump points of polygon maps") {
  const auto map = decompose(regular_ngon_step(5), 64);
  const cplx zeta = std::polar(1.0, map.source.arcs()[1].theta);
  const auto ratios = boundary_ratio_probe(map, zeta, {1e-1, 1e-2, 1e-3});
  CHECK(std::abs(ratios.back() - 1.0) < 0.02);
  // Ratios increase toward the circle where |a| -> 1.
  CHECK(ratios[0] < ratios[2]);
}

TEST_CASE("boundary ratio detects non-Blaschke dilatations") {
  // Synthetic map with dilatation 0.5 z: g' = 0.5 z h', h' with its pole
  // away from the probe path.
  HarmonicStepMap map;
  map.source = regular_ngon_step(3);
  map.hprime.terms.push_back({cplx(-1.0), {cplx(1.0)}});
  // 0.5 z/(z+1) = 0.5 - 0.5/(z+1).
  map.gprime.polynomial = {cplx(0.5)};
  map.gprime.terms.push_back({cplx(-1.0), {cplx(-0.5)}});
  const auto ratios = boundary_ratio_probe(map, cplx(1.0), {1e-2, 1e-3});
  CHECK(std::abs(ratios.back() - 0.5) < 1e-3);
}

TEST_CASE("order CSV and family JSON writers") {
  const auto family = coalescing_family(regular_ngon_step(6), {2, 3}, {0.2});
  const std::string json = coalescing_family_to_json(family);
  CHECK(json.find("order_estimate") != std::string::npos);
  const std::string path = "order_test.csv";
  write_order_csv(family, path);
  std::remove(path.c_str());
}
