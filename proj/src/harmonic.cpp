#include "stepmap/harmonic.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "stepmap/series.hpp"

namespace stepmap {

cplx RationalFunction::eval(cplx z) const {
  cplx acc = series::horner(polynomial, z);
  for (const PoleTerm& t : terms) {
    const cplx w = 1.0 / (z - t.pole);
    cplx pw = w;
    for (const cplx& c : t.coeffs) {
      acc += c * pw;
      pw *= w;
    }
  }
  return acc;
}

bool RationalFunction::is_zero(double tol) const {
  for (const cplx& c : polynomial)
    if (std::abs(c) > tol) return false;
  for (const PoleTerm& t : terms)
    for (const cplx& c : t.coeffs)
      if (std::abs(c) > tol) return false;
  return true;
}

std::vector<double> harmonic_measures(const StepFunction& sf, cplx z) {
  const auto& arcs = sf.arcs();
  const std::size_t n = arcs.size();
  if (n == 1) return {1.0};

  // The argument of (zeta - z) increases strictly as zeta runs over the
  // circle, so the continuous increment over an arc is the principal
  // argument difference reduced into [0, 2*pi). The measure of the arc from
  // zeta_j to zeta_{j+1} is increment/pi - arclength/(2*pi).
  std::vector<double> endpoint_arg(n);
  for (std::size_t j = 0; j < n; ++j) {
    const cplx zeta = std::polar(1.0, arcs[j].theta);
    endpoint_arg[j] = std::arg(zeta - z);
  }
  std::vector<double> measures(n);
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t next = (j + 1) % n;
    double inc = endpoint_arg[next] - endpoint_arg[j];
    inc -= kTwoPi * std::floor(inc / kTwoPi);  // into [0, 2*pi)
    measures[j] = inc / kPi - sf.arc_length(j) / kTwoPi;
  }
  return measures;
}

cplx eval_poisson_extension(const StepFunction& sf, cplx z) {
  if (std::abs(z) > 1.0 - 1e-12)
    throw NearBoundary("|z| too close to 1 for interior evaluation");
  const auto measures = harmonic_measures(sf, z);
  cplx acc(0.0);
  for (std::size_t j = 0; j < measures.size(); ++j)
    acc += sf.arcs()[j].value * measures[j];
  return acc;
}

std::map<int, cplx> fourier_coefficients(const StepFunction& sf, int k_min,
                                         int k_max) {
  std::map<int, cplx> out;
  const auto jump_list = sf.jumps();
  for (int k = k_min; k <= k_max; ++k) {
    if (k == 0) {
      cplx mean(0.0);
      for (std::size_t j = 0; j < sf.arcs().size(); ++j)
        mean += sf.arcs()[j].value * (sf.arc_length(j) / kTwoPi);
      out[0] = mean;
      continue;
    }
    cplx acc(0.0);
    for (const auto& [theta, delta] : jump_list)
      acc += delta * std::polar(1.0, -k * theta);
    out[k] = acc / (cplx(0.0, kTwoPi) * static_cast<double>(k));
  }
  return out;
}

cplx HarmonicStepMap::eval(cplx z) const {
  return eval_poisson_extension(source, z);
}

cplx HarmonicStepMap::eval_series(cplx z) const {
  return constant_term + series::horner(h_series, z) +
         std::conj(series::horner(g_series, z));
}

cplx HarmonicStepMap::eval_h(cplx z) const {
  cplx acc = constant_term;
  for (const PoleTerm& t : hprime.terms)
    acc += t.coeffs[0] * std::log(1.0 - z / t.pole);
  return acc;
}

cplx HarmonicStepMap::eval_g(cplx z) const {
  cplx acc(0.0);
  for (const PoleTerm& t : gprime.terms)
    acc += t.coeffs[0] * std::log(1.0 - z / t.pole);
  return acc;
}

std::array<double, 3> HarmonicStepMap::class_defects() const {
  using lcplx = std::complex<long double>;
  lcplx c0(0.0L), c1(0.0L), cm1(0.0L);
  const auto& arcs = source.arcs();
  const std::size_t n = arcs.size();
  const long double two_pi = 2.0L * 3.14159265358979323846264338327950288L;
  for (std::size_t j = 0; j < n; ++j) {
    const long double theta = arcs[j].theta;
    const lcplx w(arcs[j].value.real(), arcs[j].value.imag());
    c0 += w * static_cast<long double>(source.arc_length(j)) / two_pi;
    if (n > 1) {
      const lcplx before(arcs[(j + n - 1) % n].value.real(),
                         arcs[(j + n - 1) % n].value.imag());
      const lcplx delta = w - before;
      const lcplx unit(std::cos(theta), std::sin(theta));
      c1 += delta * std::conj(unit);
      cm1 += delta * unit;
    }
  }
  const lcplx i_two_pi(0.0L, two_pi);
  c1 /= i_two_pi;
  cm1 /= -i_two_pi;
  return {static_cast<double>(std::abs(c0)),
          static_cast<double>(std::abs(c1 - lcplx(1.0L))),
          static_cast<double>(std::abs(std::conj(cm1)))};
}

HarmonicStepMap decompose(const StepFunction& sf, int truncation) {
  if (truncation < 1) throw Error("decompose: truncation must be >= 1");
  HarmonicStepMap map;
  map.source = sf;
  map.truncation = truncation;

  const auto coeffs = fourier_coefficients(sf, -truncation, truncation);
  map.constant_term = coeffs.at(0);
  map.h_series.assign(static_cast<std::size_t>(truncation) + 1, cplx(0.0));
  map.g_series.assign(static_cast<std::size_t>(truncation) + 1, cplx(0.0));
  for (int k = 1; k <= truncation; ++k) {
    map.h_series[static_cast<std::size_t>(k)] = coeffs.at(k);
    map.g_series[static_cast<std::size_t>(k)] = std::conj(coeffs.at(-k));
  }

  // Partial fractions: h'(z) = sum_j (i*jump_j/(2*pi)) / (z - zeta_j) and
  // g' takes the conjugated jumps. The sign convention is pinned by the
  // series-derivative agreement checked in the test suite.
  for (const auto& [theta, delta] : sf.jumps()) {
    const cplx zeta = std::polar(1.0, theta);
    const cplx factor = cplx(0.0, 1.0) / kTwoPi;
    map.hprime.terms.push_back({zeta, {factor * delta}});
    map.gprime.terms.push_back({zeta, {factor * std::conj(delta)}});
  }
  return map;
}

namespace {

// Numerator/denominator polynomials of g'/h' over the common denominator
// prod_j (z - zeta_j).
void ratio_polynomials(const HarmonicStepMap& map, series::Coeffs& num,
                       series::Coeffs& den) {
  if (map.gprime.terms.size() != map.hprime.terms.size())
    throw Error("dilatation: g' and h' pole lists must be parallel");
  series::Coeffs master = {cplx(1.0)};
  for (const PoleTerm& t : map.hprime.terms)
    master = series::poly_mul(master, {-t.pole, cplx(1.0)});
  num.assign(master.size(), cplx(0.0));
  den.assign(master.size(), cplx(0.0));
  for (std::size_t j = 0; j < map.hprime.terms.size(); ++j) {
    const series::Coeffs cof =
        series::poly_deflate(master, map.hprime.terms[j].pole);
    for (std::size_t k = 0; k < cof.size(); ++k) {
      den[k] += map.hprime.terms[j].coeffs[0] * cof[k];
      num[k] += map.gprime.terms[j].coeffs[0] * cof[k];
    }
  }
  num = series::poly_trim(num);
  den = series::poly_trim(den);
}

}  // namespace

Dilatation dilatation(const HarmonicStepMap& map) {
  if (map.hprime.is_zero(1e-15))
    throw DegenerateAnalyticPart("h' vanishes identically");

  Dilatation dil;
  dil.gprime = map.gprime;
  dil.hprime = map.hprime;

  series::Coeffs num, den;
  ratio_polynomials(map, num, den);

  series::Coeffs quotient, remainder;
  series::poly_divmod(num, den, quotient, remainder);
  dil.value.polynomial = quotient;

  if (series::poly_trim(remainder).size() > 1 ||
      std::abs(series::poly_trim(remainder)[0]) > 0.0) {
    const series::Coeffs dden = series::poly_derivative(den);
    double scale = 0.0;
    for (const cplx& c : num) scale = std::max(scale, std::abs(c));
    for (const cplx& root : series::poly_roots(den)) {
      const cplx residue =
          series::poly_eval(remainder, root) / series::poly_eval(dden, root);
      // A residue at a cancelling zero of h' collapses to ~0; drop it to
      // keep the representation reduced.
      if (std::abs(residue) > 1e-10 * (scale + 1.0))
        dil.value.terms.push_back({root, {residue}});
    }
  }

  // Maximum-principle surrogate for sup |a|.
  const int samples = 4096;
  const double r = 1.0 - 1e-6;
  double sup = 0.0;
  for (int s = 0; s < samples; ++s) {
    const cplx z = std::polar(r, kTwoPi * s / samples);
    sup = std::max(sup, std::abs(dil.eval(z)));
  }
  dil.sup_bound_estimate = sup;
  dil.sup_exceeds_one = sup >= 1.0;
  return dil;
}

void write_coefficients_csv(const std::map<int, cplx>& coeffs,
                            const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IOError("cannot write coefficient CSV: " + path);
  out << "k,re,im\n";
  for (const auto& [k, c] : coeffs)
    out << k << "," << format_double(c.real()) << ","
        << format_double(c.imag()) << "\n";
}

}  // namespace stepmap
