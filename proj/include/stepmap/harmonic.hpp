#ifndef STEPMAP_HARMONIC_HPP
#define STEPMAP_HARMONIC_HPP

#include <array>
#include <map>
#include <string>
#include <vector>

#include "stepmap/boundary.hpp"
#include "stepmap/common.hpp"

namespace stepmap {

struct NearBoundary : Error {
  using Error::Error;
};
struct DegenerateAnalyticPart : Error {
  using Error::Error;
};

// Rational function in partial-fraction form: polynomial part plus pole
// terms. coeffs[l] multiplies (z - pole)^-(l+1).
struct PoleTerm {
  cplx pole;
  std::vector<cplx> coeffs;  // size = pole order >= 1
};

struct RationalFunction {
  std::vector<cplx> polynomial;  // ascending coefficients; may be empty
  std::vector<PoleTerm> terms;

  cplx eval(cplx z) const;
  bool is_zero(double tol = 0.0) const;
};

// Poisson extension of a step function together with its analytic
// decomposition f = h + conj(g): truncated power series of h and g, exact
// rational h' and g' with simple poles at the jump points.
struct HarmonicStepMap {
  StepFunction source;
  std::vector<cplx> h_series;  // h_series[k] multiplies z^k; h_series[0] = 0
  std::vector<cplx> g_series;
  RationalFunction hprime;
  RationalFunction gprime;
  cplx constant_term;  // f(0), the arc-length-weighted mean
  int truncation = 0;

  // Closed-form evaluation (exact, valid up to |z| <= 1 - 1e-12).
  cplx eval(cplx z) const;
  // Evaluation through the truncated series (diagnostic route).
  cplx eval_series(cplx z) const;
  // Closed forms for the analytic parts: h = c_0 + sum_j r_j Log(1 - z/zeta_j)
  // with r_j the h' residues (the principal branch stays analytic because
  // 1 - z/zeta maps the disk into the right half-plane); likewise g.
  cplx eval_h(cplx z) const;
  cplx eval_g(cplx z) const;

  cplx h_prime0() const { return hprime.eval(cplx(0.0)); }
  cplx g_prime0() const { return gprime.eval(cplx(0.0)); }

  // (|f(0)|, |h'(0) - 1|, |g'(0)|) assembled in extended precision straight
  // from the source jumps; large-value maps need the headroom.
  std::array<double, 3> class_defects() const;
};

struct Dilatation {
  RationalFunction value;  // reduced ratio g'/h'
  double sup_bound_estimate = 0.0;  // max |a| sampled on |z| = 1 - 1e-6
  bool sup_exceeds_one = false;
  // Definitional route g'(z)/h'(z), kept for evaluation near the circle
  // where the unreduced representation is better conditioned.
  RationalFunction gprime;
  RationalFunction hprime;

  cplx eval(cplx z) const { return gprime.eval(z) / hprime.eval(z); }
};

// Harmonic measures of every arc at z: each weight lies in [0,1] and they
// sum to 1. The branch is handled through one atan2 per arc endpoint.
std::vector<double> harmonic_measures(const StepFunction& sf, cplx z);

// Closed-form value of the Poisson integral of sf at z, |z| <= 1 - 1e-12.
cplx eval_poisson_extension(const StepFunction& sf, cplx z);

// Fourier coefficients by the exact jump formula:
//   c_k = (1/(2*pi*i*k)) * sum_j jump_j * exp(-i*k*theta_j)   (k != 0),
//   c_0 = arc-length-weighted mean.
std::map<int, cplx> fourier_coefficients(const StepFunction& sf, int k_min,
                                         int k_max);

// Full analytic decomposition with series truncated at degree N.
HarmonicStepMap decompose(const StepFunction& sf, int truncation = 512);

// Reduced dilatation g'/h' with a sampled sup bound.
Dilatation dilatation(const HarmonicStepMap& map);

// Coefficient CSV rows (k, re, im).
void write_coefficients_csv(const std::map<int, cplx>& coeffs,
                            const std::string& path);

}  // namespace stepmap

#endif  // STEPMAP_HARMONIC_HPP
