#ifndef STEPMAP_POLES_HPP
#define STEPMAP_POLES_HPP

#include <functional>
#include <string>
#include <vector>

#include "stepmap/common.hpp"
#include "stepmap/harmonic.hpp"
#include "stepmap/univalence.hpp"

namespace stepmap {

struct EvalFailure : Error {
  using Error::Error;
};

// Fit of the local boundary expansion
//   f ~ amplitude * e^{i phi1} * cos(k phi - phi0)
// on a small arc around a boundary point; phi0 is canonicalized into
// [0, pi) by absorbing sign flips into phi1.
struct ExpansionFit {
  double k_estimate = 0.0;
  double phi0 = 0.0;
  double phi1 = 0.0;
  double amplitude = 0.0;
  double fit_residual = 0.0;  // relative to the fitted amplitude
  bool poor_fit = false;      // residual above 20% of amplitude
};

struct CoalescingMember {
  double delta = 0.0;
  StepFunction step;
  UnivalenceCertificate certificate;
  double order_estimate = 0.0;
  cplx probe_point;
};

struct CoalescingFamily {
  StepFunction base;
  std::size_t merge_first = 0;
  std::size_t merge_second = 0;
  std::vector<CoalescingMember> members;
  bool truncated = false;  // certification failed at some delta
};

// Default radii schedule for order fitting: geometric from 1e-2 to 1e-5.
std::vector<double> default_pole_radii();

// Least-squares slope s of log|h'| against log r along the inward radius
// zeta (1 - r); the pole order estimate of h is -s - 1.
double pole_order_fit(const std::function<cplx(cplx)>& hprime, cplx zeta,
                      const std::vector<double>& radii = default_pole_radii());

// Fits (k, phi0, phi1, amplitude) to the angular oscillation of f on the
// arc |z - zeta| = r inside the disk, seeded by an FFT of the angular
// signal; nonlinear refinement by simplex search.
ExpansionFit expansion_fit(const std::function<cplx(cplx)>& f, cplx zeta,
                           double r, int angle_samples = 256);

// Family of step functions with the angular gap between two adjacent jump
// points squeezed to each delta; members are normalized into B_n^o,
// certified, and probed at the merging location.
CoalescingFamily coalescing_family(const StepFunction& base,
                                   std::pair<std::size_t, std::size_t> merge_pair,
                                   const std::vector<double>& delta_schedule);

// |g'/h'| along the inward radius at a jump point; approaches 1 for maps
// whose dilatation is a finite Blaschke product.
std::vector<double> boundary_ratio_probe(const HarmonicStepMap& map, cplx zeta,
                                         const std::vector<double>& radii);

std::string coalescing_family_to_json(const CoalescingFamily& family);
void write_order_csv(const CoalescingFamily& family, const std::string& path);

}  // namespace stepmap

#endif  // STEPMAP_POLES_HPP
