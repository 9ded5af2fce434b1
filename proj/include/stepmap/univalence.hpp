#ifndef STEPMAP_UNIVALENCE_HPP
#define STEPMAP_UNIVALENCE_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "stepmap/common.hpp"
#include "stepmap/harmonic.hpp"

namespace stepmap {

struct OnCurve : Error {
  using Error::Error;
};

enum class Verdict { univalent, not_univalent, inconclusive };
enum class SenseOrientation { preserving, reversing, mixed };

struct WitnessPair {
  cplx p;
  cplx q;
  cplx image_p;
  cplx image_q;
};

// Evidence record backing a univalence verdict: winding numbers on nested
// circles, a sampled dilatation bound, and the orientation of the Jacobian.
struct UnivalenceCertificate {
  Verdict verdict = Verdict::inconclusive;
  std::vector<double> radii_tested;
  // Worst winding observed per radius (1 everywhere for a univalent map).
  std::vector<int> winding_numbers;
  std::vector<int> probes_per_radius;
  std::vector<int> probes_skipped;  // probes too close to the image curve
  double dilatation_sup = 0.0;
  bool dilatation_exceeds_one = false;
  SenseOrientation orientation = SenseOrientation::mixed;
  std::optional<WitnessPair> witnesses;
  bool degenerate = false;
};

struct WindingQuery {
  cplx center;
  double radius = 0.5;
  int samples = 256;  // >= 64
};

struct CertifyConfig {
  std::vector<double> radii{0.5, 0.9, 0.99};
  int probe_grid = 11;
  int winding_samples = 256;
  int max_depth = 24;
  double on_curve_tol = 1e-9;
  int orientation_radii = 12;
  int orientation_angles = 64;
  bool collision_search = true;
};

// Total argument change of t -> f(radius * e^{it}) around `around`, divided
// by 2*pi. Principal-branch increments are bisected adaptively until each
// is below pi/2, which pins the integer exactly.
int winding_number(const std::function<cplx(cplx)>& map, double radius,
                   cplx around, int samples = 256, int max_depth = 24,
                   double on_curve_tol = 1e-9);

// Gathers dilatation, orientation, winding and (on demand) collision
// evidence and assembles the verdict. Inconclusive is a verdict, not an
// error.
UnivalenceCertificate certify(const HarmonicStepMap& map,
                              const CertifyConfig& config = {});

// Direct search for two points with equal images: coarse image-cell
// hashing over a source grid, then simplex refinement.
std::optional<WitnessPair> find_collision(const std::function<cplx(cplx)>& map,
                                          double domain_radius = 0.97);

std::string verdict_name(Verdict v);
std::string orientation_name(SenseOrientation o);
std::string certificate_to_json(const UnivalenceCertificate& cert,
                                const CertifyConfig& config);

}  // namespace stepmap

#endif  // STEPMAP_UNIVALENCE_HPP
