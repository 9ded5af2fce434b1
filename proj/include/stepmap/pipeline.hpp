#ifndef STEPMAP_PIPELINE_HPP
#define STEPMAP_PIPELINE_HPP

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "stepmap/analytic.hpp"
#include "stepmap/blaschke.hpp"
#include "stepmap/boundary.hpp"
#include "stepmap/common.hpp"
#include "stepmap/elliptic.hpp"
#include "stepmap/harmonic.hpp"
#include "stepmap/univalence.hpp"

namespace stepmap {

struct InvalidT : Error {
  using Error::Error;
};
struct DegenerateNormalization : Error {
  using Error::Error;
};
struct NotNormalized : Error {
  using Error::Error;
};

// Normalized target in S_H^o: analytic parts with Taylor access plus the
// dilatation handle. Construction asserts f(0)=0, h'(0)=1, g'(0)=0.
struct TargetMap {
  std::string name;
  AnalyticFunction h;
  AnalyticFunction g;
  AnalyticFunction dilatation;

  cplx eval(cplx z) const { return h(z) + std::conj(g(z)); }
  std::function<cplx(cplx)> evaluator() const {
    return [copy = *this](cplx z) { return copy.eval(z); };
  }
};

TargetMap make_target_map(std::string name, AnalyticFunction h,
                          AnalyticFunction g, AnalyticFunction dilatation);

// Shear construction: h - g = phi, g' = a h', so h' = phi'/(1 - a),
// integrated termwise. phi must be normalized and a(0) = 0.
TargetMap shear_construct(const AnalyticFunction& phi,
                          const AnalyticFunction& a, int series_length = 1024);

// Built-in catalog: analytic_koebe, koebe_harmonic, polygon_identity.
TargetMap catalog_target(const std::string& name, int series_length = 1024);

// Target backed by an already-normalized step map (testing aid).
TargetMap target_from_step_map(const HarmonicStepMap& map);

// The map z -> F(t z)/t; preserves normalization, dilatation becomes A(t z).
TargetMap t_dilate(const TargetMap& F, double t);

struct PipelineConfig {
  std::string target = "koebe_harmonic";
  double t = 0.9;
  std::vector<int> n_schedule{8, 16, 32, 64};
  double rho = 0.95;
  int blaschke_degree = 8;
  std::array<double, 3> normalization_points{0.0, kTwoPi / 3.0,
                                             2.0 * kTwoPi / 3.0};
  int budget = 6000;       // optimizer evaluation cap per n
  unsigned seed = 12345;   // recorded for reproducibility of reports
  int series_length = 1024;
  bool include_timing = false;
};

// Polygon inscribed in the image of the unit circle under f_t, with
// vertices at n angles that include the three normalization angles.
JordanPolygon inscribe_polygon(
    const TargetMap& f_t, int n,
    const std::array<double, 3>& normalization_points);

struct FitOutcome {
  StepFunction step;
  UnivalenceCertificate certificate;
  double objective = 0.0;  // sup distance to the target on |z| <= 0.75
  double dilatation_blaschke_distance = 0.0;
  int evaluations_used = 0;
};

// Budget exhausted with a non-univalent best iterate; carries that iterate.
struct FitFailed : Error {
  FitFailed(std::string what, FitOutcome outcome)
      : Error(std::move(what)), best(std::move(outcome)) {}
  FitOutcome best;
};

// Jump-angle fit of a step map onto P_n against f_t: vertex values pinned,
// angles optimized by a simplex search over softmax-reparameterized gaps.
FitOutcome fit_step_map(const TargetMap& f_t, const JordanPolygon& polygon,
                        const PipelineConfig& config);

// The renormalization into B_n^o taken from the final display of the
// approximation argument:
//   g_n = (conj(a1)(f - a0) - conj(b1) conj(f - a0)) / (|a1|^2 - |b1|^2).
struct AffineNormalizer {
  cplx a0;
  cplx a1;
  cplx b1;
  cplx apply(cplx w) const;
};

HarmonicStepMap normalize(const HarmonicStepMap& map);

// max |f - g| over a deterministic 64 x 256 polar grid on |z| <= radius.
double sup_error(const std::function<cplx(cplx)>& f,
                 const std::function<cplx(cplx)>& g, double radius);

struct PipelineRun {
  int n = 0;
  bool accepted = false;
  std::string failure;  // empty when accepted
  JordanPolygon polygon;
  StepFunction fitted;
  UnivalenceCertificate certificate;
  cplx a0, a1, b1;  // normalization constants of the fitted map
  std::array<double, 3> sup_errors{0.0, 0.0, 0.0};  // radii 0.25, 0.5, 0.75
  std::array<double, 3> b_conditions{0.0, 0.0, 0.0};  // |f(0)|,|h'(0)-1|,|g'(0)|
  double dilatation_blaschke_distance = 0.0;
  double seconds = 0.0;
  std::optional<HarmonicStepMap> normalized;
};

struct PipelineReport {
  PipelineConfig config;
  std::vector<PipelineRun> runs;
};

PipelineReport run_pipeline(const PipelineConfig& config);

std::string pipeline_report_to_json(const PipelineReport& report);

}  // namespace stepmap

#endif  // STEPMAP_PIPELINE_HPP
