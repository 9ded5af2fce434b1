#ifndef STEPMAP_BOUNDARY_HPP
#define STEPMAP_BOUNDARY_HPP

#include <string>
#include <utility>
#include <vector>

#include "stepmap/common.hpp"

namespace stepmap {

struct EmptyInput : Error {
  using Error::Error;
};
struct InvalidPartition : Error {
  using Error::Error;
};
struct NotAPolygon : Error {
  using Error::Error;
};
struct NotSimple : Error {
  using Error::Error;
};

// One boundary arc: the step function equals `value` on [theta, next theta).
struct Arc {
  double theta = 0.0;
  cplx value;
};

// A circular partition of the unit circle with one complex value per arc.
// Always in normal form: angles strictly increasing in [0, 2*pi), adjacent
// values distinct (cyclically) unless there is a single arc.
class StepFunction {
 public:
  StepFunction() = default;
  StepFunction(std::vector<Arc> arcs, int raw_arc_count, bool merged)
      : arcs_(std::move(arcs)),
        raw_arc_count_(raw_arc_count),
        merged_degenerate_(merged) {}

  const std::vector<Arc>& arcs() const { return arcs_; }
  // Step count after degenerate merging.
  int step_count() const { return static_cast<int>(arcs_.size()); }
  // Arc count of the raw input before merging (Open Question: both reported).
  int raw_arc_count() const { return raw_arc_count_; }
  bool merged_degenerate() const { return merged_degenerate_; }

  // Angular length of arc j (cyclic).
  double arc_length(std::size_t j) const;

  // Right-continuous boundary value at angle theta.
  cplx value_at(double theta) const;

  // Jump points as (theta_j, value_after - value_before); empty for a
  // constant function.
  std::vector<std::pair<double, cplx>> jumps() const;

 private:
  std::vector<Arc> arcs_;
  int raw_arc_count_ = 0;
  bool merged_degenerate_ = false;
};

enum class Orientation { positive, negative };

// A simple closed polygon; orientation always matches the signed area.
struct JordanPolygon {
  std::vector<cplx> vertices;
  Orientation orientation = Orientation::positive;
};

struct VariationReport {
  double total_variation = 0.0;
  std::vector<double> jump_magnitudes;
};

// Normalizes raw (angle, value) pairs into a StepFunction: angles reduced
// mod 2*pi and sorted, cyclically adjacent equal values merged.
StepFunction validate_step_function(
    const std::vector<std::pair<double, cplx>>& raw);

// Polygon whose vertices are the arc values in arc order.
JordanPolygon polygon_from_step(const StepFunction& sf);

VariationReport total_variation(const StepFunction& sf);

double polygon_signed_area(const std::vector<cplx>& vertices);

// Simplicity test by pairwise segment intersection, endpoint tolerance 1e-12
// relative to the vertex scale.
bool polygon_is_simple(const std::vector<cplx>& vertices);

// Winding-parity point membership; points within tol of an edge count as
// inside.
bool point_in_polygon(const std::vector<cplx>& vertices, cplx p,
                      double tol = 1e-9);

// Equal-arc step function whose values are the n-th roots of unity.
StepFunction regular_ngon_step(int n);

// Named step maps used across tests and reports: regular 3..8-gons plus a
// rotated square and a nonconvex L-shaped hexagon.
std::vector<std::pair<std::string, StepFunction>> catalog_step_functions();

// Map-spec JSON file: {"arcs":[{"theta":t,"value":[re,im]},...]}.
StepFunction read_step_function(const std::string& path);
void write_step_function(const StepFunction& sf, const std::string& path);
std::string step_function_to_json(const StepFunction& sf);
StepFunction step_function_from_json(const std::string& text);

}  // namespace stepmap

#endif  // STEPMAP_BOUNDARY_HPP
