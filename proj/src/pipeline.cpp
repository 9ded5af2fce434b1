#include "stepmap/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include <json.hpp>

#include "stepmap/optimize.hpp"
#include "stepmap/parallel.hpp"
#include "stepmap/series.hpp"

namespace stepmap {

namespace {

constexpr double kBoundaryRadius = 1.0 - 1e-6;

void check_normalized(const TargetMap& target) {
  const auto h_head = target.h.taylor(2);
  const auto g_head = target.g.taylor(2);
  const double defect =
      std::abs(h_head[0]) + std::abs(g_head[0]) +
      std::abs(h_head[1] - cplx(1.0)) + std::abs(g_head[1]);
  if (defect > 4e-12)
    throw NotNormalized("target violates f(0)=0, h'(0)=1, g'(0)=0 by " +
                        std::to_string(defect));
}

}  // namespace

TargetMap make_target_map(std::string name, AnalyticFunction h,
                          AnalyticFunction g, AnalyticFunction dilatation) {
  TargetMap target;
  target.name = std::move(name);
  target.h = std::move(h);
  target.g = std::move(g);
  target.dilatation = std::move(dilatation);
  check_normalized(target);
  if (target.dilatation.circle_max(0.99, 2048) >= 1.0)
    throw NotContracting("dilatation reaches modulus 1 inside the disk");
  return target;
}

TargetMap shear_construct(const AnalyticFunction& phi,
                          const AnalyticFunction& a, int series_length) {
  const std::size_t len = static_cast<std::size_t>(series_length);
  const series::Coeffs phi_c = phi.taylor(len + 1);
  const series::Coeffs a_c = a.taylor(len);
  if (a.circle_max(0.99, 2048) >= 1.0)
    throw NotContracting("shear dilatation reaches modulus 1");

  series::Coeffs one_minus_a = a_c;
  for (auto& c : one_minus_a) c = -c;
  one_minus_a[0] += 1.0;

  const series::Coeffs hp = series::mul(
      series::derivative(phi_c), series::reciprocal(one_minus_a, len), len);
  const series::Coeffs gp = series::mul(a_c, hp, len);

  return make_target_map("shear", AnalyticFunction::from_series(
                                      series::integrate(hp)),
                         AnalyticFunction::from_series(series::integrate(gp)),
                         a);
}

TargetMap catalog_target(const std::string& name, int series_length) {
  const std::size_t len = static_cast<std::size_t>(series_length);
  if (name == "analytic_koebe") {
    // k(z) = z/(1-z)^2 = sum k z^k.
    series::Coeffs h(len, cplx(0.0));
    for (std::size_t k = 1; k < len; ++k) h[k] = static_cast<double>(k);
    return make_target_map(name, AnalyticFunction::from_series(std::move(h)),
                           AnalyticFunction::from_series({cplx(0.0)}),
                           AnalyticFunction::from_series({cplx(0.0)}));
  }
  if (name == "koebe_harmonic") {
    series::Coeffs phi(len, cplx(0.0));
    for (std::size_t k = 1; k < len; ++k) phi[k] = static_cast<double>(k);
    TargetMap t = shear_construct(
        AnalyticFunction::from_series(std::move(phi)),
        AnalyticFunction::from_series({cplx(0.0), cplx(1.0)}), series_length);
    t.name = name;
    return t;
  }
  if (name == "polygon_identity") {
    return make_target_map(name,
                           AnalyticFunction::from_series({cplx(0.0), cplx(1.0)}),
                           AnalyticFunction::from_series({cplx(0.0)}),
                           AnalyticFunction::from_series({cplx(0.0)}));
  }
  throw Error("unknown catalog target: " + name);
}

TargetMap target_from_step_map(const HarmonicStepMap& map) {
  series::Coeffs h_c = map.h_series;
  if (!h_c.empty()) h_c[0] = map.constant_term;
  HarmonicStepMap copy = map;
  // The truncated series degrades near the circle; the log closed forms of
  // the analytic parts stay exact there.
  return make_target_map(
      "step_map",
      AnalyticFunction::from_evaluator_and_series(
          [copy](cplx z) { return copy.eval_h(z); }, std::move(h_c)),
      AnalyticFunction::from_evaluator_and_series(
          [copy](cplx z) { return copy.eval_g(z); }, map.g_series),
      AnalyticFunction::from_evaluator([copy](cplx z) {
        return copy.gprime.eval(z) / copy.hprime.eval(z);
      }));
}

TargetMap t_dilate(const TargetMap& F, double t) {
  if (!(t > 0.0 && t <= 1.0))
    throw InvalidT("t must lie in (0,1], got " + std::to_string(t));
  if (t == 1.0) return F;

  auto scale_series = [t](const AnalyticFunction& f) {
    if (f.has_series()) {
      series::Coeffs c = series::scale_argument(f.series(), cplx(t));
      for (auto& v : c) v /= t;
      return AnalyticFunction::from_series(std::move(c));
    }
    return AnalyticFunction::from_evaluator(
        [inner = f, t](cplx z) { return inner(t * z) / t; });
  };

  TargetMap out;
  out.name = F.name + "_t";
  out.h = scale_series(F.h);
  out.g = scale_series(F.g);
  out.dilatation = F.dilatation.scaled_argument(cplx(t));
  return out;
}

JordanPolygon inscribe_polygon(
    const TargetMap& f_t, int n,
    const std::array<double, 3>& normalization_points) {
  if (n < 3) throw NotAPolygon("inscribed polygon needs n >= 3");
  std::array<double, 3> marks;
  for (std::size_t k = 0; k < 3; ++k) marks[k] = wrap_angle(normalization_points[k]);
  if (!(ccw_gap(marks[0], marks[1]) < kTwoPi &&
        ccw_gap(marks[0], marks[1]) + ccw_gap(marks[1], marks[2]) < kTwoPi))
    throw Error("normalization angles must be strictly increasing in one period");

  // Vertex gaps must shrink uniformly in the image, so vertices are placed
  // at equal increments of boundary arc length (chordal, on a fine angular
  // table), not at equal angles.
  constexpr int kTable = 8192;
  std::vector<cplx> boundary(kTable + 1);
  parallel_for(kTable + 1, [&](std::size_t i) {
    boundary[i] = f_t.eval(
        std::polar(kBoundaryRadius,
                   kTwoPi * static_cast<double>(i) / kTable));
  });
  std::vector<double> cum(kTable + 1, 0.0);
  for (int i = 1; i <= kTable; ++i)
    cum[static_cast<std::size_t>(i)] =
        cum[static_cast<std::size_t>(i - 1)] +
        std::abs(boundary[static_cast<std::size_t>(i)] -
                 boundary[static_cast<std::size_t>(i - 1)]);
  const double total = cum.back();

  auto length_at = [&](double theta) {
    const double t = wrap_angle(theta) / kTwoPi * kTable;
    const int i = std::min(kTable - 1, static_cast<int>(t));
    const double frac = t - i;
    return cum[static_cast<std::size_t>(i)] +
           frac * (cum[static_cast<std::size_t>(i + 1)] -
                   cum[static_cast<std::size_t>(i)]);
  };
  auto theta_at = [&](double s) {
    s = std::fmod(s, total);
    if (s < 0.0) s += total;
    const auto it = std::upper_bound(cum.begin(), cum.end(), s);
    const int i = std::max(
        0, static_cast<int>(std::distance(cum.begin(), it)) - 1);
    const double seg = cum[static_cast<std::size_t>(i + 1)] -
                       cum[static_cast<std::size_t>(i)];
    const double frac = seg > 0.0 ? (s - cum[static_cast<std::size_t>(i)]) / seg
                                  : 0.0;
    return kTwoPi * (static_cast<double>(i) + frac) / kTable;
  };

  std::vector<double> positions(static_cast<std::size_t>(n));
  const double s0 = length_at(marks[0]);
  for (int j = 0; j < n; ++j)
    positions[static_cast<std::size_t>(j)] =
        std::fmod(s0 + total * j / n, total);

  // Snap the nearest free slot to each remaining normalization angle, then
  // recover vertex angles and pin the three marks exactly.
  std::vector<int> pinned_mark(positions.size(), -1);
  pinned_mark[0] = 0;
  for (std::size_t k = 1; k < 3; ++k) {
    const double target = length_at(marks[k]);
    std::size_t best = 0;
    double best_dist = total;
    for (std::size_t j = 1; j < positions.size(); ++j) {
      if (pinned_mark[j] >= 0) continue;
      double d = std::abs(positions[j] - target);
      d = std::min(d, total - d);
      if (d < best_dist) {
        best_dist = d;
        best = j;
      }
    }
    positions[best] = target;
    pinned_mark[best] = static_cast<int>(k);
  }

  std::vector<double> angles(positions.size());
  for (std::size_t j = 0; j < positions.size(); ++j)
    angles[j] = pinned_mark[j] >= 0
                    ? marks[static_cast<std::size_t>(pinned_mark[j])]
                    : wrap_angle(theta_at(positions[j]));
  std::sort(angles.begin(), angles.end());
  for (std::size_t j = 1; j < angles.size(); ++j)
    if (angles[j] - angles[j - 1] < 1e-9)
      throw Error("inscribed vertex angles collide");

  JordanPolygon poly;
  poly.vertices.reserve(angles.size());
  for (const double theta : angles)
    poly.vertices.push_back(f_t.eval(std::polar(kBoundaryRadius, theta)));

  for (std::size_t j = 0; j < poly.vertices.size(); ++j)
    if (poly.vertices[j] ==
        poly.vertices[(j + 1) % poly.vertices.size()])
      throw NotSimple("consecutive inscribed vertices coincide");
  if (!polygon_is_simple(poly.vertices))
    throw NotSimple("inscribed polygon self-intersects; raise n");
  poly.orientation = polygon_signed_area(poly.vertices) > 0.0
                         ? Orientation::positive
                         : Orientation::negative;
  return poly;
}

cplx AffineNormalizer::apply(cplx w) const {
  const double denom = std::norm(a1) - std::norm(b1);
  const cplx shifted = w - a0;
  return (std::conj(a1) * shifted - std::conj(b1) * std::conj(shifted)) /
         denom;
}

HarmonicStepMap normalize(const HarmonicStepMap& map) {
  using lcplx = std::complex<long double>;
  const auto& arcs = map.source.arcs();
  const std::size_t n = arcs.size();
  const long double two_pi = 2.0L * 3.14159265358979323846264338327950288L;
  lcplx a0(0.0L), a1(0.0L), b1(0.0L);
  for (std::size_t j = 0; j < n; ++j) {
    const lcplx w(arcs[j].value.real(), arcs[j].value.imag());
    a0 += w * static_cast<long double>(map.source.arc_length(j)) / two_pi;
    if (n > 1) {
      const lcplx before(arcs[(j + n - 1) % n].value.real(),
                         arcs[(j + n - 1) % n].value.imag());
      const long double theta = arcs[j].theta;
      const lcplx delta = w - before;
      const lcplx unit(std::cos(theta), std::sin(theta));
      a1 += delta * std::conj(unit);
      b1 += delta * unit;
    }
  }
  a1 /= lcplx(0.0L, two_pi);
  b1 = std::conj(b1 / lcplx(0.0L, -two_pi));

  if (std::abs(std::abs(a1) - std::abs(b1)) <= 1e-14)
    throw DegenerateNormalization("|h'(0)| equals |g'(0)|");

  // Renormalizing an already-normalized map is the identity; returning the
  // input unchanged makes that exact in floating point as well (the
  // measured defects of a stored normalized map sit at the value-scale
  // rounding floor).
  long double scale = 1.0L;
  for (const Arc& arc : arcs)
    scale = std::max(scale, static_cast<long double>(std::abs(arc.value)));
  const long double defect =
      std::abs(a0) / scale + std::abs(a1 - lcplx(1.0L)) + std::abs(b1);
  if (defect <= 1e-10) return map;

  const long double denom =
      std::norm(a1) - std::norm(b1);
  std::vector<std::pair<double, cplx>> raw;
  raw.reserve(n);
  for (const Arc& arc : arcs) {
    const lcplx w(arc.value.real(), arc.value.imag());
    const lcplx shifted = w - a0;
    const lcplx out =
        (std::conj(a1) * shifted - std::conj(b1) * std::conj(shifted)) / denom;
    raw.emplace_back(arc.theta, cplx(static_cast<double>(out.real()),
                                     static_cast<double>(out.imag())));
  }
  return decompose(validate_step_function(raw), map.truncation);
}

double sup_error(const std::function<cplx(cplx)>& f,
                 const std::function<cplx(cplx)>& g, double radius) {
  constexpr int kRadii = 64;
  constexpr int kAngles = 256;
  std::vector<double> row_max(kRadii, 0.0);
  parallel_for(kRadii, [&](std::size_t i) {
    const double r = radius * static_cast<double>(i + 1) / kRadii;
    double mx = 0.0;
    for (int j = 0; j < kAngles; ++j) {
      const cplx z = std::polar(r, kTwoPi * j / kAngles);
      mx = std::max(mx, std::abs(f(z) - g(z)));
    }
    row_max[i] = mx;
  });
  double out = 0.0;
  for (const double m : row_max) out = std::max(out, m);
  return out;
}

namespace {

// Fixed evaluation lattice for the fit objective (coarser than the
// reporting grid used by sup_error).
struct ObjectiveGrid {
  std::vector<cplx> points;
  std::vector<cplx> target_values;
};

ObjectiveGrid make_objective_grid(const TargetMap& f_t) {
  ObjectiveGrid grid;
  constexpr int kRadii = 16;
  constexpr int kAngles = 64;
  for (int i = 1; i <= kRadii; ++i) {
    const double r = 0.75 * i / kRadii;
    for (int j = 0; j < kAngles; ++j)
      grid.points.push_back(std::polar(r, kTwoPi * j / kAngles));
  }
  grid.target_values.resize(grid.points.size());
  parallel_for(grid.points.size(), [&](std::size_t i) {
    grid.target_values[i] = f_t.eval(grid.points[i]);
  });
  return grid;
}

// Locates the boundary-parameter preimage of w on the curve
// f_t(kBoundaryRadius e^{i theta}): dense-scan bracket from a shared table,
// then ternary refinement.
constexpr int kPreimageScan = 2048;

std::vector<cplx> boundary_scan_table(const TargetMap& f_t) {
  std::vector<cplx> table(kPreimageScan);
  parallel_for(kPreimageScan, [&](std::size_t s) {
    table[s] = f_t.eval(
        std::polar(kBoundaryRadius, kTwoPi * static_cast<double>(s) / kPreimageScan));
  });
  return table;
}

double vertex_preimage(const TargetMap& f_t, const std::vector<cplx>& table,
                       cplx w) {
  double best_t = 0.0;
  double best_d = 1e300;
  for (int s = 0; s < kPreimageScan; ++s) {
    const double d = std::abs(table[static_cast<std::size_t>(s)] - w);
    if (d < best_d) {
      best_d = d;
      best_t = kTwoPi * s / kPreimageScan;
    }
  }
  double lo = best_t - kTwoPi / kPreimageScan;
  double hi = best_t + kTwoPi / kPreimageScan;
  for (int it = 0; it < 60; ++it) {
    const double m1 = lo + (hi - lo) / 3.0;
    const double m2 = hi - (hi - lo) / 3.0;
    const double d1 = std::abs(f_t.eval(std::polar(kBoundaryRadius, m1)) - w);
    const double d2 = std::abs(f_t.eval(std::polar(kBoundaryRadius, m2)) - w);
    if (d1 < d2)
      hi = m2;
    else
      lo = m1;
  }
  return wrap_angle(0.5 * (lo + hi));
}

// Parameters: x[0] is a global shift; x[1..n-1] are log gap weights for the
// first n-1 gaps, the last gap's weight is pinned at 1 (softmax positivity
// without a flat direction).
StepFunction step_from_parameters(const std::vector<cplx>& values,
                                  double tau_base,
                                  const std::vector<double>& x) {
  const std::size_t n = values.size();
  double total = 0.0;
  std::vector<double> gaps(n);
  double mx = 0.0;
  for (std::size_t j = 0; j + 1 < n; ++j) mx = std::max(mx, x[j + 1]);
  for (std::size_t j = 0; j < n; ++j) {
    gaps[j] = std::exp((j + 1 < n ? x[j + 1] : 0.0) - mx);
    total += gaps[j];
  }
  std::vector<Arc> arcs(n);
  double prefix = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    arcs[j] = {wrap_angle(tau_base + x[0] + prefix), values[j]};
    prefix += kTwoPi * gaps[j] / total;
  }
  std::sort(arcs.begin(), arcs.end(),
            [](const Arc& a, const Arc& b) { return a.theta < b.theta; });
  return StepFunction(std::move(arcs), static_cast<int>(n), false);
}

double grid_sup_distance(const StepFunction& sf, const ObjectiveGrid& grid) {
  const std::size_t rows = grid.points.size() / 64;
  std::vector<double> row_max(rows, 0.0);
  parallel_for(rows, [&](std::size_t r) {
    double mx = 0.0;
    for (std::size_t j = r * 64; j < (r + 1) * 64; ++j) {
      const cplx value = eval_poisson_extension(sf, grid.points[j]);
      mx = std::max(mx, std::abs(value - grid.target_values[j]));
    }
    row_max[r] = mx;
  });
  double out = 0.0;
  for (const double m : row_max) out = std::max(out, m);
  return out;
}

// Penalty used in the repair phase. The dominant failure mode is the
// dilatation creeping past the unit circle in thin sectors, so the penalty
// mirrors the certificate's sampling and scales with the base objective.
double univalence_defect(const HarmonicStepMap& map, double objective_scale) {
  double excess_sum = 0.0;
  double sup = 0.0;
  constexpr int kSamples = 4096;
  const double r = 1.0 - 1e-6;
  for (int s = 0; s < kSamples; ++s) {
    const cplx z = std::polar(r, kTwoPi * s / kSamples);
    const double mag =
        std::abs(map.gprime.eval(z)) / std::abs(map.hprime.eval(z));
    sup = std::max(sup, mag);
    if (mag > 1.0) excess_sum += mag - 1.0;
  }
  double defect = 0.0;
  if (sup >= 1.0)
    defect += objective_scale *
              (1.0 + 1e3 * (sup - 1.0) + 1e2 * excess_sum);
  if (defect > 0.0) return defect;

  auto evaluator = [&map](cplx z) { return map.eval(z); };
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const cplx probe =
          map.eval(cplx(-0.4 + 0.4 * i, -0.4 + 0.4 * j) * 0.95);
      try {
        const int w = winding_number(evaluator, 0.95, probe, 256);
        defect += objective_scale * std::abs(w - 1);
      } catch (const OnCurve&) {
        defect += 0.25 * objective_scale;
      }
    }
  }
  return defect;
}

}  // namespace

FitOutcome fit_step_map(const TargetMap& f_t, const JordanPolygon& polygon,
                        const PipelineConfig& config) {
  if (polygon.vertices.size() < 3)
    throw NotAPolygon("fit needs a polygon with at least 3 vertices");
  if (polygon.orientation != Orientation::positive)
    throw NotSimple("fit expects a positively oriented polygon");

  const std::size_t n = polygon.vertices.size();
  const ObjectiveGrid grid = make_objective_grid(f_t);

  // Boundary correspondence seed: vertex preimages, then jump angles at the
  // circular midpoints between consecutive preimages.
  const std::vector<cplx> scan_table = boundary_scan_table(f_t);
  std::vector<double> preimages(n);
  for (std::size_t j = 0; j < n; ++j)
    preimages[j] = vertex_preimage(f_t, scan_table, polygon.vertices[j]);
  std::size_t rotation = 0;
  for (std::size_t j = 1; j < n; ++j)
    if (preimages[j] < preimages[rotation]) rotation = j;
  std::vector<cplx> values(n);
  std::vector<double> pre_sorted(n);
  for (std::size_t j = 0; j < n; ++j) {
    values[j] = polygon.vertices[(rotation + j) % n];
    pre_sorted[j] = preimages[(rotation + j) % n];
  }
  for (std::size_t j = 1; j < n; ++j)
    if (pre_sorted[j] <= pre_sorted[j - 1])
      throw Error("vertex preimages are not cyclically monotone");

  std::vector<double> jump0(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double prev = pre_sorted[(j + n - 1) % n];
    jump0[j] = wrap_angle(prev + 0.5 * ccw_gap(prev, pre_sorted[j]));
  }
  const double tau_base = jump0[0];

  // Pack: x[0] global shift, x[1..n-1] log gap weights relative to the
  // pinned final gap.
  const double last_gap = ccw_gap(jump0[n - 1], jump0[0]);
  std::vector<double> x0(n, 0.0);
  for (std::size_t j = 0; j + 1 < n; ++j)
    x0[j + 1] = std::log(ccw_gap(jump0[j], jump0[j + 1]) / last_gap);

  // Soft three-point normalization term.
  std::array<cplx, 3> norm_targets;
  for (std::size_t k = 0; k < 3; ++k)
    norm_targets[k] =
        f_t.eval(std::polar(kBoundaryRadius, config.normalization_points[k]));

  auto base_objective = [&](const std::vector<double>& x) {
    const StepFunction sf = step_from_parameters(values, tau_base, x);
    double obj = grid_sup_distance(sf, grid);
    // Soft three-point term, in the same units as the sup norm.
    for (std::size_t k = 0; k < 3; ++k) {
      const cplx at = eval_poisson_extension(
          sf, std::polar(kBoundaryRadius, config.normalization_points[k]));
      obj += 0.05 * std::abs(at - norm_targets[k]);
    }
    return obj;
  };

  std::vector<double> step(n, 0.25);
  step[0] = 0.3 * kTwoPi / static_cast<double>(n);

  // Restarted simplex: each restart re-expands a fresh simplex around the
  // incumbent with shrunken steps, which restores terminal convergence that
  // a single long run loses in high dimension.
  const int phase1_budget = std::max(200, config.budget * 7 / 10);
  const int round_cap = std::max(60 * static_cast<int>(n), 360);
  SimplexResult best;
  best.x = x0;
  best.value = base_objective(x0);
  int used = 1;
  double scale = 1.0;
  while (used < phase1_budget && scale > 1e-13) {
    SimplexOptions opt;
    opt.max_evaluations = std::min(phase1_budget - used, round_cap);
    opt.tolerance = 1e-15;
    std::vector<double> scaled = step;
    for (double& s : scaled) s *= scale;
    const SimplexResult round =
        nelder_mead(base_objective, best.x, scaled, opt);
    used += round.evaluations;
    const bool improved = round.value < best.value * (1.0 - 1e-9);
    if (round.value < best.value) best = round;
    scale *= improved ? 0.25 : 0.05;
  }

  FitOutcome outcome;
  outcome.step = step_from_parameters(values, tau_base, best.x);
  outcome.certificate = certify(decompose(outcome.step, 256));
  outcome.objective = grid_sup_distance(outcome.step, grid);

  if (outcome.certificate.verdict != Verdict::univalent &&
      used < config.budget) {
    const double obj_scale = std::max(outcome.objective, 1e-6);
    auto repair_objective = [&](const std::vector<double>& x) {
      const StepFunction sf = step_from_parameters(values, tau_base, x);
      const HarmonicStepMap map = decompose(sf, 16);
      return base_objective(x) + univalence_defect(map, obj_scale);
    };
    SimplexResult repaired;
    repaired.x = best.x;
    repaired.value = repair_objective(best.x);
    ++used;
    double repair_scale = 0.5;
    while (used < config.budget && repair_scale > 1e-10) {
      SimplexOptions opt;
      opt.max_evaluations = std::min(config.budget - used, round_cap);
      opt.tolerance = 1e-15;
      std::vector<double> scaled = step;
      for (double& s : scaled) s *= repair_scale;
      const SimplexResult round =
          nelder_mead(repair_objective, repaired.x, scaled, opt);
      used += round.evaluations;
      const bool improved = round.value < repaired.value * (1.0 - 1e-9);
      if (round.value < repaired.value) repaired = round;
      repair_scale *= improved ? 0.3 : 0.08;
    }
    const StepFunction candidate =
        step_from_parameters(values, tau_base, repaired.x);
    const UnivalenceCertificate cert = certify(decompose(candidate, 256));
    if (cert.verdict == Verdict::univalent) {
      outcome.step = candidate;
      outcome.certificate = cert;
      outcome.objective = grid_sup_distance(candidate, grid);
    }
  }
  outcome.evaluations_used = used;

  // Diagnostic: distance between the fitted dilatation and the Blaschke
  // truncation of a(rho z), a = dilatation of f_t.
  {
    const HarmonicStepMap fitted_map = decompose(outcome.step, 256);
    const Dilatation fitted_dil = [&] {
      try {
        return dilatation(fitted_map);
      } catch (const DegenerateAnalyticPart&) {
        return Dilatation{};
      }
    }();
    const FiniteBlaschke truncated = blaschke_truncation(
        f_t.dilatation.scaled_argument(cplx(config.rho)),
        std::max(1, config.blaschke_degree));
    double dist = 0.0;
    if (!fitted_dil.hprime.is_zero(1e-15)) {
      for (const cplx& z : grid.points)
        dist = std::max(dist,
                        std::abs(fitted_dil.eval(z) - eval_blaschke(truncated, z)));
    }
    outcome.dilatation_blaschke_distance = dist;
  }

  if (outcome.certificate.verdict != Verdict::univalent)
    throw FitFailed("budget exhausted with non-univalent best iterate",
                    std::move(outcome));
  return outcome;
}

PipelineReport run_pipeline(const PipelineConfig& config) {
  PipelineReport report;
  report.config = config;
  const TargetMap f_t =
      t_dilate(catalog_target(config.target, config.series_length), config.t);

  for (const int n : config.n_schedule) {
    const auto start = std::chrono::steady_clock::now();
    PipelineRun run;
    run.n = n;
    try {
      run.polygon = inscribe_polygon(f_t, n, config.normalization_points);
      FitOutcome fit = fit_step_map(f_t, run.polygon, config);
      run.fitted = fit.step;
      run.certificate = fit.certificate;
      run.dilatation_blaschke_distance = fit.dilatation_blaschke_distance;
      run.accepted = true;

      const HarmonicStepMap map = decompose(fit.step, 512);
      run.a0 = map.constant_term;
      run.a1 = map.h_prime0();
      run.b1 = map.g_prime0();
      const HarmonicStepMap normalized = normalize(map);
      run.b_conditions = normalized.class_defects();
      const std::array<double, 3> radii{0.25, 0.5, 0.75};
      auto target_eval = f_t.evaluator();
      auto normalized_eval = [normalized](cplx z) {
        return normalized.eval(z);
      };
      for (std::size_t k = 0; k < 3; ++k)
        run.sup_errors[k] = sup_error(normalized_eval, target_eval, radii[k]);
      run.normalized = normalized;
    } catch (const FitFailed& failure) {
      run.accepted = false;
      run.failure = failure.what();
      run.fitted = failure.best.step;
      run.certificate = failure.best.certificate;
      run.dilatation_blaschke_distance =
          failure.best.dilatation_blaschke_distance;
    } catch (const Error& err) {
      run.accepted = false;
      run.failure = err.what();
    }
    run.seconds = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - start)
                      .count();
    report.runs.push_back(std::move(run));
  }
  return report;
}

std::string pipeline_report_to_json(const PipelineReport& report) {
  nlohmann::ordered_json doc;
  doc["tool"] = kToolName;
  doc["version"] = kToolVersion;
  doc["config"] = {
      {"target", report.config.target},
      {"t", report.config.t},
      {"n_schedule", report.config.n_schedule},
      {"rho", report.config.rho},
      {"blaschke_degree", report.config.blaschke_degree},
      {"normalization_points",
       {report.config.normalization_points[0],
        report.config.normalization_points[1],
        report.config.normalization_points[2]}},
      {"budget", report.config.budget},
      {"seed", report.config.seed},
      {"series_length", report.config.series_length}};
  doc["runs"] = nlohmann::ordered_json::array();
  for (const PipelineRun& run : report.runs) {
    nlohmann::ordered_json entry;
    entry["n"] = run.n;
    entry["accepted"] = run.accepted;
    if (!run.failure.empty()) entry["failure"] = run.failure;
    entry["polygon"] = nlohmann::ordered_json::array();
    for (const cplx& v : run.polygon.vertices)
      entry["polygon"].push_back({v.real(), v.imag()});
    entry["step_function"] =
        nlohmann::ordered_json::parse(step_function_to_json(run.fitted));
    entry["certificate"] = nlohmann::ordered_json::parse(
        certificate_to_json(run.certificate, CertifyConfig{}));
    entry["normalization"] = {{"a0", {run.a0.real(), run.a0.imag()}},
                              {"a1", {run.a1.real(), run.a1.imag()}},
                              {"b1", {run.b1.real(), run.b1.imag()}}};
    entry["b_conditions"] = {run.b_conditions[0], run.b_conditions[1],
                             run.b_conditions[2]};
    entry["sup_errors"] = {{"0.25", run.sup_errors[0]},
                           {"0.5", run.sup_errors[1]},
                           {"0.75", run.sup_errors[2]}};
    entry["dilatation_blaschke_distance"] = run.dilatation_blaschke_distance;
    if (report.config.include_timing) entry["seconds"] = run.seconds;
    doc["runs"].push_back(std::move(entry));
  }
  return doc.dump(2) + "\n";
}

}  // namespace stepmap
