#include "stepmap/univalence.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <json.hpp>

#include "stepmap/optimize.hpp"

namespace stepmap {

namespace {

// Curve sample cache keyed by parameter t in [0, 2*pi). Midpoints of dyadic
// splits reproduce exactly, so lookups hit across probes.
class CircleCurve {
 public:
  CircleCurve(std::function<cplx(cplx)> map, double radius, int samples)
      : map_(std::move(map)), radius_(radius) {
    for (int s = 0; s < samples; ++s) {
      const double t = kTwoPi * s / samples;
      cache_.emplace(t, map_(std::polar(radius_, t)));
    }
  }

  cplx at(double t) {
    auto it = cache_.find(t);
    if (it != cache_.end()) return it->second;
    const cplx w = map_(std::polar(radius_, t));
    cache_.emplace(t, w);
    return w;
  }

  // Ordered parameters currently sampled.
  std::vector<double> knots() const {
    std::vector<double> t;
    t.reserve(cache_.size());
    for (const auto& [key, value] : cache_) t.push_back(key);
    return t;
  }

 private:
  std::function<cplx(cplx)> map_;
  double radius_;
  std::map<double, cplx> cache_;
};

double arg_increment(cplx w0, cplx w1, cplx around) {
  return std::arg((w1 - around) / (w0 - around));
}

// Summed principal-branch increments over [t0, t1], bisecting until each
// increment is below pi/2.
double winding_segment(CircleCurve& curve, double t0, cplx w0, double t1,
                       cplx w1, cplx around, int depth, int max_depth,
                       double tol) {
  if (std::abs(w0 - around) < tol || std::abs(w1 - around) < tol)
    throw OnCurve("image curve passes within tolerance of the probe point");
  const double inc = arg_increment(w0, w1, around);
  if (std::abs(inc) < kPi / 2.0) return inc;
  if (depth >= max_depth)
    throw OnCurve("argument increment not resolvable at max refinement");
  const double tm = 0.5 * (t0 + t1);
  const cplx wm = curve.at(tm);
  return winding_segment(curve, t0, w0, tm, wm, around, depth + 1, max_depth,
                         tol) +
         winding_segment(curve, tm, wm, t1, w1, around, depth + 1, max_depth,
                         tol);
}

int winding_on_curve(CircleCurve& curve, cplx around, int max_depth,
                     double tol) {
  const std::vector<double> knots = curve.knots();
  double total = 0.0;
  for (std::size_t i = 0; i < knots.size(); ++i) {
    const double t0 = knots[i];
    const double t1 = i + 1 < knots.size() ? knots[i + 1] : kTwoPi;
    const cplx w0 = curve.at(t0);
    const cplx w1 = i + 1 < knots.size() ? curve.at(t1) : curve.at(knots[0]);
    total += winding_segment(curve, t0, w0, t1, w1, around, 1, max_depth, tol);
  }
  const double turns = total / kTwoPi;
  const int rounded = static_cast<int>(std::lround(turns));
  if (std::abs(turns - rounded) > 1e-6)
    throw OnCurve("argument sum did not close to an integer");
  return rounded;
}

}  // namespace

int winding_number(const std::function<cplx(cplx)>& map, double radius,
                   cplx around, int samples, int max_depth,
                   double on_curve_tol) {
  if (samples < 64) samples = 64;
  CircleCurve curve(map, radius, samples);
  return winding_on_curve(curve, around, max_depth, on_curve_tol);
}

std::optional<WitnessPair> find_collision(const std::function<cplx(cplx)>& map,
                                          double domain_radius) {
  constexpr int kGrid = 64;
  struct Sample {
    cplx z;
    cplx w;
  };
  std::vector<Sample> samples;
  samples.reserve(kGrid * kGrid);
  double lo_x = 0, hi_x = 0, lo_y = 0, hi_y = 0;
  for (int i = 0; i < kGrid; ++i) {
    for (int j = 0; j < kGrid; ++j) {
      const double x = -domain_radius + 2.0 * domain_radius * i / (kGrid - 1);
      const double y = -domain_radius + 2.0 * domain_radius * j / (kGrid - 1);
      const cplx z(x, y);
      if (std::abs(z) > domain_radius) continue;
      const cplx w = map(z);
      samples.push_back({z, w});
      lo_x = std::min(lo_x, w.real());
      hi_x = std::max(hi_x, w.real());
      lo_y = std::min(lo_y, w.imag());
      hi_y = std::max(hi_y, w.imag());
    }
  }
  const double span = std::max({hi_x - lo_x, hi_y - lo_y, 1e-12});
  const double cell = span / 96.0;

  std::map<std::pair<long, long>, std::vector<std::size_t>> buckets;
  for (std::size_t s = 0; s < samples.size(); ++s) {
    const long cx = static_cast<long>(std::floor(samples[s].w.real() / cell));
    const long cy = static_cast<long>(std::floor(samples[s].w.imag() / cell));
    buckets[{cx, cy}].push_back(s);
  }

  struct Candidate {
    std::size_t a;
    std::size_t b;
    double image_dist;
  };
  std::vector<Candidate> candidates;
  for (const auto& [key, members] : buckets) {
    for (long dx = 0; dx <= 1; ++dx) {
      for (long dy = -1; dy <= 1; ++dy) {
        if (dx == 0 && dy < 0) continue;
        const auto it = buckets.find({key.first + dx, key.second + dy});
        if (it == buckets.end()) continue;
        for (std::size_t a : members) {
          for (std::size_t b : it->second) {
            if (dx == 0 && dy == 0 && b <= a) continue;
            if (std::abs(samples[a].z - samples[b].z) < 0.05) continue;
            candidates.push_back(
                {a, b, std::abs(samples[a].w - samples[b].w)});
          }
        }
      }
    }
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Candidate& u, const Candidate& v) {
                     return u.image_dist < v.image_dist;
                   });
  if (candidates.size() > 40) candidates.resize(40);

  const double rim = domain_radius + 0.015;
  auto objective = [&](const std::vector<double>& x) {
    const cplx p(x[0], x[1]);
    const cplx q(x[2], x[3]);
    double penalty = 0.0;
    if (std::abs(p) > rim) penalty += 50.0 * (std::abs(p) - rim);
    if (std::abs(q) > rim) penalty += 50.0 * (std::abs(q) - rim);
    const double sep = std::abs(p - q);
    if (sep < 0.02) penalty += 10.0 * (0.02 - sep);
    if (penalty > 0.0) return penalty + 1.0;
    return std::abs(map(p) - map(q));
  };

  for (const Candidate& cand : candidates) {
    const cplx p0 = samples[cand.a].z;
    const cplx q0 = samples[cand.b].z;
    SimplexOptions opt;
    opt.max_evaluations = 600;
    opt.tolerance = 1e-16;
    const double h = 2.0 * domain_radius / (kGrid - 1);
    const SimplexResult res =
        nelder_mead(objective, {p0.real(), p0.imag(), q0.real(), q0.imag()},
                    {h, h, -h, -h}, opt);
    const cplx p(res.x[0], res.x[1]);
    const cplx q(res.x[2], res.x[3]);
    if (std::abs(p) >= 1.0 || std::abs(q) >= 1.0) continue;
    if (std::abs(p - q) < 1e-6) continue;
    if (std::abs(map(p) - map(q)) <= 1e-10)
      return WitnessPair{p, q, map(p), map(q)};
  }
  return std::nullopt;
}

UnivalenceCertificate certify(const HarmonicStepMap& map,
                              const CertifyConfig& config) {
  UnivalenceCertificate cert;

  if (map.source.step_count() < 2 ||
      (map.hprime.is_zero(1e-15) && map.gprime.is_zero(1e-15))) {
    cert.degenerate = true;
    cert.verdict = Verdict::inconclusive;
    return cert;
  }

  Dilatation dil;
  bool have_dilatation = true;
  try {
    dil = dilatation(map);
    cert.dilatation_sup = dil.sup_bound_estimate;
    cert.dilatation_exceeds_one = dil.sup_exceeds_one;
  } catch (const DegenerateAnalyticPart&) {
    have_dilatation = false;
    cert.degenerate = true;
  }

  // Orientation: sign of |h'|^2 - |g'|^2 on a polar grid.
  {
    int pos = 0, neg = 0;
    for (int i = 1; i <= config.orientation_radii; ++i) {
      const double r = 0.9 * i / config.orientation_radii;
      for (int j = 0; j < config.orientation_angles; ++j) {
        const cplx z = std::polar(r, kTwoPi * j / config.orientation_angles);
        const double hp = std::abs(map.hprime.eval(z));
        const double gp = std::abs(map.gprime.eval(z));
        const double diff = hp * hp - gp * gp;
        const double scale = hp * hp + gp * gp;
        if (diff > 1e-14 * scale)
          ++pos;
        else if (diff < -1e-14 * scale)
          ++neg;
      }
    }
    if (pos > 0 && neg == 0)
      cert.orientation = SenseOrientation::preserving;
    else if (neg > 0 && pos == 0)
      cert.orientation = SenseOrientation::reversing;
    else
      cert.orientation = SenseOrientation::mixed;
  }

  auto evaluator = [&map](cplx z) { return map.eval(z); };

  bool all_windings_one = true;
  for (const double radius : config.radii) {
    CircleCurve curve(evaluator, radius, config.winding_samples);
    int worst = 1;
    int tested = 0;
    int skipped = 0;
    const double s = 0.67 * radius;
    for (int i = 0; i < config.probe_grid; ++i) {
      for (int j = 0; j < config.probe_grid; ++j) {
        const double x = -s + 2.0 * s * i / (config.probe_grid - 1);
        const double y = -s + 2.0 * s * j / (config.probe_grid - 1);
        const cplx probe = map.eval(cplx(x, y));
        try {
          const int w = winding_on_curve(curve, probe, config.max_depth,
                                         config.on_curve_tol);
          ++tested;
          if (w != 1) {
            worst = w;
            all_windings_one = false;
          }
        } catch (const OnCurve&) {
          ++skipped;
        }
      }
    }
    cert.radii_tested.push_back(radius);
    cert.winding_numbers.push_back(worst);
    cert.probes_per_radius.push_back(tested);
    cert.probes_skipped.push_back(skipped);
  }

  const bool clean = all_windings_one && have_dilatation &&
                     !cert.dilatation_exceeds_one &&
                     cert.dilatation_sup < 1.0 &&
                     cert.orientation == SenseOrientation::preserving;
  if (clean) {
    cert.verdict = Verdict::univalent;
    return cert;
  }

  if (config.collision_search) {
    const auto witness = find_collision(evaluator);
    if (witness) {
      cert.witnesses = witness;
      cert.verdict = Verdict::not_univalent;
      return cert;
    }
  }
  cert.verdict = Verdict::inconclusive;
  return cert;
}

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::univalent:
      return "univalent";
    case Verdict::not_univalent:
      return "not_univalent";
    default:
      return "inconclusive";
  }
}

std::string orientation_name(SenseOrientation o) {
  switch (o) {
    case SenseOrientation::preserving:
      return "preserving";
    case SenseOrientation::reversing:
      return "reversing";
    default:
      return "mixed";
  }
}

std::string certificate_to_json(const UnivalenceCertificate& cert,
                                const CertifyConfig& config) {
  nlohmann::ordered_json doc;
  doc["tool"] = kToolName;
  doc["version"] = kToolVersion;
  doc["config"] = {{"radii", config.radii},
                   {"probe_grid", config.probe_grid},
                   {"winding_samples", config.winding_samples},
                   {"max_depth", config.max_depth},
                   {"on_curve_tol", config.on_curve_tol},
                   {"collision_search", config.collision_search}};
  doc["verdict"] = verdict_name(cert.verdict);
  doc["radii_tested"] = cert.radii_tested;
  doc["winding_numbers"] = cert.winding_numbers;
  doc["probes_per_radius"] = cert.probes_per_radius;
  doc["probes_skipped"] = cert.probes_skipped;
  doc["dilatation_sup"] = cert.dilatation_sup;
  doc["dilatation_exceeds_one"] = cert.dilatation_exceeds_one;
  doc["orientation"] = orientation_name(cert.orientation);
  doc["degenerate"] = cert.degenerate;
  if (cert.witnesses) {
    doc["witnesses"] = {
        {"p", {cert.witnesses->p.real(), cert.witnesses->p.imag()}},
        {"q", {cert.witnesses->q.real(), cert.witnesses->q.imag()}},
        {"image_p",
         {cert.witnesses->image_p.real(), cert.witnesses->image_p.imag()}},
        {"image_q",
         {cert.witnesses->image_q.real(), cert.witnesses->image_q.imag()}}};
  } else {
    doc["witnesses"] = nullptr;
  }
  return doc.dump(2) + "\n";
}

}  // namespace stepmap
