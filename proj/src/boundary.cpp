#include "stepmap/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace stepmap {

double StepFunction::arc_length(std::size_t j) const {
  if (arcs_.size() == 1) return kTwoPi;
  const double a = arcs_[j].theta;
  const double b = arcs_[(j + 1) % arcs_.size()].theta;
  return ccw_gap(a, b);
}

cplx StepFunction::value_at(double theta) const {
  const double t = wrap_angle(theta);
  // Last arc whose start is <= t; wraps to the final arc below the first
  // start angle.
  auto it = std::upper_bound(
      arcs_.begin(), arcs_.end(), t,
      [](double v, const Arc& a) { return v < a.theta; });
  if (it == arcs_.begin()) return arcs_.back().value;
  return std::prev(it)->value;
}

std::vector<std::pair<double, cplx>> StepFunction::jumps() const {
  std::vector<std::pair<double, cplx>> out;
  const std::size_t n = arcs_.size();
  if (n < 2) return out;
  out.reserve(n);
  for (std::size_t j = 0; j < n; ++j) {
    const cplx before = arcs_[(j + n - 1) % n].value;
    out.emplace_back(arcs_[j].theta, arcs_[j].value - before);
  }
  return out;
}

StepFunction validate_step_function(
    const std::vector<std::pair<double, cplx>>& raw) {
  if (raw.empty()) throw EmptyInput("step function needs at least one arc");
  std::vector<Arc> arcs;
  arcs.reserve(raw.size());
  for (const auto& [theta, value] : raw)
    arcs.push_back({wrap_angle(theta), value});
  std::sort(arcs.begin(), arcs.end(),
            [](const Arc& a, const Arc& b) { return a.theta < b.theta; });
  for (std::size_t j = 1; j < arcs.size(); ++j)
    if (arcs[j].theta == arcs[j - 1].theta)
      throw InvalidPartition("duplicate arc start angle " +
                             std::to_string(arcs[j].theta));

  const int raw_count = static_cast<int>(arcs.size());
  // Cyclically merge adjacent equal values; merging removes the later arc's
  // start angle (the earlier arc absorbs it).
  bool merged = false;
  bool changed = true;
  while (changed && arcs.size() > 1) {
    changed = false;
    for (std::size_t j = 0; j < arcs.size() && arcs.size() > 1; ++j) {
      const std::size_t next = (j + 1) % arcs.size();
      if (arcs[j].value == arcs[next].value) {
        arcs.erase(arcs.begin() + static_cast<std::ptrdiff_t>(next));
        merged = true;
        changed = true;
        break;
      }
    }
  }
  std::sort(arcs.begin(), arcs.end(),
            [](const Arc& a, const Arc& b) { return a.theta < b.theta; });
  return StepFunction(std::move(arcs), raw_count, merged);
}

double polygon_signed_area(const std::vector<cplx>& v) {
  double area2 = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const cplx& a = v[i];
    const cplx& b = v[(i + 1) % v.size()];
    area2 += a.real() * b.imag() - b.real() * a.imag();
  }
  return 0.5 * area2;
}

namespace {

double cross(cplx o, cplx a, cplx b) {
  return (a.real() - o.real()) * (b.imag() - o.imag()) -
         (a.imag() - o.imag()) * (b.real() - o.real());
}

bool on_segment(cplx p, cplx a, cplx b, double tol) {
  if (std::abs(cross(a, b, p)) > tol * (std::abs(b - a) + 1.0)) return false;
  const double dot = (p.real() - a.real()) * (b.real() - a.real()) +
                     (p.imag() - a.imag()) * (b.imag() - a.imag());
  return dot >= -tol && dot <= std::norm(b - a) + tol;
}

// Closed-segment intersection with tolerance.
bool segments_intersect(cplx a, cplx b, cplx c, cplx d, double tol) {
  const double d1 = cross(c, d, a);
  const double d2 = cross(c, d, b);
  const double d3 = cross(a, b, c);
  const double d4 = cross(a, b, d);
  if (((d1 > tol && d2 < -tol) || (d1 < -tol && d2 > tol)) &&
      ((d3 > tol && d4 < -tol) || (d3 < -tol && d4 > tol)))
    return true;
  return on_segment(a, c, d, tol) || on_segment(b, c, d, tol) ||
         on_segment(c, a, b, tol) || on_segment(d, a, b, tol);
}

}  // namespace

bool polygon_is_simple(const std::vector<cplx>& v) {
  const std::size_t n = v.size();
  double scale = 1.0;
  for (const cplx& p : v) scale = std::max(scale, std::abs(p));
  const double tol = 1e-12 * scale;

  for (std::size_t i = 0; i < n; ++i) {
    const cplx a = v[i], b = v[(i + 1) % n];
    // Fold-back at the shared vertex makes adjacent edges overlap.
    const cplx c2 = v[(i + 2) % n];
    if (std::abs(cross(a, b, c2)) <= tol * (std::abs(b - a) + 1.0)) {
      const double dot = (b.real() - a.real()) * (c2.real() - b.real()) +
                         (b.imag() - a.imag()) * (c2.imag() - b.imag());
      if (dot < 0.0) return false;
    }
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
      if (adjacent) continue;
      if (segments_intersect(a, b, v[j], v[(j + 1) % n], tol)) return false;
    }
  }
  return true;
}

bool point_in_polygon(const std::vector<cplx>& v, cplx p, double tol) {
  const std::size_t n = v.size();
  for (std::size_t i = 0; i < n; ++i)
    if (on_segment(p, v[i], v[(i + 1) % n], tol)) return true;
  bool inside = false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const bool between = (v[i].imag() > p.imag()) != (v[j].imag() > p.imag());
    if (between) {
      const double x = (v[j].real() - v[i].real()) * (p.imag() - v[i].imag()) /
                           (v[j].imag() - v[i].imag()) +
                       v[i].real();
      if (p.real() < x) inside = !inside;
    }
  }
  return inside;
}

JordanPolygon polygon_from_step(const StepFunction& sf) {
  std::vector<cplx> vertices;
  vertices.reserve(sf.arcs().size());
  for (const Arc& a : sf.arcs()) vertices.push_back(a.value);

  std::set<std::pair<double, double>> distinct;
  for (const cplx& w : vertices) distinct.insert({w.real(), w.imag()});
  if (distinct.size() < 3)
    throw NotAPolygon("need at least 3 distinct values, got " +
                      std::to_string(distinct.size()));

  double scale = 1.0;
  for (const cplx& w : vertices) scale = std::max(scale, std::abs(w));
  // All values on one line is not a Jordan polygon.
  {
    const cplx base = vertices[0];
    cplx dir(0.0);
    for (const cplx& w : vertices)
      if (std::abs(w - base) > std::abs(dir)) dir = w - base;
    bool collinear = true;
    for (const cplx& w : vertices)
      if (std::abs(std::imag((w - base) * std::conj(dir))) >
          1e-14 * scale * scale)
        collinear = false;
    if (collinear) throw NotAPolygon("all values are collinear");
  }
  if (!polygon_is_simple(vertices))
    throw NotSimple("vertex cycle self-intersects");
  const double area = polygon_signed_area(vertices);
  if (std::abs(area) <= 1e-14 * scale * scale)
    throw NotSimple("vertex cycle encloses no area");

  JordanPolygon poly;
  poly.vertices = std::move(vertices);
  poly.orientation = area > 0.0 ? Orientation::positive : Orientation::negative;
  return poly;
}

VariationReport total_variation(const StepFunction& sf) {
  VariationReport report;
  for (const auto& [theta, delta] : sf.jumps()) {
    (void)theta;
    report.jump_magnitudes.push_back(std::abs(delta));
    report.total_variation += report.jump_magnitudes.back();
  }
  return report;
}

StepFunction regular_ngon_step(int n) {
  std::vector<std::pair<double, cplx>> raw;
  raw.reserve(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    const double theta = kTwoPi * j / n;
    raw.emplace_back(theta, std::polar(1.0, theta));
  }
  return validate_step_function(raw);
}

std::vector<std::pair<std::string, StepFunction>> catalog_step_functions() {
  std::vector<std::pair<std::string, StepFunction>> catalog;
  for (int n = 3; n <= 8; ++n)
    catalog.emplace_back("ngon" + std::to_string(n), regular_ngon_step(n));

  std::vector<std::pair<double, cplx>> square;
  for (int j = 0; j < 4; ++j)
    square.emplace_back(kTwoPi * j / 4.0,
                        std::polar(1.0, kTwoPi * j / 4.0 + kPi / 4.0));
  catalog.emplace_back("square_rotated", validate_step_function(square));

  // L-shaped hexagon, centered near the origin, positively oriented.
  const std::vector<cplx> ell = {{-0.75, -0.75}, {1.25, -0.75}, {1.25, 0.25},
                                 {0.25, 0.25},   {0.25, 1.25},  {-0.75, 1.25}};
  std::vector<std::pair<double, cplx>> lshape;
  for (std::size_t j = 0; j < ell.size(); ++j)
    lshape.emplace_back(kTwoPi * static_cast<double>(j) / 6.0, ell[j]);
  catalog.emplace_back("lshape", validate_step_function(lshape));
  return catalog;
}

std::string step_function_to_json(const StepFunction& sf) {
  nlohmann::ordered_json doc;
  doc["arcs"] = nlohmann::ordered_json::array();
  for (const Arc& a : sf.arcs()) {
    doc["arcs"].push_back(
        {{"theta", a.theta}, {"value", {a.value.real(), a.value.imag()}}});
  }
  return doc.dump(2) + "\n";
}

StepFunction step_function_from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidPartition(std::string("bad map-spec JSON: ") + e.what());
  }
  if (!doc.contains("arcs") || !doc["arcs"].is_array())
    throw InvalidPartition("map-spec JSON needs an \"arcs\" array");
  std::vector<std::pair<double, cplx>> raw;
  for (const auto& item : doc["arcs"]) {
    const double theta = item.at("theta").get<double>();
    const auto& v = item.at("value");
    raw.emplace_back(theta, cplx(v.at(0).get<double>(), v.at(1).get<double>()));
  }
  return validate_step_function(raw);
}

StepFunction read_step_function(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IOError("cannot open map-spec file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return step_function_from_json(buf.str());
}

void write_step_function(const StepFunction& sf, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IOError("cannot write map-spec file: " + path);
  out << step_function_to_json(sf);
}

}  // namespace stepmap
