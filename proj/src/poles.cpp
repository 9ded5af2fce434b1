#include "stepmap/poles.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "stepmap/optimize.hpp"
#include "stepmap/pipeline.hpp"

namespace stepmap {

std::vector<double> default_pole_radii() {
  // Geometric, 1e-2 down to 1e-5, 16 points.
  std::vector<double> radii(16);
  for (int i = 0; i < 16; ++i)
    radii[static_cast<std::size_t>(i)] =
        1e-2 * std::pow(1e-3, static_cast<double>(i) / 15.0);
  return radii;
}

double pole_order_fit(const std::function<cplx(cplx)>& hprime, cplx zeta,
                      const std::vector<double>& radii) {
  if (radii.size() < 2) throw Error("pole_order_fit: need at least 2 radii");
  std::vector<double> log_r, log_h;
  for (const double r : radii) {
    if (r < 1e-6) throw Error("pole_order_fit: radius below 1e-6");
    const cplx value = hprime(zeta * (1.0 - r));
    const double mag = std::abs(value);
    if (!std::isfinite(mag) || mag == 0.0)
      throw EvalFailure("h' evaluation not finite along the inward radius");
    log_r.push_back(std::log(r));
    log_h.push_back(std::log(mag));
  }
  const LineFit fit = fit_line(log_r, log_h);
  return -fit.slope - 1.0;
}

namespace {

struct AngularWindow {
  std::vector<double> phi;
  std::vector<cplx> signal;
  double max_abs = 0.0;
};

// Samples f on the arc |z - zeta| = r inside the disk. The interior
// condition |zeta + r e^{i phi}| < 1 reads cos(phi - theta0) < -r/2.
AngularWindow sample_arc(const std::function<cplx(cplx)>& f, cplx zeta,
                         double r, int count) {
  const double theta0 = std::arg(zeta);
  const double margin = std::asin(std::min(0.9, r / 2.0)) + 0.02;
  const double lo = theta0 + kPi / 2.0 + margin;
  const double hi = theta0 + 3.0 * kPi / 2.0 - margin;
  AngularWindow w;
  w.phi.resize(static_cast<std::size_t>(count));
  w.signal.resize(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const double phi = lo + (hi - lo) * (i + 0.5) / count;
    const cplx z = zeta + std::polar(r, phi);
    const cplx value = f(z);
    if (!std::isfinite(value.real()) || !std::isfinite(value.imag()))
      throw EvalFailure("expansion_fit: non-finite sample");
    w.phi[static_cast<std::size_t>(i)] = phi;
    w.signal[static_cast<std::size_t>(i)] = value;
    w.max_abs = std::max(w.max_abs, std::abs(value));
  }
  return w;
}

struct ProjectionFit {
  cplx amplitude;  // B in s ~ B cos(k phi - phi0)
  double phi0 = 0.0;
  double residual_sq = 0.0;
};

// For fixed k the model is linear: s = P cos(k phi) + Q sin(k phi).
// B and phi0 then follow from the separable structure.
ProjectionFit project_for_k(const AngularWindow& w, double k) {
  double cc = 0.0, ss = 0.0, cs = 0.0;
  cplx sc(0.0), ssig(0.0);
  for (std::size_t i = 0; i < w.phi.size(); ++i) {
    const double c = std::cos(k * w.phi[i]);
    const double s = std::sin(k * w.phi[i]);
    cc += c * c;
    ss += s * s;
    cs += c * s;
    sc += w.signal[i] * c;
    ssig += w.signal[i] * s;
  }
  const double det = cc * ss - cs * cs;
  ProjectionFit fit;
  cplx P(0.0), Q(0.0);
  if (std::abs(det) > 1e-14 * (cc + ss + 1.0)) {
    P = (sc * ss - ssig * cs) / det;
    Q = (ssig * cc - sc * cs) / det;
  }
  // phi0 maximizing |P cos phi0 + Q sin phi0|.
  const double alpha = 0.5 * (std::norm(P) - std::norm(Q));
  const double beta = (P * std::conj(Q)).real();
  double phi0 = 0.5 * std::atan2(beta, alpha);
  cplx B = P * std::cos(phi0) + Q * std::sin(phi0);
  const cplx B_alt = P * std::cos(phi0 + kPi / 2.0) +
                     Q * std::sin(phi0 + kPi / 2.0);
  if (std::abs(B_alt) > std::abs(B)) {
    phi0 += kPi / 2.0;
    B = B_alt;
  }
  fit.amplitude = B;
  fit.phi0 = phi0;
  for (std::size_t i = 0; i < w.phi.size(); ++i) {
    const cplx model = B * std::cos(k * w.phi[i] - phi0);
    fit.residual_sq += std::norm(w.signal[i] - model);
  }
  return fit;
}

}  // namespace

ExpansionFit expansion_fit(const std::function<cplx(cplx)>& f, cplx zeta,
                           double r, int angle_samples) {
  const AngularWindow w = sample_arc(f, zeta, r, angle_samples);

  ExpansionFit out;
  double variation = 0.0;
  {
    cplx mean(0.0);
    for (const cplx& s : w.signal) mean += s;
    mean /= static_cast<double>(w.signal.size());
    for (const cplx& s : w.signal)
      variation = std::max(variation, std::abs(s - mean));
  }
  // Constant signals carry no angular oscillation for the model to fit.
  if (w.max_abs <= 1e-14 || variation <= 1e-10 * (1.0 + w.max_abs)) {
    out.poor_fit = true;
    out.fit_residual = w.max_abs <= 1e-14 ? 0.0 : 1.0;
    return out;
  }

  // Seed candidates: frequency scan of the angular signal plus the radial
  // growth slope along the arc's inward direction.
  std::vector<double> candidates;
  for (int k = 1; k <= 16; ++k) candidates.push_back(k);
  {
    std::vector<double> log_r, log_f;
    for (double rr = r * 0.5; rr <= r * 2.0001; rr *= std::pow(4.0, 0.25)) {
      const cplx z = zeta * (1.0 - rr);
      const double mag = std::abs(f(z));
      if (std::isfinite(mag) && mag > 0.0) {
        log_r.push_back(std::log(rr));
        log_f.push_back(std::log(mag));
      }
    }
    if (log_r.size() >= 2) {
      const double slope_k = -fit_line(log_r, log_f).slope;
      if (std::isfinite(slope_k) && slope_k > 0.5 && slope_k < 24.0)
        candidates.push_back(slope_k);
    }
  }

  double best_k = candidates.front();
  double best_res = 1e300;
  for (const double k : candidates) {
    const double res = project_for_k(w, k).residual_sq;
    if (res < best_res) {
      best_res = res;
      best_k = k;
    }
  }
  // Golden-section refinement of the real exponent.
  double lo = std::max(0.25, best_k - 1.0);
  double hi = best_k + 1.0;
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double m1 = hi - gr * (hi - lo);
  double m2 = lo + gr * (hi - lo);
  double f1 = project_for_k(w, m1).residual_sq;
  double f2 = project_for_k(w, m2).residual_sq;
  for (int it = 0; it < 80; ++it) {
    if (f1 < f2) {
      hi = m2;
      m2 = m1;
      f2 = f1;
      m1 = hi - gr * (hi - lo);
      f1 = project_for_k(w, m1).residual_sq;
    } else {
      lo = m1;
      m1 = m2;
      f1 = f2;
      m2 = lo + gr * (hi - lo);
      f2 = project_for_k(w, m2).residual_sq;
    }
  }
  const double k_fit = 0.5 * (lo + hi);
  const ProjectionFit proj = project_for_k(w, k_fit);

  out.k_estimate = k_fit;
  out.amplitude = std::abs(proj.amplitude);
  // Canonical form: phi0 in [0, pi); each pi-shift flips the cosine's sign,
  // absorbed into phi1.
  double phi0_canonical = std::fmod(proj.phi0, kPi);
  if (phi0_canonical < 0.0) phi0_canonical += kPi;
  const long shifts = std::lround((proj.phi0 - phi0_canonical) / kPi);
  const cplx b_canonical =
      (shifts % 2 == 0) ? proj.amplitude : -proj.amplitude;
  out.phi0 = phi0_canonical;
  out.phi1 = std::arg(b_canonical);

  const double rms =
      std::sqrt(proj.residual_sq / static_cast<double>(w.phi.size()));
  out.fit_residual = out.amplitude > 0.0 ? rms / out.amplitude : 1.0;
  out.poor_fit = out.amplitude <= 1e-12 * w.max_abs || out.fit_residual > 0.2;
  return out;
}

CoalescingFamily coalescing_family(
    const StepFunction& base, std::pair<std::size_t, std::size_t> merge_pair,
    const std::vector<double>& delta_schedule) {
  const std::size_t n = static_cast<std::size_t>(base.step_count());
  if (n < 3) throw Error("coalescing_family: base needs at least 3 arcs");
  const auto [first, second] = merge_pair;
  if (first >= n || second >= n || second != (first + 1) % n)
    throw Error("coalescing_family: merge pair must be adjacent jump indices");

  CoalescingFamily family;
  family.base = base;
  family.merge_first = first;
  family.merge_second = second;

  const double theta_first = base.arcs()[first].theta;
  const double base_gap = ccw_gap(theta_first, base.arcs()[second].theta);
  for (std::size_t i = 1; i < delta_schedule.size(); ++i)
    if (delta_schedule[i] >= delta_schedule[i - 1])
      throw Error("coalescing_family: delta schedule must decrease");

  for (const double delta : delta_schedule) {
    if (!(delta > 0.0) || delta > base_gap + 1e-12)
      throw Error("coalescing_family: delta " + std::to_string(delta) +
                  " exceeds the base gap of the merge pair");
    std::vector<std::pair<double, cplx>> raw;
    raw.reserve(n);
    for (std::size_t j = 0; j < n; ++j) {
      const double theta = j == second ? wrap_angle(theta_first + delta)
                                       : base.arcs()[j].theta;
      raw.emplace_back(theta, base.arcs()[j].value);
    }
    const StepFunction squeezed = validate_step_function(raw);

    CoalescingMember member;
    member.delta = delta;
    try {
      const HarmonicStepMap normalized = normalize(decompose(squeezed, 512));
      member.step = normalized.source;
      member.certificate = certify(normalized);
      if (member.certificate.verdict != Verdict::univalent) {
        family.truncated = true;
        break;
      }
      member.probe_point = std::polar(1.0, wrap_angle(theta_first + delta / 2.0));
      member.order_estimate = pole_order_fit(
          [&normalized](cplx z) { return normalized.hprime.eval(z); },
          member.probe_point);
    } catch (const Error&) {
      family.truncated = true;
      break;
    }
    family.members.push_back(std::move(member));
  }
  return family;
}

std::vector<double> boundary_ratio_probe(const HarmonicStepMap& map, cplx zeta,
                                         const std::vector<double>& radii) {
  std::vector<double> out;
  out.reserve(radii.size());
  for (const double r : radii) {
    const cplx z = zeta * (1.0 - r);
    const cplx hp = map.hprime.eval(z);
    const cplx gp = map.gprime.eval(z);
    if (!std::isfinite(std::abs(hp)) || std::abs(hp) == 0.0)
      throw EvalFailure("h' vanishes or overflows on the probe path");
    out.push_back(std::abs(gp) / std::abs(hp));
  }
  return out;
}

std::string coalescing_family_to_json(const CoalescingFamily& family) {
  nlohmann::ordered_json doc;
  doc["tool"] = kToolName;
  doc["version"] = kToolVersion;
  doc["base"] =
      nlohmann::ordered_json::parse(step_function_to_json(family.base));
  doc["merge_pair"] = {family.merge_first, family.merge_second};
  doc["truncated"] = family.truncated;
  doc["members"] = nlohmann::ordered_json::array();
  for (const CoalescingMember& m : family.members) {
    nlohmann::ordered_json entry;
    entry["delta"] = m.delta;
    entry["verdict"] = verdict_name(m.certificate.verdict);
    entry["order_estimate"] = m.order_estimate;
    entry["probe_point"] = {m.probe_point.real(), m.probe_point.imag()};
    doc["members"].push_back(std::move(entry));
  }
  return doc.dump(2) + "\n";
}

void write_order_csv(const CoalescingFamily& family, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IOError("cannot write order CSV: " + path);
  out << "delta,order_estimate,verdict\n";
  for (const CoalescingMember& m : family.members)
    out << format_double(m.delta) << "," << format_double(m.order_estimate)
        << "," << verdict_name(m.certificate.verdict) << "\n";
}

}  // namespace stepmap
