#include "stepmap/elliptic.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "stepmap/optimize.hpp"

namespace stepmap {

SystemCoefficients system_coefficients(cplx a_value) {
  const double a1 = a_value.real();
  const double a2 = a_value.imag();
  if (std::abs(a_value - cplx(1.0)) < 1e-15)
    throw SingularDenominator("coefficient denominator vanishes at a = 1");
  if (std::abs(a_value) >= 1.0)
    throw NotContracting("|a| must be < 1, got " +
                         std::to_string(std::abs(a_value)));
  const double denom = a2 * a2 + (1.0 - a1) * (1.0 - a1);
  SystemCoefficients c;
  c.a11 = 2.0 * a2 / (-denom);
  c.a12 = (a1 * a1 - 1.0 + a2 * a2) / (-denom);
  c.a21 = (-a2 * a2 + 1.0 - a1 * a1) / denom;
  c.a22 = 2.0 * a2 / denom;
  return c;
}

EllipticityCheck ellipticity_margin(const SystemCoefficients& c) {
  EllipticityCheck check;
  const double trace = c.a11 + c.a22;
  check.margin = 4.0 * c.a12 * c.a21 - trace * trace;
  check.a12_positive = c.a12 > 0.0;
  return check;
}

namespace {

struct GridResiduals {
  double max_eq1 = 0.0;
  double max_eq2 = 0.0;
};

// Interior sample points that keep the full difference stencil inside
// |z| <= 0.8.
std::vector<cplx> residual_grid(double max_spacing) {
  std::vector<cplx> pts;
  const double limit = 0.8 - 1.5 * max_spacing;
  const int steps = 16;
  for (int i = 0; i <= steps; ++i) {
    for (int j = 0; j <= steps; ++j) {
      const cplx z(-0.8 + 1.6 * i / steps, -0.8 + 1.6 * j / steps);
      if (std::abs(z) <= limit) pts.push_back(z);
    }
  }
  return pts;
}

GridResiduals residuals_at(const std::function<cplx(cplx)>& map,
                           const std::function<cplx(cplx)>& dilatation,
                           const std::vector<cplx>& pts, double h) {
  GridResiduals out;
  for (const cplx& z : pts) {
    const cplx fxp = map(z + h);
    const cplx fxm = map(z - h);
    const cplx fyp = map(z + cplx(0.0, h));
    const cplx fym = map(z - cplx(0.0, h));
    const double ux = (fxp.real() - fxm.real()) / (2.0 * h);
    const double vx = (fxp.imag() - fxm.imag()) / (2.0 * h);
    const double uy = (fyp.real() - fym.real()) / (2.0 * h);
    const double vy = (fyp.imag() - fym.imag()) / (2.0 * h);
    const SystemCoefficients c = system_coefficients(dilatation(z));
    out.max_eq1 =
        std::max(out.max_eq1, std::abs(ux - c.a11 * vx - c.a12 * vy));
    out.max_eq2 =
        std::max(out.max_eq2, std::abs(-uy - c.a21 * vx - c.a22 * vy));
  }
  return out;
}

}  // namespace

ResidualReport system_residual(const std::function<cplx(cplx)>& map,
                               const std::function<cplx(cplx)>& dilatation,
                               const std::vector<double>& spacings) {
  if (spacings.empty()) throw Error("system_residual: no spacings");
  const double max_spacing =
      *std::max_element(spacings.begin(), spacings.end());
  const std::vector<cplx> pts = residual_grid(max_spacing);

  ResidualReport report;
  for (const double h : spacings) {
    const GridResiduals r = residuals_at(map, dilatation, pts, h);
    report.spacings.push_back(h);
    report.max_residual_eq1.push_back(r.max_eq1);
    report.max_residual_eq2.push_back(r.max_eq2);
  }

  report.at_roundoff = true;
  for (std::size_t i = 0; i < report.spacings.size(); ++i)
    if (std::max(report.max_residual_eq1[i], report.max_residual_eq2[i]) >
        1e-13)
      report.at_roundoff = false;
  if (report.at_roundoff || report.spacings.size() < 2) {
    report.convergence_slope = 0.0;
    report.r_squared = 1.0;
    return report;
  }

  std::vector<double> log_h, log_r;
  for (std::size_t i = 0; i < report.spacings.size(); ++i) {
    log_h.push_back(std::log(report.spacings[i]));
    log_r.push_back(std::log(std::max(
        {report.max_residual_eq1[i], report.max_residual_eq2[i], 1e-300})));
  }
  const LineFit fit = fit_line(log_h, log_r);
  report.convergence_slope = fit.slope;
  report.r_squared = fit.r_squared;
  return report;
}

std::string residual_report_to_json(const ResidualReport& report) {
  nlohmann::ordered_json doc;
  doc["tool"] = kToolName;
  doc["version"] = kToolVersion;
  doc["spacings"] = report.spacings;
  doc["max_residual_eq1"] = report.max_residual_eq1;
  doc["max_residual_eq2"] = report.max_residual_eq2;
  doc["convergence_slope"] = report.convergence_slope;
  doc["r_squared"] = report.r_squared;
  doc["at_roundoff"] = report.at_roundoff;
  return doc.dump(2) + "\n";
}

void write_residual_csv(const std::function<cplx(cplx)>& map,
                        const std::function<cplx(cplx)>& dilatation,
                        double spacing, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IOError("cannot write residual CSV: " + path);
  out << "re_z,im_z,residual_eq1,residual_eq2\n";
  for (const cplx& z : residual_grid(spacing)) {
    const GridResiduals r = residuals_at(map, dilatation, {z}, spacing);
    out << format_double(z.real()) << "," << format_double(z.imag()) << ","
        << format_double(r.max_eq1) << "," << format_double(r.max_eq2)
        << "\n";
  }
  out << std::flush;
}

}  // namespace stepmap
