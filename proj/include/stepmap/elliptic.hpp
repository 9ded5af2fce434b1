#ifndef STEPMAP_ELLIPTIC_HPP
#define STEPMAP_ELLIPTIC_HPP

#include <functional>
#include <string>
#include <vector>

#include "stepmap/common.hpp"

namespace stepmap {

struct NotContracting : Error {
  using Error::Error;
};
struct SingularDenominator : Error {
  using Error::Error;
};

// Coefficients of the first-order system
//   u_x = a11 v_x + a12 v_y,   -u_y = a21 v_x + a22 v_y
// derived from a dilatation value a = a1 + i a2.
struct SystemCoefficients {
  double a11 = 0.0;
  double a12 = 1.0;
  double a21 = 1.0;
  double a22 = 0.0;
};

struct EllipticityCheck {
  double margin = 0.0;  // 4 a12 a21 - (a11 + a22)^2
  bool a12_positive = false;
};

struct ResidualReport {
  std::vector<double> spacings;
  std::vector<double> max_residual_eq1;
  std::vector<double> max_residual_eq2;
  double convergence_slope = 0.0;
  double r_squared = 1.0;
  bool at_roundoff = false;  // every residual below 1e-13: slope meaningless
};

// The displayed coefficient formulas; exact at a = 0 (Cauchy-Riemann).
SystemCoefficients system_coefficients(cplx a_value);

EllipticityCheck ellipticity_margin(const SystemCoefficients& c);

// Substitutes central differences of u, v into the system with coefficients
// from a(z), over interior points of |z| <= 0.8, one residual max per
// spacing; fits the log-log convergence slope.
ResidualReport system_residual(const std::function<cplx(cplx)>& map,
                               const std::function<cplx(cplx)>& dilatation,
                               const std::vector<double>& spacings = {
                                   1e-2, 5e-3, 2.5e-3});

std::string residual_report_to_json(const ResidualReport& report);

// Optional CSV of per-point residuals at the finest spacing.
void write_residual_csv(const std::function<cplx(cplx)>& map,
                        const std::function<cplx(cplx)>& dilatation,
                        double spacing, const std::string& path);

}  // namespace stepmap

#endif  // STEPMAP_ELLIPTIC_HPP
