#ifndef STEPMAP_OPTIMIZE_HPP
#define STEPMAP_OPTIMIZE_HPP

#include <functional>
#include <vector>

namespace stepmap {

struct SimplexResult {
  std::vector<double> x;
  double value = 0.0;
  int evaluations = 0;
  bool converged = false;
};

struct SimplexOptions {
  int max_evaluations = 2000;
  double tolerance = 1e-12;  // spread of simplex values at which to stop
  double alpha = 1.0;        // reflection
  double gamma = 2.0;        // expansion
  double rho = 0.5;          // contraction
  double sigma = 0.5;        // shrink
};

// Deterministic Nelder-Mead simplex minimization. The initial simplex is
// x0 plus one perturbed vertex per coordinate (x0[i] + step[i]).
SimplexResult nelder_mead(
    const std::function<double(const std::vector<double>&)>& objective,
    const std::vector<double>& x0, const std::vector<double>& step,
    const SimplexOptions& options = {});

// Least-squares line fit of y against x; returns slope, intercept and R^2.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 1.0;
};
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace stepmap

#endif  // STEPMAP_OPTIMIZE_HPP
