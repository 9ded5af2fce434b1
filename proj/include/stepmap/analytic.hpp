#ifndef STEPMAP_ANALYTIC_HPP
#define STEPMAP_ANALYTIC_HPP

#include <functional>
#include <vector>

#include "stepmap/common.hpp"

namespace stepmap {

// Handle to an analytic function on the unit disk: a pointwise evaluator
// plus a Taylor-coefficient source. When constructed from an evaluator
// alone, coefficients come from trapezoidal circle quadrature at radius 0.5
// with 2^12 samples (spectrally accurate for functions analytic past that
// radius).
class AnalyticFunction {
 public:
  AnalyticFunction() = default;

  static AnalyticFunction from_evaluator(std::function<cplx(cplx)> eval);
  static AnalyticFunction from_series(std::vector<cplx> coeffs);
  static AnalyticFunction from_evaluator_and_series(
      std::function<cplx(cplx)> eval, std::vector<cplx> coeffs);

  cplx operator()(cplx z) const { return eval_(z); }
  bool valid() const { return static_cast<bool>(eval_); }

  // First `count` Taylor coefficients (padded with zeros if the stored
  // series is shorter).
  std::vector<cplx> taylor(std::size_t count) const;

  bool has_series() const { return has_series_; }
  const std::vector<cplx>& series() const { return coeffs_; }

  // The handle z -> f(s*z).
  AnalyticFunction scaled_argument(cplx s) const;

  // max |f| over `samples` equispaced points on |z| = r.
  double circle_max(double r, int samples = 4096) const;

 private:
  std::function<cplx(cplx)> eval_;
  std::vector<cplx> coeffs_;
  bool has_series_ = false;
};

}  // namespace stepmap

#endif  // STEPMAP_ANALYTIC_HPP
