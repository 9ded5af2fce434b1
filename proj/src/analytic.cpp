#include "stepmap/analytic.hpp"

#include <algorithm>
#include <cmath>

#include "stepmap/series.hpp"

namespace stepmap {

AnalyticFunction AnalyticFunction::from_evaluator(
    std::function<cplx(cplx)> eval) {
  AnalyticFunction f;
  f.eval_ = std::move(eval);
  return f;
}

AnalyticFunction AnalyticFunction::from_series(std::vector<cplx> coeffs) {
  AnalyticFunction f;
  f.coeffs_ = std::move(coeffs);
  f.has_series_ = true;
  f.eval_ = [c = f.coeffs_](cplx z) { return series::horner(c, z); };
  return f;
}

AnalyticFunction AnalyticFunction::from_evaluator_and_series(
    std::function<cplx(cplx)> eval, std::vector<cplx> coeffs) {
  AnalyticFunction f;
  f.eval_ = std::move(eval);
  f.coeffs_ = std::move(coeffs);
  f.has_series_ = true;
  return f;
}

std::vector<cplx> AnalyticFunction::taylor(std::size_t count) const {
  std::vector<cplx> out(count, cplx(0.0));
  if (has_series_) {
    const std::size_t m = std::min(count, coeffs_.size());
    std::copy(coeffs_.begin(), coeffs_.begin() + static_cast<long>(m),
              out.begin());
    return out;
  }
  constexpr int kSamples = 1 << 12;
  constexpr double kRadius = 0.5;
  std::vector<cplx> values(kSamples);
  for (int s = 0; s < kSamples; ++s)
    values[s] = eval_(std::polar(kRadius, kTwoPi * s / kSamples));
  double rk = 1.0;
  for (std::size_t k = 0; k < count; ++k) {
    cplx acc(0.0);
    for (int s = 0; s < kSamples; ++s)
      acc += values[s] *
             std::polar(1.0, -kTwoPi * static_cast<double>(k) * s / kSamples);
    out[k] = acc / (static_cast<double>(kSamples) * rk);
    rk *= kRadius;
  }
  return out;
}

AnalyticFunction AnalyticFunction::scaled_argument(cplx s) const {
  AnalyticFunction f;
  f.eval_ = [inner = eval_, s](cplx z) { return inner(s * z); };
  if (has_series_) {
    f.coeffs_ = series::scale_argument(coeffs_, s);
    f.has_series_ = true;
  }
  return f;
}

double AnalyticFunction::circle_max(double r, int samples) const {
  double mx = 0.0;
  for (int s = 0; s < samples; ++s)
    mx = std::max(mx, std::abs(eval_(std::polar(r, kTwoPi * s / samples))));
  return mx;
}

}  // namespace stepmap
