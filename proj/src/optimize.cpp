#include "stepmap/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "stepmap/common.hpp"

namespace stepmap {

SimplexResult nelder_mead(
    const std::function<double(const std::vector<double>&)>& objective,
    const std::vector<double>& x0, const std::vector<double>& step,
    const SimplexOptions& opt) {
  const std::size_t dim = x0.size();
  if (dim == 0 || step.size() != dim)
    throw Error("nelder_mead: bad dimensions");

  std::vector<std::vector<double>> verts(dim + 1, x0);
  for (std::size_t i = 0; i < dim; ++i) verts[i + 1][i] += step[i];

  SimplexResult result;
  std::vector<double> fv(dim + 1);
  for (std::size_t i = 0; i <= dim; ++i) {
    fv[i] = objective(verts[i]);
    ++result.evaluations;
  }

  auto order = [&] {
    std::vector<std::size_t> idx(dim + 1);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
    std::vector<std::vector<double>> v2(dim + 1);
    std::vector<double> f2(dim + 1);
    for (std::size_t k = 0; k <= dim; ++k) {
      v2[k] = verts[idx[k]];
      f2[k] = fv[idx[k]];
    }
    verts.swap(v2);
    fv.swap(f2);
  };

  while (result.evaluations < opt.max_evaluations) {
    order();
    if (std::abs(fv[dim] - fv[0]) <= opt.tolerance) {
      result.converged = true;
      break;
    }
    std::vector<double> centroid(dim, 0.0);
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t k = 0; k < dim; ++k) centroid[k] += verts[i][k];
    for (double& c : centroid) c /= static_cast<double>(dim);

    auto blend = [&](const std::vector<double>& from, double coeff) {
      std::vector<double> p(dim);
      for (std::size_t k = 0; k < dim; ++k)
        p[k] = centroid[k] + coeff * (from[k] - centroid[k]);
      return p;
    };

    const std::vector<double> reflected = blend(verts[dim], -opt.alpha);
    const double fr = objective(reflected);
    ++result.evaluations;

    if (fr < fv[0]) {
      const std::vector<double> expanded = blend(verts[dim], -opt.gamma);
      const double fe = objective(expanded);
      ++result.evaluations;
      if (fe < fr) {
        verts[dim] = expanded;
        fv[dim] = fe;
      } else {
        verts[dim] = reflected;
        fv[dim] = fr;
      }
    } else if (fr < fv[dim - 1]) {
      verts[dim] = reflected;
      fv[dim] = fr;
    } else {
      const bool outside = fr < fv[dim];
      const std::vector<double> contracted =
          outside ? blend(reflected, opt.rho) : blend(verts[dim], opt.rho);
      const double fc = objective(contracted);
      ++result.evaluations;
      if (fc < (outside ? fr : fv[dim])) {
        verts[dim] = contracted;
        fv[dim] = fc;
      } else {
        for (std::size_t i = 1; i <= dim; ++i) {
          for (std::size_t k = 0; k < dim; ++k)
            verts[i][k] = verts[0][k] + opt.sigma * (verts[i][k] - verts[0][k]);
          fv[i] = objective(verts[i]);
          ++result.evaluations;
          if (result.evaluations >= opt.max_evaluations) break;
        }
      }
    }
  }
  order();
  result.x = verts[0];
  result.value = fv[0];
  return result;
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw Error("fit_line: need matching samples, at least 2");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
    syy += y[i] * y[i];
  }
  const double denom = n * sxx - sx * sx;
  LineFit fit;
  fit.slope = (n * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / n;
  double ss_res = 0.0;
  const double mean_y = sy / n;
  double ss_tot = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double pred = fit.intercept + fit.slope * x[i];
    ss_res += (y[i] - pred) * (y[i] - pred);
    ss_tot += (y[i] - mean_y) * (y[i] - mean_y);
  }
  fit.r_squared = ss_tot <= 0.0 ? 1.0 : 1.0 - ss_res / ss_tot;
  return fit;
}

}  // namespace stepmap
