#include "stepmap/series.hpp"

#include <algorithm>
#include <cmath>

namespace stepmap::series {

Coeffs mul(const Coeffs& a, const Coeffs& b, std::size_t len) {
  Coeffs out(len, cplx(0.0));
  for (std::size_t i = 0; i < a.size() && i < len; ++i) {
    if (a[i] == cplx(0.0)) continue;
    const std::size_t jmax = std::min(b.size(), len - i);
    for (std::size_t j = 0; j < jmax; ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

Coeffs reciprocal(const Coeffs& a, std::size_t len) {
  if (a.empty() || a[0] == cplx(0.0))
    throw Error("series reciprocal: zero constant term");
  Coeffs r(len, cplx(0.0));
  r[0] = 1.0 / a[0];
  for (std::size_t k = 1; k < len; ++k) {
    cplx acc(0.0);
    const std::size_t jmax = std::min(k, a.size() - 1);
    for (std::size_t j = 1; j <= jmax; ++j) acc += a[j] * r[k - j];
    r[k] = -acc / a[0];
  }
  return r;
}

Coeffs derivative(const Coeffs& a) {
  if (a.size() <= 1) return {};
  Coeffs d(a.size() - 1);
  for (std::size_t k = 1; k < a.size(); ++k)
    d[k - 1] = static_cast<double>(k) * a[k];
  return d;
}

Coeffs integrate(const Coeffs& a) {
  Coeffs p(a.size() + 1, cplx(0.0));
  for (std::size_t k = 0; k < a.size(); ++k)
    p[k + 1] = a[k] / static_cast<double>(k + 1);
  return p;
}

Coeffs scale_argument(const Coeffs& a, cplx s) {
  Coeffs out(a.size());
  cplx pw(1.0);
  for (std::size_t k = 0; k < a.size(); ++k) {
    out[k] = a[k] * pw;
    pw *= s;
  }
  return out;
}

cplx horner(const Coeffs& a, cplx z) {
  cplx acc(0.0);
  for (std::size_t k = a.size(); k-- > 0;) acc = acc * z + a[k];
  return acc;
}

Coeffs poly_trim(Coeffs p, double rel_tol) {
  double mx = 0.0;
  for (const cplx& c : p) mx = std::max(mx, std::abs(c));
  const double cut = mx * rel_tol;
  while (p.size() > 1 && std::abs(p.back()) <= cut) p.pop_back();
  if (p.empty()) p.push_back(cplx(0.0));
  return p;
}

cplx poly_eval(const Coeffs& p, cplx z) { return horner(p, z); }

Coeffs poly_derivative(const Coeffs& p) { return derivative(p); }

Coeffs poly_mul(const Coeffs& a, const Coeffs& b) {
  Coeffs out(a.size() + b.size() - 1, cplx(0.0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

void poly_divmod(const Coeffs& n, const Coeffs& d_in, Coeffs& q, Coeffs& r) {
  Coeffs d = poly_trim(d_in);
  if (d.size() == 1) {
    if (d[0] == cplx(0.0)) throw Error("poly division by zero");
    q.resize(n.size());
    for (std::size_t i = 0; i < n.size(); ++i) q[i] = n[i] / d[0];
    r = {cplx(0.0)};
    return;
  }
  r = n;
  const std::size_t dd = d.size() - 1;
  if (r.size() <= dd) {
    q = {cplx(0.0)};
    return;
  }
  q.assign(r.size() - dd, cplx(0.0));
  for (std::size_t k = r.size(); k-- > dd + 1;) {
    const std::size_t i = k - 1;           // index of current leading term
    const cplx f = r[i] / d.back();
    q[i - dd] = f;
    for (std::size_t j = 0; j <= dd; ++j) r[i - dd + j] -= f * d[j];
  }
  r.resize(dd);
  if (r.empty()) r.push_back(cplx(0.0));
}

Coeffs poly_deflate(const Coeffs& p, cplx root) {
  if (p.size() <= 1) return {cplx(0.0)};
  Coeffs q(p.size() - 1);
  cplx carry = p.back();
  for (std::size_t k = p.size() - 1; k-- > 0;) {
    q[k] = carry;
    carry = p[k] + carry * root;
  }
  return q;
}

std::vector<cplx> poly_roots(const Coeffs& p_in, int max_iter, double tol) {
  Coeffs p = poly_trim(p_in);
  const std::size_t deg = p.size() - 1;
  if (deg == 0) return {};
  // Monic normalization.
  const cplx lead = p.back();
  for (auto& c : p) c /= lead;
  std::vector<cplx> w(deg);
  const cplx seed(0.4, 0.9);
  cplx pw = seed;
  for (std::size_t i = 0; i < deg; ++i) {
    w[i] = pw;
    pw *= seed;
  }
  for (int it = 0; it < max_iter; ++it) {
    double step = 0.0;
    for (std::size_t i = 0; i < deg; ++i) {
      cplx denom(1.0);
      for (std::size_t j = 0; j < deg; ++j)
        if (j != i) denom *= (w[i] - w[j]);
      if (denom == cplx(0.0)) denom = cplx(1e-30);
      const cplx delta = poly_eval(p, w[i]) / denom;
      w[i] -= delta;
      step = std::max(step, std::abs(delta) / (1.0 + std::abs(w[i])));
    }
    if (step < tol) break;
  }
  return w;
}

}  // namespace stepmap::series
