#ifndef STEPMAP_TESTS_ORACLES_HPP
#define STEPMAP_TESTS_ORACLES_HPP

// Independent oracles used by the unit and acceptance suites. These stay on
// their own computational routes (quadrature, FFT, closed forms) so they can
// check the library implementations rather than mirror them.

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "stepmap/boundary.hpp"
#include "stepmap/common.hpp"

namespace oracles {

using stepmap::cplx;
using stepmap::kPi;
using stepmap::kTwoPi;

// ---- adaptive Simpson quadrature -----------------------------------------

inline cplx simpson_slice(const std::function<cplx(double)>& f, double a,
                          double fa_r, double fa_i, double b, double fb_r,
                          double fb_i, cplx fm, double tol, cplx whole,
                          int depth) {
  const double m = 0.5 * (a + b);
  const cplx fa(fa_r, fa_i), fb(fb_r, fb_i);
  const cplx fl = f(0.5 * (a + m));
  const cplx fr = f(0.5 * (m + b));
  const cplx left = (m - a) / 6.0 * (fa + 4.0 * fl + fm);
  const cplx right = (b - m) / 6.0 * (fm + 4.0 * fr + fb);
  if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return simpson_slice(f, a, fa_r, fa_i, m, fm.real(), fm.imag(), fl,
                       tol / 2.0, left, depth - 1) +
         simpson_slice(f, m, fm.real(), fm.imag(), b, fb_r, fb_i, fr,
                       tol / 2.0, right, depth - 1);
}

inline cplx adaptive_simpson(const std::function<cplx(double)>& f, double a,
                             double b, double tol = 1e-12, int depth = 28) {
  const cplx fa = f(a);
  const cplx fb = f(b);
  const cplx fm = f(0.5 * (a + b));
  const cplx whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_slice(f, a, fa.real(), fa.imag(), b, fb.real(), fb.imag(),
                       fm, tol, whole, depth);
}

// Poisson kernel P(z, e^{it}) = (1 - |z|^2)/|e^{it} - z|^2.
inline double poisson_kernel(cplx z, double t) {
  const cplx e = std::polar(1.0, t);
  return (1.0 - std::norm(z)) / std::norm(e - z);
}

// Quadrature oracle for the Poisson extension: integrates the kernel over
// each arc separately (the integrand is smooth per arc).
inline cplx poisson_quadrature(const stepmap::StepFunction& sf, cplx z,
                               double tol = 1e-12) {
  cplx acc(0.0);
  const auto& arcs = sf.arcs();
  for (std::size_t j = 0; j < arcs.size(); ++j) {
    const double a = arcs[j].theta;
    const double b = a + sf.arc_length(j);
    const cplx arc_integral = adaptive_simpson(
        [&](double t) { return cplx(poisson_kernel(z, t), 0.0); }, a, b, tol);
    acc += arcs[j].value * arc_integral / kTwoPi;
  }
  return acc;
}

// ---- radix-2 FFT -----------------------------------------------------------

// In-place iterative FFT, X_k = sum_s x_s e^{-2 pi i k s / n}; n = 2^m.
inline void fft(std::vector<cplx>& x) {
  const std::size_t n = x.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(x[i], x[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = -kTwoPi / static_cast<double>(len);
    const cplx wl = std::polar(1.0, ang);
    for (std::size_t i = 0; i < n; i += len) {
      cplx w(1.0);
      for (std::size_t j = 0; j < len / 2; ++j) {
        const cplx u = x[i + j];
        const cplx v = x[i + j + len / 2] * w;
        x[i + j] = u + v;
        x[i + j + len / 2] = u - v;
        w *= wl;
      }
    }
  }
}

// FFT-based Fourier coefficients of the harmonic extension: sample f on the
// circle |z| = r (alias-free thanks to geometric decay), unalias by r^|k|.
inline std::vector<cplx> fft_coefficients(
    const std::function<cplx(cplx)>& f, double r, int kmax,
    std::size_t samples = std::size_t(1) << 14) {
  std::vector<cplx> x(samples);
  for (std::size_t s = 0; s < samples; ++s)
    x[s] = f(std::polar(r, kTwoPi * static_cast<double>(s) / static_cast<double>(samples)));
  fft(x);
  std::vector<cplx> out(static_cast<std::size_t>(2 * kmax + 1));
  for (int k = -kmax; k <= kmax; ++k) {
    const std::size_t idx =
        k >= 0 ? static_cast<std::size_t>(k)
               : samples - static_cast<std::size_t>(-k);
    out[static_cast<std::size_t>(k + kmax)] =
        x[idx] / static_cast<double>(samples) / std::pow(r, std::abs(k));
  }
  return out;
}

// ---- random step functions --------------------------------------------------

inline stepmap::StepFunction random_step_function(std::mt19937& rng, int n,
                                                  double value_scale = 1.0) {
  std::uniform_real_distribution<double> angle(0.0, kTwoPi);
  std::uniform_real_distribution<double> coord(-value_scale, value_scale);
  while (true) {
    std::vector<double> thetas(static_cast<std::size_t>(n));
    for (auto& t : thetas) t = angle(rng);
    std::sort(thetas.begin(), thetas.end());
    double min_gap = kTwoPi + thetas.front() - thetas.back();
    for (std::size_t j = 1; j < thetas.size(); ++j)
      min_gap = std::min(min_gap, thetas[j] - thetas[j - 1]);
    if (min_gap < 0.02 * kTwoPi / n) continue;
    std::vector<std::pair<double, cplx>> raw;
    cplx prev(1e9, 1e9);
    for (const double t : thetas) {
      cplx v(coord(rng), coord(rng));
      if (std::abs(v - prev) < 1e-6) v += cplx(0.1, 0.1);
      raw.emplace_back(t, v);
      prev = v;
    }
    const auto sf = stepmap::validate_step_function(raw);
    if (sf.step_count() == n) return sf;
  }
}

// ---- closed forms for the shear targets ------------------------------------

inline cplx koebe(cplx z) { return z / ((1.0 - z) * (1.0 - z)); }

inline cplx harmonic_koebe_h(cplx z) {
  const cplx d = 1.0 - z;
  return (z - 0.5 * z * z + z * z * z / 6.0) / (d * d * d);
}

inline cplx harmonic_koebe_g(cplx z) {
  const cplx d = 1.0 - z;
  return (0.5 * z * z + z * z * z / 6.0) / (d * d * d);
}

inline double binomial(int n, int k) {
  double acc = 1.0;
  for (int i = 1; i <= k; ++i)
    acc = acc * static_cast<double>(n - k + i) / static_cast<double>(i);
  return acc;
}

}  // namespace oracles

#endif  // STEPMAP_TESTS_ORACLES_HPP
