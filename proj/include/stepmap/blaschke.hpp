#ifndef STEPMAP_BLASCHKE_HPP
#define STEPMAP_BLASCHKE_HPP

#include <string>
#include <vector>

#include "stepmap/analytic.hpp"
#include "stepmap/common.hpp"

namespace stepmap {

struct NotASelfMap : Error {
  using Error::Error;
};
struct InvalidRho : Error {
  using Error::Error;
};

// Finite Blaschke product held in two equivalent forms: Schur parameters
// (gamma_0..gamma_{m-1} inside the disk, terminal gamma_m unimodular) and
// zeros plus a unimodular factor. The Moebius factor for a zero a != 0 is
// (|a|/a) * (a - z)/(1 - conj(a) z); the factor for a = 0 is z.
struct FiniteBlaschke {
  std::vector<cplx> schur_params;  // size degree + 1, last entry unimodular
  std::vector<cplx> zeros;         // all |zero| < 1
  cplx unimodular_factor{1.0};
  int degree = 0;

  static FiniteBlaschke from_schur(const std::vector<cplx>& params);
  static FiniteBlaschke from_zeros(const std::vector<cplx>& zeros,
                                   cplx factor);

  AnalyticFunction as_handle() const;
};

struct SchurDecomposition {
  std::vector<cplx> params;
  bool terminated = false;  // a unimodular parameter ended the recursion
};

// Product of Moebius factors times the unimodular factor.
cplx eval_blaschke(const FiniteBlaschke& b, cplx z);

// First m Schur parameters of an analytic self-map of the disk via the
// recursion f_{j+1} = (1/z) (f_j - gamma_j)/(1 - conj(gamma_j) f_j),
// gamma_j = f_j(0). Stops early when a parameter is unimodular.
SchurDecomposition schur_parameters(const AnalyticFunction& a, int m);

// Degree-m Schur truncation: replaces the m-th Schur remainder with the
// unimodular constant preserving gamma_m's phase (1 if gamma_m = 0). The
// result matches a's first m Taylor coefficients.
FiniteBlaschke blaschke_truncation(const AnalyticFunction& a, int m);

struct DilatedHandle {
  AnalyticFunction fn;
  bool constant_unimodular = false;
};

// The map z -> b(rho z), 0 < rho < 1; flags constant unimodular inputs,
// which dilation cannot pull inside the disk.
DilatedHandle dilate_rho(const AnalyticFunction& b, double rho);

// Blaschke spec file: {"zeros": [[re,im],...], "factor": [re,im]}.
FiniteBlaschke read_blaschke(const std::string& path);
void write_blaschke(const FiniteBlaschke& b, const std::string& path);

// CSV rows (j, re, im) of Schur parameters.
void write_schur_csv(const SchurDecomposition& d, const std::string& path);

}  // namespace stepmap

#endif  // STEPMAP_BLASCHKE_HPP
