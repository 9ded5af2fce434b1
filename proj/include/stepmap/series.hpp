#ifndef STEPMAP_SERIES_HPP
#define STEPMAP_SERIES_HPP

#include <vector>

#include "stepmap/common.hpp"

// Power-series and polynomial arithmetic on coefficient vectors in
// ascending order. Series operations truncate to a requested length;
// polynomial operations keep exact degrees (with relative trimming).

namespace stepmap::series {

using Coeffs = std::vector<cplx>;

// Truncated Cauchy product.
Coeffs mul(const Coeffs& a, const Coeffs& b, std::size_t len);

// Reciprocal series 1/a with a[0] != 0.
Coeffs reciprocal(const Coeffs& a, std::size_t len);

// Termwise derivative (length shrinks by one).
Coeffs derivative(const Coeffs& a);

// Antiderivative with zero constant term.
Coeffs integrate(const Coeffs& a);

// Coefficients of a(s*z).
Coeffs scale_argument(const Coeffs& a, cplx s);

cplx horner(const Coeffs& a, cplx z);

// --- polynomial helpers (same coefficient layout) ---

// Drop trailing coefficients below rel_tol * max|coeff|.
Coeffs poly_trim(Coeffs p, double rel_tol = 1e-12);

cplx poly_eval(const Coeffs& p, cplx z);

Coeffs poly_derivative(const Coeffs& p);

Coeffs poly_mul(const Coeffs& a, const Coeffs& b);

// Quotient and remainder of n / d, deg r < deg d. d must be nonzero.
void poly_divmod(const Coeffs& n, const Coeffs& d, Coeffs& q, Coeffs& r);

// Synthetic division of p by (z - root); remainder discarded.
Coeffs poly_deflate(const Coeffs& p, cplx root);

// All roots by the Durand-Kerner iteration. Deterministic; intended for
// well-conditioned degrees up to ~64.
std::vector<cplx> poly_roots(const Coeffs& p, int max_iter = 600,
                             double tol = 1e-14);

}  // namespace stepmap::series

#endif  // STEPMAP_SERIES_HPP
