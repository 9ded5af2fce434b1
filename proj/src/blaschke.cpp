#include "stepmap/blaschke.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "stepmap/series.hpp"

namespace stepmap {

namespace {

constexpr double kUnimodularBand = 1e-9;   // |gamma| >= 1 - band terminates
constexpr double kSelfMapSlack = 1e-10;    // |gamma| > 1 + slack is an error

// Numerator/denominator polynomials of the Blaschke product rebuilt from
// Schur parameters: b_j = (gamma_j + z b_{j+1}) / (1 + conj(gamma_j) z b_{j+1}).
void schur_to_fraction(const std::vector<cplx>& params, series::Coeffs& num,
                       series::Coeffs& den) {
  num = {params.back()};
  den = {cplx(1.0)};
  for (std::size_t j = params.size() - 1; j-- > 0;) {
    series::Coeffs zn(num.size() + 1, cplx(0.0));
    std::copy(num.begin(), num.end(), zn.begin() + 1);
    series::Coeffs new_num = den;
    for (auto& c : new_num) c *= params[j];
    new_num.resize(zn.size(), cplx(0.0));
    for (std::size_t k = 0; k < zn.size(); ++k) new_num[k] += zn[k];
    series::Coeffs new_den = den;
    new_den.resize(zn.size(), cplx(0.0));
    for (std::size_t k = 0; k < zn.size(); ++k)
      new_den[k] += std::conj(params[j]) * zn[k];
    num = std::move(new_num);
    den = std::move(new_den);
  }
}

cplx moebius_product(const std::vector<cplx>& zeros, cplx z) {
  cplx acc(1.0);
  for (const cplx& a : zeros) {
    if (a == cplx(0.0)) {
      acc *= z;
    } else {
      acc *= (std::abs(a) / a) * (a - z) / (1.0 - std::conj(a) * z);
    }
  }
  return acc;
}

}  // namespace

cplx eval_blaschke(const FiniteBlaschke& b, cplx z) {
  return b.unimodular_factor * moebius_product(b.zeros, z);
}

AnalyticFunction FiniteBlaschke::as_handle() const {
  FiniteBlaschke copy = *this;
  return AnalyticFunction::from_evaluator(
      [copy](cplx z) { return eval_blaschke(copy, z); });
}

FiniteBlaschke FiniteBlaschke::from_schur(const std::vector<cplx>& params) {
  if (params.empty()) throw Error("from_schur: empty parameter list");
  for (std::size_t j = 0; j + 1 < params.size(); ++j)
    if (std::abs(params[j]) >= 1.0)
      throw NotASelfMap("interior Schur parameter has modulus >= 1");
  if (std::abs(std::abs(params.back()) - 1.0) > 1e-9)
    throw Error("from_schur: terminal parameter must be unimodular");

  FiniteBlaschke b;
  b.schur_params = params;
  b.schur_params.back() /= std::abs(b.schur_params.back());
  b.degree = static_cast<int>(params.size()) - 1;

  series::Coeffs num, den;
  schur_to_fraction(b.schur_params, num, den);
  if (b.degree > 0) {
    b.zeros = series::poly_roots(series::poly_trim(num));
    // Zeros of a Blaschke product are strictly inside the disk; clip fp
    // stragglers back in.
    for (cplx& zero : b.zeros)
      if (std::abs(zero) >= 1.0) zero *= (1.0 - 1e-14) / std::abs(zero);
  }
  // Unimodular factor from the fraction value at a point away from zeros.
  const cplx probes[] = {{0.3741, 0.1123}, {-0.212, 0.477}, {0.05, -0.613}};
  for (const cplx& probe : probes) {
    const cplx prod = moebius_product(b.zeros, probe);
    const cplx dval = series::poly_eval(den, probe);
    if (std::abs(prod) < 1e-6 || std::abs(dval) < 1e-9) continue;
    const cplx ratio = series::poly_eval(num, probe) / dval / prod;
    b.unimodular_factor = ratio / std::abs(ratio);
    return b;
  }
  throw Error("from_schur: could not normalize the unimodular factor");
}

FiniteBlaschke FiniteBlaschke::from_zeros(const std::vector<cplx>& zeros,
                                          cplx factor) {
  for (const cplx& a : zeros)
    if (std::abs(a) >= 1.0)
      throw Error("from_zeros: zero outside the open disk");
  if (std::abs(std::abs(factor) - 1.0) > 1e-9)
    throw Error("from_zeros: factor must be unimodular");
  FiniteBlaschke b;
  b.zeros = zeros;
  b.unimodular_factor = factor / std::abs(factor);
  b.degree = static_cast<int>(zeros.size());
  const SchurDecomposition d = schur_parameters(b.as_handle(), b.degree + 1);
  b.schur_params = d.params;
  if (!d.terminated ||
      static_cast<int>(d.params.size()) != b.degree + 1)
    throw Error("from_zeros: Schur recursion did not terminate at the degree");
  return b;
}

SchurDecomposition schur_parameters(const AnalyticFunction& a, int m) {
  if (m < 1) throw Error("schur_parameters: need m >= 1");
  const std::size_t len = static_cast<std::size_t>(m) + 16;
  series::Coeffs f = a.taylor(len);

  SchurDecomposition out;
  for (int j = 0; j < m; ++j) {
    const cplx gamma = f[0];
    const double mag = std::abs(gamma);
    if (mag > 1.0 + kSelfMapSlack)
      throw NotASelfMap("Schur parameter " + std::to_string(j) +
                        " has modulus " + std::to_string(mag));
    if (mag >= 1.0 - kUnimodularBand) {
      out.params.push_back(gamma / mag);
      out.terminated = true;
      return out;
    }
    out.params.push_back(gamma);
    // f <- (1/z) (f - gamma) / (1 - conj(gamma) f)
    series::Coeffs numer = f;
    numer[0] = cplx(0.0);
    series::Coeffs denom = f;
    for (auto& c : denom) c *= -std::conj(gamma);
    denom[0] += 1.0;
    const series::Coeffs quot =
        series::mul(numer, series::reciprocal(denom, f.size()), f.size());
    series::Coeffs next(f.size() - 1);
    for (std::size_t k = 0; k + 1 < f.size(); ++k) next[k] = quot[k + 1];
    if (next.empty()) break;
    f = std::move(next);
  }
  return out;
}

FiniteBlaschke blaschke_truncation(const AnalyticFunction& a, int m) {
  if (m < 1) throw Error("blaschke_truncation: need m >= 1");
  SchurDecomposition d = schur_parameters(a, m + 1);
  if (d.terminated) {
    // Already a finite Blaschke product of degree <= m.
    return FiniteBlaschke::from_schur(d.params);
  }
  std::vector<cplx> params(d.params.begin(),
                           d.params.begin() + m);
  const cplx gamma_m = d.params[static_cast<std::size_t>(m)];
  params.push_back(gamma_m == cplx(0.0) ? cplx(1.0)
                                        : gamma_m / std::abs(gamma_m));
  return FiniteBlaschke::from_schur(params);
}

DilatedHandle dilate_rho(const AnalyticFunction& b, double rho) {
  if (!(rho > 0.0 && rho < 1.0))
    throw InvalidRho("rho must lie in (0,1), got " + std::to_string(rho));
  DilatedHandle out;
  out.fn = b.scaled_argument(cplx(rho));
  // A constant unimodular input stays on the circle no matter the rho.
  const std::vector<cplx> head = b.taylor(8);
  bool constant = std::abs(std::abs(head[0]) - 1.0) < 1e-12;
  for (std::size_t k = 1; k < head.size() && constant; ++k)
    if (std::abs(head[k]) > 1e-10) constant = false;
  out.constant_unimodular = constant;
  return out;
}

FiniteBlaschke read_blaschke(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IOError("cannot open blaschke spec: " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("bad blaschke JSON: ") + e.what());
  }
  std::vector<cplx> zeros;
  for (const auto& z : doc.at("zeros"))
    zeros.emplace_back(z.at(0).get<double>(), z.at(1).get<double>());
  const auto& f = doc.at("factor");
  return FiniteBlaschke::from_zeros(
      zeros, cplx(f.at(0).get<double>(), f.at(1).get<double>()));
}

void write_blaschke(const FiniteBlaschke& b, const std::string& path) {
  nlohmann::ordered_json doc;
  doc["zeros"] = nlohmann::ordered_json::array();
  for (const cplx& z : b.zeros) doc["zeros"].push_back({z.real(), z.imag()});
  doc["factor"] = {b.unimodular_factor.real(), b.unimodular_factor.imag()};
  std::ofstream out(path);
  if (!out) throw IOError("cannot write blaschke spec: " + path);
  out << doc.dump(2) << "\n";
}

void write_schur_csv(const SchurDecomposition& d, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IOError("cannot write Schur CSV: " + path);
  out << "j,re,im\n";
  for (std::size_t j = 0; j < d.params.size(); ++j)
    out << j << "," << format_double(d.params[j].real()) << ","
        << format_double(d.params[j].imag()) << "\n";
}

}  // namespace stepmap
