#ifndef STEPMAP_COMMON_HPP
#define STEPMAP_COMMON_HPP

#include <charconv>
#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace stepmap {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

inline constexpr const char* kToolName = "stepmap";
inline constexpr const char* kToolVersion = "0.1.0";

// Base for all domain errors; the CLI maps these to exit code 2.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// File and path failures; the CLI maps these to exit code 1.
struct IOError : Error {
  using Error::Error;
};

// Reduce an angle to the canonical range [0, 2*pi).
inline double wrap_angle(double theta) {
  double t = std::fmod(theta, kTwoPi);
  if (t < 0.0) t += kTwoPi;
  if (t >= kTwoPi) t = 0.0;
  return t;
}

// Positive angular gap from a to b, in (0, 2*pi]; 0 maps to 2*pi.
inline double ccw_gap(double a, double b) {
  double d = wrap_angle(b - a);
  return d == 0.0 ? kTwoPi : d;
}

// Shortest-round-trip decimal form of a double, for deterministic CSV output.
inline std::string format_double(double x) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

}  // namespace stepmap

#endif  // STEPMAP_COMMON_HPP
