#pragma once

#include <cmath>
#include <complex>

namespace slabprobe::probe {

/// Complex number held as (natural log of magnitude, phase in radians).
/// Keeps factors such as (t/|x-p|)^(1/h) representable across hundreds of
/// orders of magnitude until the final exponentiation.
struct LogComplex {
  double logmag = 0.0;
  double phase = 0.0;

  static LogComplex one() { return {}; }

  double magnitude() const { return std::exp(logmag); }
  std::complex<double> value() const { return std::polar(std::exp(logmag), phase); }

  friend LogComplex operator*(const LogComplex& a, const LogComplex& b) {
    return {a.logmag + b.logmag, a.phase + b.phase};
  }
  friend LogComplex operator/(const LogComplex& a, const LogComplex& b) {
    return {a.logmag - b.logmag, a.phase - b.phase};
  }
};

}  // namespace slabprobe::probe
