#pragma once

#include <complex>

#include "slabprobe/geometry/vec.hpp"

namespace slabprobe::solver {

struct FieldSample {
  std::complex<double> value;
  std::complex<double> dx;
  std::complex<double> dy;
};

/// A field V known in closed form. The energy gap treats V as the bulk of the
/// cavity-free solution and discretizes only the corrections around it.
class KnownField {
 public:
  virtual ~KnownField() = default;

  virtual FieldSample sample(const Vec2& x) const = 0;

  /// div(gamma grad V) at x; zero for exact solutions.
  virtual std::complex<double> residual(const Vec2& /*x*/) const { return {}; }

  /// True when residual() vanishes on the closed disc B_r(c).
  virtual bool residual_free(const Vec2& /*c*/, double /*r*/) const { return true; }
};

}  // namespace slabprobe::solver
