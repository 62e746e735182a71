#pragma once

#include <cstdint>
#include <vector>

#include "slabprobe/geometry/cavity.hpp"
#include "slabprobe/geometry/vec.hpp"

namespace slabprobe::probe {

/// Radial bump amplitude * (1 - s^2)^3 with s = |x - center| / radius; C^2 at s = 1.
struct GammaBump {
  Vec2 center{0.0, 0.5};
  double radius = 0.1;
  double amplitude = 0.0;
};

/// Conductivity gamma(x) = background + sum of bumps. The default field is
/// gamma == 1.
class GammaField {
 public:
  GammaField() = default;
  explicit GammaField(std::vector<GammaBump> bumps, double support_radius = 0.0, double background = 1.0);

  static GammaField constant(double value) { return GammaField({}, 0.0, value); }

  double value(const Vec2& x) const;
  Vec2 gradient(const Vec2& x) const;
  double laplacian(const Vec2& x) const;

  /// Lower bound of gamma over the plane.
  double lower_bound() const;

  /// Same field multiplied by c > 0.
  GammaField scaled(double c) const;

  bool is_constant() const { return bumps_.empty(); }
  double background() const { return background_; }
  double support_radius() const { return support_radius_; }
  const std::vector<GammaBump>& bumps() const { return bumps_; }

  /// Throws ValidationError when gamma is not bounded away from zero or a
  /// bump leaves the declared ball B_R(0).
  void validate() const;

  std::uint64_t hash() const;

 private:
  std::vector<GammaBump> bumps_;
  double support_radius_ = 0.0;
  double background_ = 1.0;
};

}  // namespace slabprobe::probe
