#include "slabprobe/probe/gamma_field.hpp"

#include <algorithm>
#include <functional>
#include <string>

#include <fmt/format.h>

#include "slabprobe/error.hpp"

namespace slabprobe::probe {

GammaField::GammaField(std::vector<GammaBump> bumps, double support_radius, double background)
    : bumps_(std::move(bumps)), support_radius_(support_radius), background_(background) {}

double GammaField::value(const Vec2& x) const {
  double g = background_;
  for (const auto& b : bumps_) {
    const double s2 = (x - b.center).squaredNorm() / (b.radius * b.radius);
    if (s2 < 1.0) {
      const double u = 1.0 - s2;
      g += b.amplitude * u * u * u;
    }
  }
  return g;
}

Vec2 GammaField::gradient(const Vec2& x) const {
  Vec2 grad = Vec2::Zero();
  for (const auto& b : bumps_) {
    const Vec2 d = x - b.center;
    const double r2 = b.radius * b.radius;
    const double s2 = d.squaredNorm() / r2;
    if (s2 < 1.0) {
      const double u = 1.0 - s2;
      grad += b.amplitude * (-6.0 * u * u / r2) * d;
    }
  }
  return grad;
}

double GammaField::laplacian(const Vec2& x) const {
  double lap = 0.0;
  for (const auto& b : bumps_) {
    const double r2 = b.radius * b.radius;
    const double rho2 = (x - b.center).squaredNorm();
    const double s2 = rho2 / r2;
    if (s2 < 1.0) {
      const double u = 1.0 - s2;
      lap += b.amplitude * (-12.0 * u * u / r2 + 24.0 * rho2 * u / (r2 * r2));
    }
  }
  return lap;
}

double GammaField::lower_bound() const {
  double low = background_;
  for (const auto& b : bumps_) low += std::min(b.amplitude, 0.0);
  return low;
}

GammaField GammaField::scaled(double c) const {
  std::vector<GammaBump> bumps = bumps_;
  for (auto& b : bumps) b.amplitude *= c;
  return GammaField(std::move(bumps), support_radius_, background_ * c);
}

void GammaField::validate() const {
  std::vector<std::string> issues;
  if (!(background_ > 0.0)) issues.push_back("gamma background must be positive");
  if (!(lower_bound() > 0.0)) issues.push_back("gamma bumps may drive the conductivity to zero or below");
  for (std::size_t i = 0; i < bumps_.size(); ++i) {
    const auto& b = bumps_[i];
    if (!(b.radius > 0.0)) issues.push_back(fmt::format("gamma bump {} needs a positive radius", i));
    if (b.center.norm() + b.radius > support_radius_) {
      issues.push_back(fmt::format("gamma bump {} leaves the declared ball B_R(0) with R = {}", i, support_radius_));
    }
  }
  if (!issues.empty()) throw ValidationError(std::move(issues));
}

std::uint64_t GammaField::hash() const {
  std::string buf;
  auto put = [&](double v) { buf.append(reinterpret_cast<const char*>(&v), sizeof v); };
  put(background_);
  put(support_radius_);
  for (const auto& b : bumps_) {
    put(b.center.x());
    put(b.center.y());
    put(b.radius);
    put(b.amplitude);
  }
  return static_cast<std::uint64_t>(std::hash<std::string>{}(buf));
}

}  // namespace slabprobe::probe
