#include "slabprobe/probe/probe_field.hpp"

#include "slabprobe/probe/spherical_wave.hpp"

namespace slabprobe::probe {

ProbeField::ProbeField(ProbeParams params, GammaField gamma, ProbeOptions options)
    : params_(std::move(params)), gamma_(std::move(gamma)), options_(options) {}

solver::FieldSample ProbeField::sample(const Vec2& x) const {
  const std::complex<double> v = probe_value(x, params_, gamma_, options_).value.value();
  const PhaseGradients<2> g = phase_gradients<2>(x, params_.p, params_.axis);
  const double inv_h = 1.0 / params_.h;
  std::complex<double> fx(-g.grad_phi.x() * inv_h, -g.grad_psi.x() * inv_h);
  std::complex<double> fy(-g.grad_phi.y() * inv_h, -g.grad_psi.y() * inv_h);
  if (!gamma_.is_constant()) {
    const Vec2 dg = gamma_.gradient(x) / (2.0 * gamma_.value(x));
    fx -= dg.x();
    fy -= dg.y();
  }
  return {v, v * fx, v * fy};
}

std::complex<double> ProbeField::residual(const Vec2& x) const {
  if (gamma_.is_constant()) return {};
  const double g = gamma_.value(x);
  const double factor = 0.5 * gamma_.laplacian(x) - gamma_.gradient(x).squaredNorm() / (4.0 * g);
  if (factor == 0.0) return {};
  return -factor * probe_value(x, params_, gamma_, options_).value.value();
}

bool ProbeField::residual_free(const Vec2& c, double r) const {
  for (const auto& b : gamma_.bumps()) {
    if ((c - b.center).norm() < r + b.radius) return false;
  }
  return true;
}

}  // namespace slabprobe::probe
