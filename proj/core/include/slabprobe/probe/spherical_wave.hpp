#pragma once

#include <cmath>
#include <numbers>

#include <Eigen/Core>

#include "slabprobe/error.hpp"
#include "slabprobe/probe/log_complex.hpp"

namespace slabprobe::probe {

template <int N>
using VecN = Eigen::Matrix<double, N, 1>;

struct PhasePair {
  double phi = 0.0;
  double psi = 0.0;
};

template <int N>
struct PhaseGradients {
  VecN<N> grad_phi;
  VecN<N> grad_psi;
};

/// Distance from x - p to the axis line, i.e. |x' - p'| in coordinates whose
/// first direction is the axis.
template <int N>
double perpendicular_distance(const VecN<N>& x, const VecN<N>& p, const VecN<N>& axis) {
  const VecN<N> y = x - p;
  return (y - y.dot(axis) * axis).norm();
}

/// phi = log|x - p| and psi = angle between (x - p)/|x - p| and the axis.
template <int N>
PhasePair phase(const VecN<N>& x, const VecN<N>& p, const VecN<N>& axis) {
  const VecN<N> y = x - p;
  const double r = y.norm();
  if (r == 0.0) throw Error("singular point: x coincides with the probe center");
  const double along = y.dot(axis);
  const double across = (y - along * axis).norm();
  return {std::log(r), std::atan2(across, along)};
}

/// Analytic gradients of phi and psi. psi is not differentiable on the axis
/// line, where this throws.
template <int N>
PhaseGradients<N> phase_gradients(const VecN<N>& x, const VecN<N>& p, const VecN<N>& axis) {
  const VecN<N> y = x - p;
  const double r2 = y.squaredNorm();
  if (r2 == 0.0) throw Error("singular point: x coincides with the probe center");
  const double along = y.dot(axis);
  const double across = (y - along * axis).norm();
  if (across == 0.0) throw Error("psi is not differentiable on the probe axis");
  PhaseGradients<N> g;
  g.grad_phi = y / r2;
  g.grad_psi = -(r2 * axis - along * y) / (r2 * across);
  return g;
}

/// a = (2i|x' - p'|)^((2 - n)/2) on the principal branch; a == 1 when n == 2.
inline LogComplex amplitude_from_perpendicular(double perp, int n) {
  if (n == 2) return LogComplex::one();
  if (!(perp > 0.0)) throw Error("amplitude undefined on the probe axis (x' = p')");
  const double m = (2.0 - n) / 2.0;
  // log(2i r) = log(2r) + i pi/2 on the principal branch.
  return {m * std::log(2.0 * perp), m * std::numbers::pi / 2.0};
}

template <int N>
LogComplex amplitude(const VecN<N>& x, const VecN<N>& p, const VecN<N>& axis) {
  return amplitude_from_perpendicular(perpendicular_distance<N>(x, p, axis), N);
}

}  // namespace slabprobe::probe
