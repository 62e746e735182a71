#pragma once

#include "slabprobe/probe/probe.hpp"
#include "slabprobe/solver/known_field.hpp"

namespace slabprobe::probe {

/// The leading-order probe as a closed-form field with analytic gradient and
/// conductivity residual div(gamma grad v) = -(lap(gamma)/2 - |grad gamma|^2/(4 gamma)) v.
class ProbeField final : public solver::KnownField {
 public:
  ProbeField(ProbeParams params, GammaField gamma, ProbeOptions options = {});

  solver::FieldSample sample(const Vec2& x) const override;
  std::complex<double> residual(const Vec2& x) const override;
  bool residual_free(const Vec2& c, double r) const override;

  const ProbeParams& params() const { return params_; }

 private:
  ProbeParams params_;
  GammaField gamma_;
  ProbeOptions options_;
};

}  // namespace slabprobe::probe
