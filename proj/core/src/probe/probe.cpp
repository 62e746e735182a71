#include "slabprobe/probe/probe.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <fmt/format.h>

#include "slabprobe/error.hpp"
#include "slabprobe/probe/spherical_wave.hpp"

namespace slabprobe::probe {

using geometry::BoundaryTag;

HGrid h_grid(int n, double delta_S, int k_max) { return h_grid(n, delta_S, 0, k_max); }

HGrid h_grid(int n, double delta_S, int k_min, int k_max) {
  std::vector<std::string> issues;
  if (n < 2) issues.push_back("h-grid dimension must be at least 2");
  if (!(delta_S > 0.0)) issues.push_back("delta_S must be positive");
  if (k_min < 0 || k_max < k_min) issues.push_back(fmt::format("invalid k range [{}, {}]", k_min, k_max));
  if (!issues.empty()) throw ValidationError(std::move(issues));

  HGrid grid;
  grid.n = n;
  grid.delta_S = delta_S;
  for (int k = k_min; k <= k_max; ++k) {
    grid.k_values.push_back(k);
    grid.inv_h.push_back(k + n + delta_S + 0.5);
  }
  return grid;
}

HGrid free_h_grid(std::vector<double> inv_h) {
  std::sort(inv_h.begin(), inv_h.end());
  if (inv_h.empty()) throw ValidationError("h-grid is empty");
  for (std::size_t i = 0; i < inv_h.size(); ++i) {
    if (!(inv_h[i] > 1.0)) throw ValidationError(fmt::format("1/h = {} is not above 1", inv_h[i]));
    if (i > 0 && inv_h[i] == inv_h[i - 1]) throw ValidationError("duplicate 1/h value in h-grid");
  }
  HGrid grid;
  grid.inv_h = std::move(inv_h);
  return grid;
}

bool on_h_grid(double h, int n, double delta_S) {
  if (!(h > 0.0)) return false;
  const double k = 1.0 / h - n - delta_S - 0.5;
  const double nearest = std::round(k);
  return nearest >= 0.0 && std::abs(k - nearest) <= 1e-9 * (1.0 / h);
}

void validate_probe(const ProbeParams& params, const geometry::SlabGeometry& slab) {
  std::vector<std::string> issues;
  if (!(slab.strip_distance(params.p) > 0.0)) issues.push_back("probe center must lie strictly outside the slab strip");
  if (!(params.t > 0.0)) issues.push_back("front radius t must be positive");
  if (!(params.h > 0.0 && params.h < 1.0)) issues.push_back("h must lie in (0, 1)");
  if (!(params.delta > 0.0)) issues.push_back("cutoff width delta must be positive");
  if (std::abs(params.axis.norm() - 1.0) > 1e-12) issues.push_back("probe axis must be a unit vector");

  const double far_face = std::max(std::abs(params.p.y() - slab.d1), std::abs(params.p.y() - slab.d2));
  if (!(params.t + params.delta < far_face + slab.thickness())) {
    issues.push_back("t + delta exceeds the slab reach of the probe");
  }

  // psi has a kink on the whole axis line; it must not meet the closed domain.
  const double ay = params.axis.y();
  if (ay != 0.0) {
    const double s1 = (slab.d1 - params.p.y()) / ay;
    const double s2 = (slab.d2 - params.p.y()) / ay;
    const double x1 = params.p.x() + s1 * params.axis.x();
    const double x2 = params.p.x() + s2 * params.axis.x();
    if (std::max(x1, x2) >= -slab.halfwidth && std::min(x1, x2) <= slab.halfwidth) {
      issues.push_back("probe axis line crosses the truncated slab; use an axis parallel to the slab faces");
    }
  }
  if (!issues.empty()) throw ValidationError(std::move(issues));
}

ProbeValue probe_value(const Vec2& x, const ProbeParams& params, const GammaField& gamma,
                       const ProbeOptions& options) {
  const PhasePair ph = phase<2>(x, params.p, params.axis);
  const double inv_h = 1.0 / params.h;
  double radial = (std::log(params.t) - ph.phi) * inv_h;
  ProbeValue out;
  if (std::abs(radial) > options.overflow_cap) {
    radial = std::copysign(options.overflow_cap, radial);
    out.clamped = true;
  }
  const double g = gamma.is_constant() ? gamma.background() : gamma.value(x);
  out.value.logmag = radial - 0.5 * std::log(g);
  out.value.phase = -ph.psi * inv_h;
  return out;
}

namespace {

// C-infinity step: 0 for s <= 0, 1 for s >= 1.
double smooth_step(double s) {
  if (s <= 0.0) return 0.0;
  if (s >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / s);
  const double b = std::exp(-1.0 / (1.0 - s));
  return a / (a + b);
}

}  // namespace

double cutoff(const Vec2& x, const ProbeParams& params) {
  const double r = (x - params.p).norm();
  const double inner = params.t + 0.5 * params.delta;
  return 1.0 - smooth_step((r - inner) / (0.5 * params.delta));
}

BoundaryData boundary_data(const geometry::TriMesh& mesh, const geometry::SlabGeometry& slab,
                           const ProbeParams& params, const GammaField& gamma, DataMode mode,
                           const ProbeOptions& options) {
  if (mode == DataMode::Localized) {
    const double reach = params.t + params.delta;
    const double dy = std::max({slab.d1 - params.p.y(), params.p.y() - slab.d2, 0.0});
    for (double side : {-slab.halfwidth, slab.halfwidth}) {
      if (std::hypot(params.p.x() - side, dy) <= reach) {
        throw ValidationError("cutoff support reaches the lateral truncation; increase halfwidth");
      }
    }
  }

  const std::size_t nv = mesh.vertex_count();
  std::vector<std::int8_t> tag(nv, -1);
  for (const auto& e : mesh.boundary_edges) {
    if (e.tag == BoundaryTag::Cavity) continue;
    for (int v : {e.a, e.b}) {
      // Corner nodes belong to a slab face and a lateral face; keep LATERAL so
      // that the leak measure sees them.
      if (tag[v] != static_cast<std::int8_t>(BoundaryTag::Lateral)) tag[v] = static_cast<std::int8_t>(e.tag);
    }
  }

  BoundaryData out;
  out.values.assign(nv, {0.0, 0.0});
  for (std::size_t v = 0; v < nv; ++v) {
    if (tag[v] < 0) continue;
    const Vec2& x = mesh.vertices[v];
    double weight = 1.0;
    if (mode == DataMode::Localized) weight = cutoff(x, params);
    if (mode == DataMode::Remainder) weight = 1.0 - cutoff(x, params);
    if (weight == 0.0) continue;
    const ProbeValue pv = probe_value(x, params, gamma, options);
    if (pv.clamped) ++out.clamped;
    const std::complex<double> value = weight * pv.value.value();
    out.values[v] = value;
    if (tag[v] == static_cast<std::int8_t>(BoundaryTag::Lateral)) {
      out.lateral_leak = std::max(out.lateral_leak, std::abs(value));
    }
  }
  return out;
}

double residual_at(const Vec2& x, const ProbeParams& params, const GammaField& gamma, double step) {
  ProbeOptions unclamped;
  unclamped.overflow_cap = std::numeric_limits<double>::infinity();
  const LogComplex center = probe_value(x, params, gamma, unclamped).value;

  // Ratios v(x + offset)/v(x) stay O(1) even where |v| itself is huge or tiny.
  auto ratio = [&](double dx, double dy) {
    const LogComplex shifted = probe_value(x + Vec2(dx, dy), params, gamma, unclamped).value;
    return (shifted / center).value();
  };

  std::complex<double> lap{0.0, 0.0};
  std::complex<double> grad[2];
  for (int axis = 0; axis < 2; ++axis) {
    auto at = [&](int k) { return axis == 0 ? ratio(k * step, 0.0) : ratio(0.0, k * step); };
    const std::complex<double> m2 = at(-2), m1 = at(-1), p1 = at(1), p2 = at(2);
    lap += (-m2 + 16.0 * m1 - 30.0 + 16.0 * p1 - p2) / (12.0 * step * step);
    grad[axis] = (m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * step);
  }

  std::complex<double> op = lap;
  if (!gamma.is_constant()) {
    const Vec2 dg = gamma.gradient(x);
    op = gamma.value(x) * lap + dg.x() * grad[0] + dg.y() * grad[1];
  } else {
    op *= gamma.background();
  }
  return params.h * params.h * std::abs(op);
}

double residual_diagnostic(const ProbeParams& params, const GammaField& gamma,
                           std::span<const Vec2> samples, double step) {
  double worst = 0.0;
  for (const Vec2& x : samples) worst = std::max(worst, residual_at(x, params, gamma, step));
  return worst;
}

}  // namespace slabprobe::probe
