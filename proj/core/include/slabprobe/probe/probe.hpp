#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "slabprobe/geometry/cavity.hpp"
#include "slabprobe/geometry/mesh.hpp"
#include "slabprobe/geometry/vec.hpp"
#include "slabprobe/probe/gamma_field.hpp"
#include "slabprobe/probe/log_complex.hpp"

namespace slabprobe::probe {

/// Semiclassical grid. In strict mode 1/h = k + n + delta_S + 1/2 for each k;
/// otherwise the 1/h values are user supplied and k_values is empty.
struct HGrid {
  int n = 2;
  double delta_S = 0.5;
  std::vector<int> k_values;
  std::vector<double> inv_h;

  std::size_t size() const { return inv_h.size(); }
  double h(std::size_t i) const { return 1.0 / inv_h[i]; }
  bool strict() const { return !k_values.empty(); }
};

HGrid h_grid(int n, double delta_S, int k_max);
HGrid h_grid(int n, double delta_S, int k_min, int k_max);
/// Non-strict grid from explicit 1/h values (sorted ascending).
HGrid free_h_grid(std::vector<double> inv_h);
/// True when h = (k + n + delta_S + 1/2)^-1 for some natural k.
bool on_h_grid(double h, int n, double delta_S);

struct ProbeParams {
  Vec2 p{0.0, 1.2};
  double t = 0.4;
  double h = 0.1;
  double delta = 0.04;
  Vec2 axis{1.0, 0.0};
};

/// Throws ValidationError when p touches the slab strip, the axis line meets
/// the truncated domain, or t, h, delta are out of range.
void validate_probe(const ProbeParams& params, const geometry::SlabGeometry& slab);

struct ProbeOptions {
  double overflow_cap = 700.0;  ///< bound on |log t - log|x-p|| / h
};

struct ProbeValue {
  LogComplex value;
  bool clamped = false;
};

/// Leading-order complex spherical wave
///   gamma^(-1/2) (t/|x-p|)^(1/h) exp(-i psi/h) a,   n = 2.
ProbeValue probe_value(const Vec2& x, const ProbeParams& params, const GammaField& gamma,
                       const ProbeOptions& options = {});

/// 1 on B_{t+delta/2}(p), 0 outside B_{t+delta}(p), C-infinity in between.
double cutoff(const Vec2& x, const ProbeParams& params);

enum class DataMode { Full, Localized, Remainder };

/// Nodal Dirichlet data on a mesh. Entries of non-Dirichlet nodes are zero.
struct BoundaryData {
  std::vector<std::complex<double>> values;
  double lateral_leak = 0.0;   ///< max |data| over LATERAL nodes
  std::size_t clamped = 0;     ///< nodes hit by the overflow cap
};

BoundaryData boundary_data(const geometry::TriMesh& mesh, const geometry::SlabGeometry& slab,
                           const ProbeParams& params, const GammaField& gamma, DataMode mode,
                           const ProbeOptions& options = {});

/// h^2 |L_gamma v| / |v| at x, L_gamma = div(gamma grad .), with derivatives
/// of v from fourth-order central differences of spacing `step`.
double residual_at(const Vec2& x, const ProbeParams& params, const GammaField& gamma,
                   double step = 0.01);

/// Maximum of residual_at over the samples.
double residual_diagnostic(const ProbeParams& params, const GammaField& gamma,
                           std::span<const Vec2> samples, double step = 0.01);

}  // namespace slabprobe::probe
