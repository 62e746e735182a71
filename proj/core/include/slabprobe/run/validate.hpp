#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "slabprobe/geometry/cavity.hpp"
#include "slabprobe/run/config.hpp"

namespace slabprobe::run {

struct CheckResult {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool pass = false;
};

struct ProbeIdentityErrors {
  double eikonal = 0.0;       ///< max ||grad phi|^2 - |grad psi|^2|
  double orthogonality = 0.0; ///< max |grad phi . grad psi|
  double gradient_fd = 0.0;   ///< max deviation of analytic gradients from central differences
  double transport = 0.0;     ///< max |(grad rho . grad + lap(rho)/2) a|
};

/// Probe identities at `count` random points of the slab 0 < x_n < 1 with
/// p = (0, ..., 0, 1.2), axis e_1, dimension n in {2, 3, 4}.
ProbeIdentityErrors probe_identity_errors(int n, int count, std::uint64_t seed);

struct ConvergenceLevel {
  double edge = 0.0;
  std::size_t nodes = 0;
  double l2_error = 0.0;
  double h1_error = 0.0;
};

/// P1 errors for the harmonic cubic Re((x1 + i x2)^3) with gamma == 1 and
/// exact Dirichlet data, one level per target edge.
std::vector<ConvergenceLevel> manufactured_convergence(const geometry::SlabGeometry& slab,
                                                       std::span<const double> edges);

/// Samples of the slab at least `min_distance` from p on a regular lattice.
std::vector<Vec2> residual_samples(const geometry::SlabGeometry& slab, const Vec2& p, double min_distance,
                                   double spacing);

/// The property suites behind `slabprobe validate`.
std::vector<CheckResult> run_property_suites(const RunConfig& config);

void print_checks(std::ostream& out, const std::vector<CheckResult>& checks);

}  // namespace slabprobe::run
