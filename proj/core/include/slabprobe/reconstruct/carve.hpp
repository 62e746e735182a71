#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "slabprobe/geometry/cavity.hpp"
#include "slabprobe/reconstruct/sweep.hpp"

namespace slabprobe::reconstruct {

/// Cell-centered grid over the truncated slab. Cell (i, j) has center
/// origin + ((i + 1/2) dx, (j + 1/2) dy); flags are stored row by row (j major).
struct RegionMask {
  Vec2 origin{0.0, 0.0};
  double dx = 0.0;
  double dy = 0.0;
  int nx = 0;
  int ny = 0;
  std::vector<std::uint8_t> carved;  ///< 1 = CARVED, 0 = POSSIBLE

  bool at(int i, int j) const { return carved[static_cast<std::size_t>(j) * nx + i] != 0; }
  Vec2 center(int i, int j) const { return origin + Vec2((i + 0.5) * dx, (j + 0.5) * dy); }
  std::size_t carved_count() const;
  double carved_area() const { return static_cast<double>(carved_count()) * dx * dy; }
};

struct Ball {
  Vec2 center;
  double radius = 0.0;
};

/// Marks cells whose center lies strictly inside some ball.
RegionMask carve_balls(const geometry::SlabGeometry& slab, std::span<const Ball> balls, double resolution);

/// Carves B_{d_hat(p) - margin}(p) for every OK record. Throws "nothing to carve"
/// when no record is OK.
RegionMask carve(const geometry::SlabGeometry& slab, const DistanceMap& map, double resolution, double margin);

struct Polyline {
  std::vector<Vec2> points;
  bool closed = false;
};

struct BoundaryEstimate {
  std::vector<Polyline> curves;
};

/// Marching squares between cell centers; vertices sit at midpoints of grid
/// edges whose end cells differ. Open curves end on the grid border.
BoundaryEstimate extract_boundary(const RegionMask& mask);

struct EvaluationMetrics {
  double hausdorff = 0.0;             ///< max distance from probed-side vertices to the true boundary
  std::size_t vertices_evaluated = 0;
  double coverage = 0.0;              ///< fraction of boundary samples within `band` of the estimate
  double band = 0.0;
};

/// One-sided comparison with the true cavity. A vertex is on the probed side
/// when it lies over the cavity's horizontal extent, on the probes' side of
/// the cavity boundary.
EvaluationMetrics evaluate(const BoundaryEstimate& estimate, const geometry::CavityShape& truth,
                           std::span<const Vec2> probe_points, double band);

}  // namespace slabprobe::reconstruct
