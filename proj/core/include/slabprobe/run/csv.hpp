#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "slabprobe/geometry/mesh.hpp"
#include "slabprobe/indicator/series.hpp"
#include "slabprobe/reconstruct/carve.hpp"
#include "slabprobe/reconstruct/sweep.hpp"
#include "slabprobe/solver/energy_gap.hpp"

namespace slabprobe::run {

/// Round-trip float formatting with 17 significant digits.
std::string format_double(double value);

void write_indicator_csv(std::ostream& out, std::string_view run_id, const std::vector<indicator::IndicatorSeries>& series);

struct SlopeRow {
  int probe_id = 0;
  double t = 0.0;
  indicator::SlopeFit fit;
  indicator::Classification classification;
};
void write_slope_csv(std::ostream& out, const std::vector<SlopeRow>& rows);

void write_distances_csv(std::ostream& out, const reconstruct::DistanceMap& map);

/// Mask as rows of C (carved) / P (possible) characters, top row (largest y) first.
void write_mask_grid(std::ostream& out, const reconstruct::RegionMask& mask);
/// JSON header for the mask grid: origin, spacing, shape, row order.
void write_mask_header(std::ostream& out, const reconstruct::RegionMask& mask);

void write_boundary_csv(std::ostream& out, const reconstruct::BoundaryEstimate& estimate);

/// Per-node complex field: x, y, re, im.
void write_solution_csv(std::ostream& out, const geometry::TriMesh& mesh, const solver::FieldSolution& field);

void write_energy_csv(std::ostream& out, const solver::EnergyGapResult& result);

}  // namespace slabprobe::run
