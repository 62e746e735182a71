#pragma once

#include <complex>
#include <memory>
#include <span>

#include "slabprobe/geometry/mesh.hpp"
#include "slabprobe/solver/known_field.hpp"
#include "slabprobe/solver/stiffness.hpp"
#include "slabprobe/solver/system_cache.hpp"

namespace slabprobe::solver {

struct EnergyGapResult {
  double E = 0.0;          ///< e_full - e_holed
  double e_full = 0.0;     ///< energy of the cavity-free solution v
  double e_holed = 0.0;    ///< energy of the solution u with the cavity
  double term_D = 0.0;     ///< energy of v over the cavity triangles
  double term_diff = 0.0;  ///< energy of u - v outside the cavity
  double identity_residual = 0.0;
};

/// Factorized operators for both meshes of a nested pair.
struct NestedSystems {
  geometry::NestedMeshPair pair;
  probe::GammaField gamma;
  std::shared_ptr<const StiffnessSystem> full;
  std::shared_ptr<const StiffnessSystem> holed;
};

/// Throws when the holed mesh is not a prefix of the full mesh. With a cache,
/// factorizations are shared across scenes with identical mesh and gamma.
NestedSystems assemble_nested(const geometry::NestedMeshPair& pair, const probe::GammaField& gamma,
                              SystemCache* cache = nullptr);

/// Optional outputs of energy_gap for export.
struct EnergyGapFields {
  FieldSolution v;  ///< full-mesh solution without cavity
  FieldSolution u;  ///< holed-mesh solution with cavity
};

/// Energy gap for Dirichlet data given per node of the full mesh. The holed
/// solution is computed as u = v + w with w the cavity correction, so that
/// E = term_D - 2 <w, v> - |w|^2 is formed without cancelling e_full against
/// e_holed.
EnergyGapResult energy_gap(const NestedSystems& systems, std::span<const std::complex<double>> data,
                           EnergyGapFields* fields = nullptr);

/// Energy gap with the cavity-free solution split as v = V + c: V is known in
/// closed form and only the correction c (matching the data on the outer
/// boundary) is discretized. The cavity correction w is driven by the flux of
/// V through the cavity boundary. Use this when V is large near the outer
/// boundary but moderate near the cavity; a plain solve would bury the gap
/// under discretization error of the large boundary layer.
EnergyGapResult energy_gap(const NestedSystems& systems, std::span<const std::complex<double>> data,
                           const KnownField& background, EnergyGapFields* fields = nullptr);

}  // namespace slabprobe::solver
