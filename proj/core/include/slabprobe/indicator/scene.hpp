#pragma once

#include <optional>

#include "slabprobe/geometry/cavity.hpp"
#include "slabprobe/geometry/mesh.hpp"
#include "slabprobe/probe/gamma_field.hpp"
#include "slabprobe/solver/energy_gap.hpp"
#include "slabprobe/solver/system_cache.hpp"

namespace slabprobe::indicator {

struct SceneSpec {
  geometry::SlabGeometry slab;
  std::optional<geometry::CavityShape> cavity;
  probe::GammaField gamma;
  geometry::MeshOptions mesh;
  int cavity_segments = 128;
};

/// Meshes and factorizations for one slab, cavity and conductivity. Built
/// once; read-only afterwards and shared by all probes.
class Scene {
 public:
  explicit Scene(SceneSpec spec, solver::SystemCache* cache = nullptr);

  const SceneSpec& spec() const { return spec_; }
  const geometry::SlabGeometry& slab() const { return spec_.slab; }
  const probe::GammaField& gamma() const { return spec_.gamma; }
  const std::optional<geometry::CavityShape>& cavity() const { return spec_.cavity; }
  const geometry::Polygonization& polygon() const { return polygon_; }
  const solver::NestedSystems& systems() const { return systems_; }
  const geometry::NestedMeshPair& meshes() const { return systems_.pair; }
  double mesh_edge() const { return spec_.mesh.target_edge; }

 private:
  SceneSpec spec_;
  geometry::Polygonization polygon_;
  solver::NestedSystems systems_;
};

}  // namespace slabprobe::indicator
