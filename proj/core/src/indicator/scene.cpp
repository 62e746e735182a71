#include "slabprobe/indicator/scene.hpp"

namespace slabprobe::indicator {

Scene::Scene(SceneSpec spec, solver::SystemCache* cache) : spec_(std::move(spec)) {
  spec_.slab.validate();
  spec_.gamma.validate();
  if (spec_.cavity) {
    geometry::validate_cavity(*spec_.cavity, spec_.slab);
    polygon_ = geometry::polygonize_cavity(*spec_.cavity, spec_.cavity_segments);
  }
  const auto pair = geometry::build_nested_meshes(spec_.slab, polygon_.vertices, spec_.mesh);
  systems_ = solver::assemble_nested(pair, spec_.gamma, cache);
}

}  // namespace slabprobe::indicator
