#pragma once

#include "slabprobe/indicator/scene.hpp"

namespace slabprobe::testing {

inline indicator::SceneSpec disc_scene(double halfwidth = 2.66, double edge = 0.05) {
  indicator::SceneSpec spec;
  spec.slab = {0.0, 1.0, halfwidth};
  spec.cavity = geometry::Disc{{0.0, 0.5}, 0.2};
  spec.mesh.target_edge = edge;
  return spec;
}

inline indicator::SceneSpec empty_scene(double halfwidth = 2.66, double edge = 0.05) {
  auto spec = disc_scene(halfwidth, edge);
  spec.cavity.reset();
  return spec;
}

}  // namespace slabprobe::testing
