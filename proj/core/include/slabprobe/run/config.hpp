#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "slabprobe/geometry/cavity.hpp"
#include "slabprobe/geometry/mesh.hpp"
#include "slabprobe/indicator/scene.hpp"
#include "slabprobe/indicator/series.hpp"
#include "slabprobe/probe/gamma_field.hpp"
#include "slabprobe/reconstruct/sweep.hpp"

namespace slabprobe::run {

/// Fully resolved run configuration (defaults filled, cross-checked).
struct RunConfig {
  std::string run_id = "run";
  geometry::SlabGeometry slab;
  bool halfwidth_auto = true;
  probe::GammaField gamma;
  std::optional<geometry::CavityShape> cavity;
  reconstruct::ProbeSet probes;
  geometry::MeshOptions mesh;
  int cavity_segments = 128;
  reconstruct::SweepSettings sweep;  ///< includes the indicator settings
  double carve_resolution = 0.01;
  double lateral_leak_warn = 1e-6;
  std::filesystem::path output_dir = "out";
  int workers = 1;
  std::uint64_t seed = 0;
  std::string canonical;  ///< canonical JSON of the resolved config
  std::string hash;       ///< hex digest of `canonical`

  indicator::SceneSpec scene_spec() const;
  const indicator::IndicatorSettings& indicator() const { return sweep.indicator; }
};

/// Parses a JSON config. Unknown keys and every physical inconsistency are
/// reported together in one ValidationError.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

/// Auto halfwidth |p_x| + t + delta + 2 (d2 - d1), maximized over probes at t = t_hi.
double auto_halfwidth(const RunConfig& config);

}  // namespace slabprobe::run
