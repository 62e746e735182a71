#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "slabprobe/reconstruct/carve.hpp"
#include "slabprobe/reconstruct/sweep.hpp"
#include "slabprobe/run/config.hpp"
#include "slabprobe/run/validate.hpp"

namespace slabprobe::run {

/// Command-line overrides shared by the subcommands.
struct CommandOptions {
  std::optional<std::filesystem::path> out;
  std::optional<int> workers;
  int probe = 0;
  std::optional<double> t;
  std::optional<double> h;
};

struct MeshStats {
  std::size_t full_vertices = 0;
  std::size_t full_triangles = 0;
  std::size_t holed_vertices = 0;
  std::size_t holed_triangles = 0;
  double min_angle_degrees = 0.0;
  double max_edge = 0.0;
};

struct StageTiming {
  std::string stage;
  double seconds = 0.0;
};

/// One per run, written as manifest.json next to the artifacts.
struct RunManifest {
  std::string command;
  std::string run_id;
  std::string config_hash;
  MeshStats mesh;
  std::vector<StageTiming> timings;
  std::vector<std::string> warnings;
  std::vector<std::string> artifacts;  ///< file names relative to the output directory
};

std::string manifest_json(const RunManifest& manifest);

struct SweepOutcome {
  reconstruct::DistanceMap distances;
  std::optional<reconstruct::RegionMask> mask;
  std::optional<reconstruct::BoundaryEstimate> boundary;
  std::optional<reconstruct::EvaluationMetrics> metrics;
  std::size_t carved_inside_cavity = 0;
  RunManifest manifest;
};

/// Applies the overrides: workers replace both worker counts, out the output directory.
RunConfig apply_options(RunConfig config, const CommandOptions& options);

/// Solutions with and without the cavity plus the energy gap for one (p, t, h).
RunManifest cmd_forward(const RunConfig& config, const CommandOptions& options);

/// Indicator series, slope fit and classification for one probe and front radius.
RunManifest cmd_indicator(const RunConfig& config, const CommandOptions& options);

/// Distance estimates for every probe, carved mask, boundary and metrics.
SweepOutcome cmd_sweep(const RunConfig& config, const CommandOptions& options);

std::vector<CheckResult> cmd_validate(const RunConfig& config);

}  // namespace slabprobe::run
