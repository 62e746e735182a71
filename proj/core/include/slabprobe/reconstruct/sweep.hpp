#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "slabprobe/indicator/scene.hpp"
#include "slabprobe/indicator/series.hpp"

namespace slabprobe::reconstruct {

/// `count` probes evenly spaced from start to end (both included when count > 1).
struct ProbeLine {
  Vec2 start{-0.4, 1.2};
  Vec2 end{0.4, 1.2};
  int count = 9;
  Vec2 axis{1.0, 0.0};
};

struct ProbeSet {
  std::vector<indicator::Probe> probes;
};

ProbeSet make_probe_line(const ProbeLine& line, int first_id = 0);

/// Throws ValidationError naming every probe that touches the slab strip.
void validate_probes(const ProbeSet& probes, const geometry::SlabGeometry& slab);

enum class ProbeStatus { Ok, NotDetected };
std::string_view to_string(ProbeStatus status);

struct DistanceRecord {
  int probe_id = 0;
  Vec2 p{0.0, 0.0};
  ProbeStatus status = ProbeStatus::NotDetected;
  double d_hat = 0.0;
  int n_bisections = 0;
  std::string message;  ///< reason for NOT_DETECTED
  indicator::DistanceEstimate estimate;
};

struct DistanceMap {
  std::vector<DistanceRecord> records;  ///< sorted by probe id

  std::size_t ok_count() const;
};

struct SweepSettings {
  double t_lo = 0.25;
  double t_hi = 0.9;
  double tol = 0.005;
  int workers = 1;  ///< threads over probes
  indicator::IndicatorSettings indicator;
};

/// Distance estimate for every probe. Per-probe failures become NOT_DETECTED
/// records; the sweep itself does not throw for them.
DistanceMap sweep(const indicator::Scene& scene, const ProbeSet& probes, const SweepSettings& settings);

}  // namespace slabprobe::reconstruct
