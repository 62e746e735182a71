#include "slabprobe/reconstruct/sweep.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "slabprobe/error.hpp"
#include "slabprobe/parallel.hpp"

namespace slabprobe::reconstruct {

ProbeSet make_probe_line(const ProbeLine& line, int first_id) {
  if (line.count < 1) throw ValidationError("probe line needs at least one probe");
  ProbeSet set;
  for (int i = 0; i < line.count; ++i) {
    const double s = line.count == 1 ? 0.5 : static_cast<double>(i) / (line.count - 1);
    set.probes.push_back({first_id + i, line.start + s * (line.end - line.start), line.axis});
  }
  return set;
}

void validate_probes(const ProbeSet& probes, const geometry::SlabGeometry& slab) {
  std::vector<std::string> issues;
  for (std::size_t i = 0; i < probes.probes.size(); ++i) {
    const auto& pr = probes.probes[i];
    if (!(slab.strip_distance(pr.p) > 0.0)) {
      issues.push_back(fmt::format("probe {} at ({}, {}) lies in the closed slab strip", i, pr.p.x(), pr.p.y()));
    }
  }
  if (!issues.empty()) throw ValidationError(std::move(issues));
}

std::string_view to_string(ProbeStatus status) { return status == ProbeStatus::Ok ? "OK" : "NOT_DETECTED"; }

std::size_t DistanceMap::ok_count() const {
  return static_cast<std::size_t>(
      std::count_if(records.begin(), records.end(), [](const DistanceRecord& r) { return r.status == ProbeStatus::Ok; }));
}

DistanceMap sweep(const indicator::Scene& scene, const ProbeSet& probes, const SweepSettings& settings) {
  validate_probes(probes, scene.slab());
  indicator::IndicatorSettings inner = settings.indicator;
  inner.workers = 1;

  DistanceMap map;
  map.records.resize(probes.probes.size());
  parallel_for(probes.probes.size(), settings.workers, [&](std::size_t i) {
    const auto& pr = probes.probes[i];
    DistanceRecord& rec = map.records[i];
    rec.probe_id = pr.id;
    rec.p = pr.p;
    try {
      rec.estimate = indicator::estimate_distance(scene, pr, settings.t_lo, settings.t_hi, settings.tol, inner);
      rec.status = ProbeStatus::Ok;
      rec.d_hat = rec.estimate.d_hat;
      rec.n_bisections = rec.estimate.n_bisections;
    } catch (const Error& e) {
      rec.status = ProbeStatus::NotDetected;
      rec.message = e.what();
    }
  });
  std::sort(map.records.begin(), map.records.end(),
            [](const DistanceRecord& a, const DistanceRecord& b) { return a.probe_id < b.probe_id; });
  return map;
}

}  // namespace slabprobe::reconstruct
