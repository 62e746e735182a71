#include "slabprobe/run/commands.hpp"

#include <chrono>
#include <fstream>
#include <iostream>

#include <fmt/format.h>
#include <json.hpp>

#include "slabprobe/error.hpp"
#include "slabprobe/run/csv.hpp"

namespace slabprobe::run {

namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

class Stopwatch {
 public:
  explicit Stopwatch(RunManifest& manifest) : manifest_(manifest), start_(Clock::now()) {}
  void lap(std::string stage) {
    const auto now = Clock::now();
    manifest_.timings.push_back({std::move(stage), std::chrono::duration<double>(now - start_).count()});
    start_ = now;
  }

 private:
  RunManifest& manifest_;
  Clock::time_point start_;
};

class OutputDir {
 public:
  OutputDir(fs::path dir, RunManifest& manifest) : dir_(std::move(dir)), manifest_(manifest) {
    fs::create_directories(dir_);
  }

  template <typename Writer>
  void write(const std::string& name, Writer&& writer) {
    std::ofstream out(dir_ / name, std::ios::binary);
    if (!out) throw Error(fmt::format("cannot open {} for writing", (dir_ / name).string()));
    writer(out);
    if (!out) throw Error(fmt::format("failed writing {}", (dir_ / name).string()));
    manifest_.artifacts.push_back(name);
  }

  void finish() {
    manifest_.artifacts.push_back("manifest.json");
    std::ofstream out(dir_ / "manifest.json", std::ios::binary);
    out << manifest_json(manifest_);
  }

 private:
  fs::path dir_;
  RunManifest& manifest_;
};

RunManifest start_manifest(const RunConfig& config, std::string command) {
  RunManifest m;
  m.command = std::move(command);
  m.run_id = config.run_id;
  m.config_hash = config.hash;
  return m;
}

MeshStats mesh_stats(const indicator::Scene& scene) {
  const auto& pair = scene.meshes();
  return {pair.full->vertex_count(),        pair.full->triangle_count(), pair.holed->vertex_count(),
          pair.holed->triangle_count(),     pair.holed->min_angle_degrees(),
          pair.full->max_edge_length()};
}

const indicator::Probe& select_probe(const RunConfig& config, int index) {
  const auto& probes = config.probes.probes;
  if (index < 0 || static_cast<std::size_t>(index) >= probes.size()) {
    throw ValidationError(fmt::format("--probe {}: config has {} probe(s)", index, probes.size()));
  }
  return probes[static_cast<std::size_t>(index)];
}

double require_t(const CommandOptions& options) {
  if (!options.t) throw ValidationError("--t is required for this command");
  if (!(*options.t > 0.0)) throw ValidationError("--t: front radius must be positive");
  return *options.t;
}

void collect_warnings(const std::vector<indicator::IndicatorSeries>& series, double leak_threshold,
                      std::vector<std::string>& warnings) {
  for (const auto& s : series) {
    std::size_t clamped = 0;
    double leak = 0.0;
    for (const auto& e : s.entries) {
      clamped += e.clamped;
      leak = std::max(leak, e.lateral_leak);
    }
    if (clamped > 0) {
      warnings.push_back(fmt::format("probe {} t={}: {} boundary values hit the overflow cap", s.probe_id,
                                     format_double(s.t), clamped));
    }
    if (leak > leak_threshold) {
      warnings.push_back(fmt::format("probe {} t={}: lateral leak {} above {}", s.probe_id, format_double(s.t),
                                     format_double(leak), format_double(leak_threshold)));
    }
  }
}

SlopeRow slope_row(const indicator::IndicatorSeries& series, const indicator::IndicatorSettings& settings) {
  SlopeRow row;
  row.probe_id = series.probe_id;
  row.t = series.t;
  row.classification = indicator::classify_series(series, settings);
  if (!row.classification.dead) row.fit = indicator::fit_slope(series, settings.floor_factor);
  return row;
}

}  // namespace

std::string manifest_json(const RunManifest& m) {
  nlohmann::ordered_json j;
  j["command"] = m.command;
  j["run_id"] = m.run_id;
  j["config_hash"] = m.config_hash;
  j["mesh"] = {{"full_vertices", m.mesh.full_vertices},   {"full_triangles", m.mesh.full_triangles},
               {"holed_vertices", m.mesh.holed_vertices}, {"holed_triangles", m.mesh.holed_triangles},
               {"min_angle_degrees", m.mesh.min_angle_degrees}, {"max_edge", m.mesh.max_edge}};
  auto timings = nlohmann::ordered_json::array();
  for (const auto& t : m.timings) timings.push_back({{"stage", t.stage}, {"seconds", t.seconds}});
  j["timings"] = timings;
  j["warnings"] = m.warnings;
  j["artifacts"] = m.artifacts;
  return j.dump(2) + "\n";
}

RunConfig apply_options(RunConfig config, const CommandOptions& options) {
  if (options.out) config.output_dir = *options.out;
  if (options.workers) {
    if (*options.workers < 1) throw ValidationError("--workers: must be at least 1");
    config.workers = *options.workers;
  }
  return config;
}

RunManifest cmd_forward(const RunConfig& config, const CommandOptions& options) {
  const auto& probe = select_probe(config, options.probe);
  const double t = require_t(options);
  auto settings = config.indicator();
  const double h = options.h ? *options.h : settings.grid.h(0);
  if (settings.grid.strict() && !probe::on_h_grid(h, settings.grid.n, settings.grid.delta_S)) {
    throw ValidationError(fmt::format("--h {}: not on the admissible grid (strict mode)", format_double(h)));
  }
  probe::validate_probe(indicator::probe_params(probe, t, h, settings), config.slab);

  RunManifest manifest = start_manifest(config, "forward");
  Stopwatch clock(manifest);
  const indicator::Scene scene(config.scene_spec());
  manifest.mesh = mesh_stats(scene);
  clock.lap("mesh_and_factorize");

  probe::BoundaryData data;
  solver::EnergyGapFields fields;
  const auto result = indicator::gap_for(scene, probe, t, h, settings, settings.mode, &data, &fields);
  clock.lap("solve");
  if (data.clamped > 0) manifest.warnings.push_back(fmt::format("{} boundary values hit the overflow cap", data.clamped));
  if (data.lateral_leak > config.lateral_leak_warn) {
    manifest.warnings.push_back(fmt::format("lateral leak {} above threshold", format_double(data.lateral_leak)));
  }

  OutputDir out(config.output_dir, manifest);
  out.write("forward_full.csv", [&](std::ostream& s) { write_solution_csv(s, *scene.meshes().full, fields.v); });
  out.write("forward_holed.csv", [&](std::ostream& s) { write_solution_csv(s, *scene.meshes().holed, fields.u); });
  out.write("energy.csv", [&](std::ostream& s) { write_energy_csv(s, result); });
  out.write("mesh_full.txt", [&](std::ostream& s) { geometry::write_mesh(s, *scene.meshes().full); });
  out.write("mesh_holed.txt", [&](std::ostream& s) { geometry::write_mesh(s, *scene.meshes().holed); });
  clock.lap("write");
  out.finish();
  return manifest;
}

RunManifest cmd_indicator(const RunConfig& config, const CommandOptions& options) {
  const auto& probe = select_probe(config, options.probe);
  const double t = require_t(options);
  auto settings = config.indicator();
  settings.workers = config.workers;

  RunManifest manifest = start_manifest(config, "indicator");
  Stopwatch clock(manifest);
  const indicator::Scene scene(config.scene_spec());
  manifest.mesh = mesh_stats(scene);
  clock.lap("mesh_and_factorize");

  const auto series = indicator::compute_series(scene, probe, t, settings);
  const SlopeRow row = slope_row(series, settings);
  clock.lap("indicator");
  collect_warnings({series}, config.lateral_leak_warn, manifest.warnings);

  OutputDir out(config.output_dir, manifest);
  out.write("indicator.csv", [&](std::ostream& s) { write_indicator_csv(s, config.run_id, {series}); });
  out.write("slopes.csv", [&](std::ostream& s) { write_slope_csv(s, {row}); });
  clock.lap("write");
  out.finish();
  return manifest;
}

SweepOutcome cmd_sweep(const RunConfig& config, const CommandOptions& options) {
  (void)options;
  SweepOutcome outcome;
  RunManifest& manifest = outcome.manifest;
  manifest = start_manifest(config, "sweep");
  Stopwatch clock(manifest);

  const indicator::Scene scene(config.scene_spec());
  manifest.mesh = mesh_stats(scene);
  clock.lap("mesh_and_factorize");

  auto settings = config.sweep;
  settings.workers = config.workers;
  settings.indicator.workers = 1;
  outcome.distances = reconstruct::sweep(scene, config.probes, settings);
  clock.lap("sweep");

  std::vector<indicator::IndicatorSeries> all_series;
  std::vector<SlopeRow> slopes;
  for (const auto& rec : outcome.distances.records) {
    for (const auto& s : rec.estimate.series) {
      all_series.push_back(s);
      slopes.push_back(slope_row(s, settings.indicator));
    }
    if (rec.status == reconstruct::ProbeStatus::NotDetected) {
      manifest.warnings.push_back(fmt::format("probe {}: not detected ({})", rec.probe_id, rec.message));
    }
  }
  collect_warnings(all_series, config.lateral_leak_warn, manifest.warnings);

  OutputDir out(config.output_dir, manifest);
  out.write("distances.csv", [&](std::ostream& s) { write_distances_csv(s, outcome.distances); });
  out.write("indicator.csv", [&](std::ostream& s) { write_indicator_csv(s, config.run_id, all_series); });
  out.write("slopes.csv", [&](std::ostream& s) { write_slope_csv(s, slopes); });

  if (outcome.distances.ok_count() == 0) {
    out.write("report.txt", [&](std::ostream& s) {
      s << "no cavity detected: all " << outcome.distances.records.size() << " probes NOT_DETECTED\n";
    });
    out.finish();
    return outcome;
  }

  const double margin = settings.tol + 2.0 * scene.mesh_edge();
  outcome.mask = reconstruct::carve(config.slab, outcome.distances, config.carve_resolution, margin);
  outcome.boundary = reconstruct::extract_boundary(*outcome.mask);
  clock.lap("carve");
  out.write("mask.txt", [&](std::ostream& s) { write_mask_grid(s, *outcome.mask); });
  out.write("mask.json", [&](std::ostream& s) { write_mask_header(s, *outcome.mask); });
  out.write("boundary.csv", [&](std::ostream& s) { write_boundary_csv(s, *outcome.boundary); });

  if (config.cavity) {
    const auto& mask = *outcome.mask;
    for (int j = 0; j < mask.ny; ++j) {
      for (int i = 0; i < mask.nx; ++i) {
        if (mask.at(i, j) && geometry::cavity_contains(*config.cavity, mask.center(i, j))) {
          ++outcome.carved_inside_cavity;
        }
      }
    }
    std::vector<Vec2> points;
    for (const auto& rec : outcome.distances.records) {
      if (rec.status == reconstruct::ProbeStatus::Ok) points.push_back(rec.p);
    }
    outcome.metrics = reconstruct::evaluate(*outcome.boundary, *config.cavity, points, 3.0 * scene.mesh_edge());
    const auto& m = *outcome.metrics;
    out.write("metrics.csv", [&](std::ostream& s) {
      s << "metric,value\n"
        << "carved_cells," << mask.carved_count() << '\n'
        << "carved_area," << format_double(mask.carved_area()) << '\n'
        << "carved_cells_inside_cavity," << outcome.carved_inside_cavity << '\n'
        << "hausdorff_probed_side," << format_double(m.hausdorff) << '\n'
        << "vertices_evaluated," << m.vertices_evaluated << '\n'
        << "coverage," << format_double(m.coverage) << '\n'
        << "band," << format_double(m.band) << '\n';
    });
    clock.lap("evaluate");
  }
  out.finish();
  return outcome;
}

std::vector<CheckResult> cmd_validate(const RunConfig& config) { return run_property_suites(config); }

}  // namespace slabprobe::run
