// One PASS/FAIL line per acceptance criterion. Exit status 1 when any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "slabprobe/error.hpp"
#include "slabprobe/indicator/scene.hpp"
#include "slabprobe/indicator/series.hpp"
#include "slabprobe/probe/probe.hpp"
#include "slabprobe/reconstruct/carve.hpp"
#include "slabprobe/run/commands.hpp"
#include "slabprobe/run/config.hpp"
#include "slabprobe/run/validate.hpp"

namespace fs = std::filesystem;
using namespace slabprobe;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string title;
  double budget_seconds;
  std::function<Outcome()> run;
};

run::RunConfig load(const std::string& name) { return run::load_config(fs::path(SLABPROBE_CONFIG_DIR) / name); }

const run::RunConfig& scene_a1_config() {
  static const run::RunConfig config = load("scene_a1.json");
  return config;
}

const indicator::Scene& scene_a1() {
  static const indicator::Scene scene(scene_a1_config().scene_spec());
  return scene;
}

const indicator::Probe& top_probe() {
  static const indicator::Probe probe{0, {0.0, 1.2}, {1.0, 0.0}};
  return probe;
}

indicator::IndicatorSettings settings_with(probe::DataMode mode) {
  auto s = scene_a1_config().indicator();
  s.mode = mode;
  return s;
}

const indicator::IndicatorSeries& series_at(double t, probe::DataMode mode = probe::DataMode::Localized) {
  static std::map<std::pair<double, int>, indicator::IndicatorSeries> memo;
  const auto key = std::make_pair(t, static_cast<int>(mode));
  auto it = memo.find(key);
  if (it == memo.end()) {
    it = memo.emplace(key, indicator::compute_series(scene_a1(), top_probe(), t, settings_with(mode))).first;
  }
  return it->second;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome probe_identities() {
  double eik = 0.0, transport = 0.0;
  for (int n : {2, 3, 4}) {
    const auto e = run::probe_identity_errors(n, 1000, 2024 + n);
    eik = std::max({eik, e.eikonal, e.orthogonality});
    transport = std::max(transport, e.transport);
  }
  return {eik <= 1e-8 && transport < 1e-6, fmt::format("eikonal {:.2e}, transport {:.2e}", eik, transport)};
}

Outcome harmonicity() {
  const auto& cfg = scene_a1_config();
  const auto& grid = cfg.indicator().grid;
  geometry::SlabGeometry region = cfg.slab;
  region.halfwidth = 1.0;
  const auto samples = run::residual_samples(region, top_probe().p, 0.7, 0.05);
  double worst = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    probe::ProbeParams par;
    par.p = top_probe().p;
    par.t = 0.4;
    par.h = grid.h(i);
    par.delta = 0.04;
    worst = std::max(worst, probe::residual_diagnostic(par, probe::GammaField{}, samples));
  }
  return {worst <= 1e-6, fmt::format("max h^2|Lv|/|v| = {:.2e} over {} samples x {} h", worst, samples.size(),
                                     grid.size())};
}

Outcome convergence() {
  const geometry::SlabGeometry slab{0.0, 1.0, 1.0};
  const std::vector<double> edges{0.05, 0.025, 0.0125};
  const auto levels = run::manufactured_convergence(slab, edges);
  bool ok = true;
  std::string detail = "L2 ratios";
  for (std::size_t k = 1; k < levels.size(); ++k) {
    const double r = levels[k - 1].l2_error / levels[k].l2_error;
    ok = ok && r >= 3.2 && r <= 4.8;
    detail += fmt::format(" {:.3f}", r);
  }
  return {ok, detail};
}

Outcome energy_identity() {
  double worst = 0.0, min_e = std::numeric_limits<double>::infinity();
  std::size_t count = 0;
  for (double t : {0.4, 0.5, 0.6}) {
    for (auto mode : {probe::DataMode::Localized, probe::DataMode::Full}) {
      for (const auto& e : series_at(t, mode).entries) {
        worst = std::max(worst, std::abs(e.E - (e.term_D + e.term_diff)) / std::max(e.E, 1e-300));
        min_e = std::min(min_e, e.E);
        ++count;
      }
    }
  }
  return {worst <= 1e-10 && min_e >= 0.0,
          fmt::format("{} gaps, max relative residual {:.2e}, min E {:.3e}", count, worst, min_e)};
}

Outcome outside_decay() {
  const auto& s = series_at(0.4);
  const auto fit = indicator::fit_slope(s, settings_with(probe::DataMode::Localized).floor_factor);
  const double predicted = 2.0 * std::log(0.4 / 0.5);
  const double rel = std::abs(fit.slope - predicted) / std::abs(predicted);
  return {fit.slope <= -0.1 && fit.r2 >= 0.98 && rel <= 0.3,
          fmt::format("slope {:.4f} (predicted {:.4f}, off {:.0f}%), r2 {:.4f}", fit.slope, predicted, 100 * rel,
                      fit.r2)};
}

Outcome intersecting_growth() {
  const auto fit = indicator::fit_slope(series_at(0.6));
  return {fit.slope >= 0.1 && fit.r2 >= 0.95, fmt::format("slope {:.4f}, r2 {:.4f}", fit.slope, fit.r2)};
}

Outcome touching_flat() {
  const auto& s = series_at(0.5);
  const auto fit = indicator::fit_slope(s);
  // E_i / E_0 must stay inside [h_i / h_0, h_0 / h_i]: no faster than 1/h growth or h decay.
  const auto& e0 = s.entries.front();
  bool band = true;
  double worst_growth = 0.0;
  for (const auto& e : s.entries) {
    const double ratio = e.E / e0.E;
    const double scale = e.inv_h / e0.inv_h;
    band = band && ratio <= scale && ratio >= 1.0 / scale;
    worst_growth = std::max(worst_growth, ratio / scale);
  }
  return {std::abs(fit.slope) < 0.2 && band,
          fmt::format("slope {:.4f}, max (E/E0)/(h0/h) = {:.3f}", fit.slope, worst_growth)};
}

Outcome localization() {
  bool ok = true;
  std::string detail;
  for (double t : {0.4, 0.6}) {
    const auto loc = indicator::classify_series(series_at(t, probe::DataMode::Localized),
                                                settings_with(probe::DataMode::Localized));
    const auto full =
        indicator::classify_series(series_at(t, probe::DataMode::Full), settings_with(probe::DataMode::Full));
    const auto settings = settings_with(probe::DataMode::Localized);
    std::vector<double> x, y;
    for (std::size_t i = 0; i < settings.grid.size(); ++i) {
      x.push_back(settings.grid.inv_h[i]);
      y.push_back(std::log(indicator::localization_error(scene_a1(), top_probe(), t, settings.grid.h(i), settings)));
    }
    const double slope = indicator::fit_slope(x, y).slope;
    ok = ok && loc.kind == full.kind && slope < 0.0;
    detail += fmt::format("t={}: {} / {}, remainder slope {:.3f}; ", t, indicator::to_string(loc.kind),
                          indicator::to_string(full.kind), slope);
  }
  return {ok, detail};
}

Outcome distance_recovery() {
  const auto& cfg = scene_a1_config();
  const auto est = indicator::estimate_distance(scene_a1(), top_probe(), cfg.sweep.t_lo, cfg.sweep.t_hi,
                                                cfg.sweep.tol, cfg.indicator());
  const double eps = std::max(0.01, 2.0 * scene_a1().mesh_edge());
  const double err = std::abs(est.d_hat - 0.5);
  return {err <= eps, fmt::format("d_hat {:.5f}, error {:.4f} (allowed {:.3f}), {} bisections", est.d_hat, err, eps,
                                  est.n_bisections)};
}

run::SweepOutcome sweep_into(const run::RunConfig& config, const fs::path& dir, int workers) {
  run::CommandOptions opt;
  opt.out = dir;
  opt.workers = workers;
  fs::remove_all(dir);
  return run::cmd_sweep(run::apply_options(config, opt), opt);
}

const fs::path& scratch() {
  static const fs::path dir = fs::temp_directory_path() / "slabprobe_acceptance";
  return dir;
}

Outcome reconstruction() {
  const auto a1 = sweep_into(scene_a1_config(), scratch() / "a1_w1", 1);
  if (!a1.metrics) return {false, "A1 sweep produced no metrics"};
  const double budget = 3.0 * scene_a1().mesh_edge();
  const bool a1_ok = a1.distances.ok_count() == a1.distances.records.size() && a1.carved_inside_cavity == 0 &&
                     a1.metrics->hausdorff <= budget;

  const auto kidney_cfg = load("kidney.json");
  const auto kidney = sweep_into(kidney_cfg, scratch() / "kidney", 1);
  if (!kidney.mask) return {false, "kidney sweep carved nothing"};
  const auto hull = geometry::convex_hull(geometry::polygonize_cavity(*kidney_cfg.cavity).vertices);
  const geometry::Polygon hull_shape{hull};
  const double margin = kidney_cfg.sweep.tol + 2.0 * kidney_cfg.mesh.target_edge;
  std::vector<reconstruct::Ball> hull_balls;
  for (const auto& rec : kidney.distances.records) {
    hull_balls.push_back({rec.p, geometry::cavity_distance(rec.p, hull_shape) - margin});
  }
  const auto hull_mask = reconstruct::carve_balls(kidney_cfg.slab, hull_balls, kidney_cfg.carve_resolution);
  const bool kidney_ok = kidney.carved_inside_cavity == 0 && kidney.mask->carved_area() > hull_mask.carved_area();

  return {a1_ok && kidney_ok,
          fmt::format("A1: {} cells in D, hausdorff {:.4f} <= {:.3f}; kidney: carved {:.4f} vs hull-only {:.4f}, {} "
                      "cells in D",
                      a1.carved_inside_cavity, a1.metrics->hausdorff, budget, kidney.mask->carved_area(),
                      hull_mask.carved_area(), kidney.carved_inside_cavity)};
}

Outcome truncation() {
  auto spec = scene_a1_config().scene_spec();
  spec.slab.halfwidth *= 2.0;
  const indicator::Scene wide(spec);
  const auto settings = settings_with(probe::DataMode::Localized);
  double worst = 0.0;
  for (double t : {0.4, 0.5, 0.6}) {
    const auto narrow_series = series_at(t);
    const auto wide_series = indicator::compute_series(wide, top_probe(), t, settings);
    for (std::size_t i = 0; i < narrow_series.entries.size(); ++i) {
      const double a = narrow_series.entries[i].E;
      const double b = wide_series.entries[i].E;
      worst = std::max(worst, std::abs(a - b) / std::abs(a));
    }
  }
  return {worst < 0.01, fmt::format("halfwidth {} -> {}: max relative change {:.2e}", scene_a1_config().slab.halfwidth,
                                    spec.slab.halfwidth, worst)};
}

Outcome reproducibility() {
  const auto one = scratch() / "repro_w1";
  const auto eight = scratch() / "repro_w8";
  sweep_into(scene_a1_config(), one, 1);
  sweep_into(scene_a1_config(), eight, 8);
  std::size_t compared = 0;
  for (const auto& entry : fs::directory_iterator(one)) {
    if (entry.path().extension() != ".csv") continue;
    ++compared;
    if (slurp(entry.path()) != slurp(eight / entry.path().filename())) {
      return {false, fmt::format("{} differs", entry.path().filename().string())};
    }
  }
  return {compared >= 4, fmt::format("{} CSV files byte-identical", compared)};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "probe identities", 1.0, probe_identities},
      {2, "exact harmonicity at gamma = 1", 1.0, harmonicity},
      {3, "forward-solver convergence", 30.0, convergence},
      {4, "discrete energy-gap identity", 300.0, energy_identity},
      {5, "front outside the cavity: exponential decay", 300.0, outside_decay},
      {6, "front across the cavity: exponential growth", 300.0, intersecting_growth},
      {7, "touching front: polynomial regime", 300.0, touching_flat},
      {8, "localized data", 600.0, localization},
      {9, "distance recovery", 600.0, distance_recovery},
      {10, "envelope soundness and concavity witness", 1800.0, reconstruction},
      {11, "truncation stability", 600.0, truncation},
      {12, "reproducibility across worker counts", 1800.0, reproducibility},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, fmt::format("threw: {}", e.what())};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool pass = o.pass && seconds <= c.budget_seconds;
    if (!pass) ++failures;
    std::cout << fmt::format("{} {:>2} {}: {} [{:.2f} s, budget {:.0f} s]", pass ? "PASS" : "FAIL", c.id, c.title,
                             o.detail, seconds, c.budget_seconds)
              << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
