#include "slabprobe/indicator/series.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "slabprobe/error.hpp"
#include "slabprobe/parallel.hpp"
#include "slabprobe/probe/probe_field.hpp"

namespace slabprobe::indicator {

using probe::DataMode;

std::string_view to_string(FrontClass kind) {
  switch (kind) {
    case FrontClass::Outside:
      return "OUTSIDE";
    case FrontClass::Intersecting:
      return "INTERSECTING";
    case FrontClass::Touching:
      return "TOUCHING";
  }
  return "?";
}

probe::ProbeParams probe_params(const Probe& probe, double t, double h, const IndicatorSettings& settings) {
  probe::ProbeParams params;
  params.p = probe.p;
  params.axis = probe.axis;
  params.t = t;
  params.h = h;
  params.delta = settings.delta_ratio * t;
  return params;
}

solver::EnergyGapResult gap_for(const Scene& scene, const Probe& probe, double t, double h,
                                const IndicatorSettings& settings, DataMode mode, probe::BoundaryData* data_out,
                                solver::EnergyGapFields* fields) {
  const probe::ProbeParams params = probe_params(probe, t, h, settings);
  probe::validate_probe(params, scene.slab());
  const auto& full = *scene.meshes().full;
  probe::BoundaryData data = probe::boundary_data(full, scene.slab(), params, scene.gamma(), mode, settings.probe);

  solver::EnergyGapResult result;
  if (mode == DataMode::Remainder) {
    const bool any = std::any_of(data.values.begin(), data.values.end(),
                                 [](const std::complex<double>& z) { return z != 0.0; });
    if (!any) throw ValidationError("remainder data vanish: the cutoff support covers the whole boundary");
    // Remainder data are at most (t/(t+delta/2))^(1/h) in size, so a plain
    // solve is accurate.
    result = solver::energy_gap(scene.systems(), data.values, fields);
  } else {
    const probe::ProbeField background(params, scene.gamma(), settings.probe);
    result = solver::energy_gap(scene.systems(), data.values, background, fields);
  }
  if (data_out) *data_out = std::move(data);
  return result;
}

IndicatorSeries compute_series(const Scene& scene, const Probe& probe, double t, const IndicatorSettings& settings) {
  IndicatorSeries series;
  series.probe_id = probe.id;
  series.p = probe.p;
  series.t = t;
  series.delta = settings.delta_ratio * t;
  series.mode = settings.mode;
  series.entries.resize(settings.grid.size());
  parallel_for(settings.grid.size(), settings.workers, [&](std::size_t i) {
    const double h = settings.grid.h(i);
    probe::BoundaryData data;
    const solver::EnergyGapResult r = gap_for(scene, probe, t, h, settings, settings.mode, &data);
    IndicatorEntry& e = series.entries[i];
    e.h = h;
    e.inv_h = settings.grid.inv_h[i];
    e.E = r.E;
    e.identity_residual = r.identity_residual;
    e.lateral_leak = data.lateral_leak;
    e.e_full = r.e_full;
    e.term_D = r.term_D;
    e.term_diff = r.term_diff;
    e.clamped = data.clamped;
  });
  return series;
}

SlopeFit fit_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw Error("fit_slope: x and y differ in length");
  const std::size_t n = x.size();
  if (n < 2) throw Error("insufficient signal: fewer than two points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw Error("fit_slope: x values are all equal");
  SlopeFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r2 = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  fit.n_points = static_cast<int>(n);
  return fit;
}

namespace {

bool usable(const IndicatorEntry& e, double floor_factor) {
  const double floor = floor_factor * std::numeric_limits<double>::epsilon() * e.e_full;
  return std::isfinite(e.E) && e.E > 0.0 && e.E >= floor;
}

}  // namespace

std::size_t usable_count(const IndicatorSeries& series, double floor_factor) {
  return static_cast<std::size_t>(std::count_if(series.entries.begin(), series.entries.end(),
                                                [&](const IndicatorEntry& e) { return usable(e, floor_factor); }));
}

SlopeFit fit_slope(const IndicatorSeries& series, double floor_factor) {
  std::vector<double> x, y;
  for (const auto& e : series.entries) {
    if (!usable(e, floor_factor)) continue;
    x.push_back(e.inv_h);
    y.push_back(std::log(e.E));
  }
  if (x.size() < 3) {
    throw Error(fmt::format("insufficient signal: {} usable entries for probe {} at t = {}", x.size(),
                            series.probe_id, series.t));
  }
  return fit_slope(x, y);
}

Classification classify(const SlopeFit& fit, double tau) {
  Classification c;
  c.confidence = fit.r2;
  if (fit.slope < -tau) {
    c.kind = FrontClass::Outside;
  } else if (fit.slope > tau) {
    c.kind = FrontClass::Intersecting;
  } else {
    c.kind = FrontClass::Touching;
  }
  return c;
}

Classification classify_series(const IndicatorSeries& series, const IndicatorSettings& settings) {
  if (usable_count(series, settings.floor_factor) < 3) {
    // Signal below roundoff for most of the grid: the front is far from D.
    Classification c;
    c.kind = FrontClass::Outside;
    c.dead = true;
    return c;
  }
  return classify(fit_slope(series, settings.floor_factor), settings.tau);
}

DistanceEstimate estimate_distance(const Scene& scene, const Probe& probe, double t_lo, double t_hi, double tol,
                                   const IndicatorSettings& settings) {
  if (!(t_lo > 0.0) || !(t_hi > t_lo) || !(tol > 0.0)) {
    throw ValidationError(fmt::format("invalid bisection bracket [{}, {}] with tol {}", t_lo, t_hi, tol));
  }
  DistanceEstimate out;
  const auto& slab = scene.slab();

  auto probe_at = [&](double t) {
    BisectionStep step;
    step.t = t;
    IndicatorSeries series = compute_series(scene, probe, t, settings);
    step.classification = classify_series(series, settings);
    if (!step.classification.dead) step.fit = fit_slope(series, settings.floor_factor);
    out.series.push_back(std::move(series));
    out.trace.push_back(step);
    return step.classification.kind;
  };

  auto feasible = [&](double t) {
    probe::ProbeParams params = probe_params(probe, t, settings.grid.h(0), settings);
    try {
      probe::validate_probe(params, slab);
    } catch (const ValidationError&) {
      return false;
    }
    if (settings.mode == DataMode::Localized) {
      const double reach = t + params.delta;
      const double dy = std::max({slab.d1 - probe.p.y(), probe.p.y() - slab.d2, 0.0});
      for (double side : {-slab.halfwidth, slab.halfwidth}) {
        if (std::hypot(probe.p.x() - side, dy) <= reach) return false;
      }
    }
    return true;
  };

  const double t_min = 1e-3 * slab.thickness();
  while (probe_at(t_lo) != FrontClass::Outside) {
    t_lo *= 0.5;
    if (t_lo < t_min) throw Error("cavity not detectable from p: no OUTSIDE front found");
  }
  if (t_hi <= t_lo) t_hi = 2.0 * t_lo;
  for (;;) {
    if (!feasible(t_hi)) throw Error("cavity not detectable from p: no INTERSECTING front within the slab");
    const FrontClass kind = probe_at(t_hi);
    if (kind == FrontClass::Intersecting) break;
    if (kind == FrontClass::Outside) t_lo = t_hi;
    t_hi *= 1.25;
  }

  double lo = t_lo;
  double hi = t_hi;
  std::vector<double> touching;
  for (int iter = 0; iter < 200; ++iter) {
    double tl = hi, th = lo;
    for (double t : touching) {
      if (t > lo && t < hi) {
        tl = std::min(tl, t);
        th = std::max(th, t);
      }
    }
    double mid;
    if (tl > th) {
      if (hi - lo <= tol) break;
      mid = 0.5 * (lo + hi);
    } else {
      const double gap_lo = tl - lo;
      const double gap_hi = hi - th;
      if (std::max(gap_lo, gap_hi) <= tol) break;
      mid = gap_lo >= gap_hi ? 0.5 * (lo + tl) : 0.5 * (th + hi);
    }
    ++out.n_bisections;
    switch (probe_at(mid)) {
      case FrontClass::Outside:
        lo = mid;
        break;
      case FrontClass::Intersecting:
        hi = mid;
        break;
      case FrontClass::Touching:
        touching.push_back(mid);
        break;
    }
  }
  out.t_outside = lo;
  out.t_intersecting = hi;
  out.d_hat = 0.5 * (lo + hi);
  return out;
}

double localization_error(const Scene& scene, const Probe& probe, double t, double h,
                          const IndicatorSettings& settings) {
  return gap_for(scene, probe, t, h, settings, DataMode::Remainder).E;
}

}  // namespace slabprobe::indicator
