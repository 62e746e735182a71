#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "slabprobe/geometry/vec.hpp"
#include "slabprobe/indicator/scene.hpp"
#include "slabprobe/probe/probe.hpp"
#include "slabprobe/solver/energy_gap.hpp"

namespace slabprobe::indicator {

struct Probe {
  int id = 0;
  Vec2 p{0.0, 1.2};
  Vec2 axis{1.0, 0.0};
};

struct IndicatorSettings {
  probe::HGrid grid = probe::h_grid(2, 0.5, 2, 9);
  double delta_ratio = 0.1;    ///< cutoff width delta = delta_ratio * t
  double tau = 0.10;
  double floor_factor = 1e3;   ///< entries with E < floor_factor * eps * e_full are unusable
  probe::DataMode mode = probe::DataMode::Localized;
  probe::ProbeOptions probe;
  int workers = 1;             ///< threads over h values inside one series
};

struct IndicatorEntry {
  double h = 0.0;
  double inv_h = 0.0;
  double E = 0.0;
  double identity_residual = 0.0;
  double lateral_leak = 0.0;
  double e_full = 0.0;
  double term_D = 0.0;
  double term_diff = 0.0;
  std::size_t clamped = 0;
};

struct IndicatorSeries {
  int probe_id = 0;
  Vec2 p{0.0, 0.0};
  double t = 0.0;
  double delta = 0.0;
  probe::DataMode mode = probe::DataMode::Localized;
  std::vector<IndicatorEntry> entries;  ///< increasing 1/h

  bool localized() const { return mode == probe::DataMode::Localized; }
};

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  int n_points = 0;
};

enum class FrontClass { Outside, Intersecting, Touching };
std::string_view to_string(FrontClass kind);

struct Classification {
  FrontClass kind = FrontClass::Outside;
  double confidence = 0.0;  ///< r^2 of the fit
  bool dead = false;        ///< no usable entries: signal under roundoff
};

probe::ProbeParams probe_params(const Probe& probe, double t, double h, const IndicatorSettings& settings);

/// Energy gap for one (p, t, h) with the requested data mode.
solver::EnergyGapResult gap_for(const Scene& scene, const Probe& probe, double t, double h,
                                const IndicatorSettings& settings, probe::DataMode mode,
                                probe::BoundaryData* data_out = nullptr, solver::EnergyGapFields* fields = nullptr);

IndicatorSeries compute_series(const Scene& scene, const Probe& probe, double t, const IndicatorSettings& settings);

/// Ordinary least squares of y on x.
SlopeFit fit_slope(std::span<const double> x, std::span<const double> y);

/// OLS of log E on 1/h over usable entries. Throws "insufficient signal" with
/// fewer than three.
SlopeFit fit_slope(const IndicatorSeries& series, double floor_factor = 1e3);

std::size_t usable_count(const IndicatorSeries& series, double floor_factor = 1e3);

Classification classify(const SlopeFit& fit, double tau = 0.10);

/// Classification of a series; a series without usable entries is OUTSIDE.
Classification classify_series(const IndicatorSeries& series, const IndicatorSettings& settings);

struct BisectionStep {
  double t = 0.0;
  Classification classification;
  SlopeFit fit;  ///< n_points == 0 when the series is dead or too short
};

struct DistanceEstimate {
  double d_hat = 0.0;
  double t_outside = 0.0;       ///< final OUTSIDE endpoint
  double t_intersecting = 0.0;  ///< final INTERSECTING endpoint
  int n_bisections = 0;
  std::vector<BisectionStep> trace;
  std::vector<IndicatorSeries> series;
};

/// Bisection on the front radius between an OUTSIDE and an INTERSECTING
/// front. TOUCHING fronts never become endpoints; the search narrows the gaps
/// on both sides of them instead, so d_hat ends up in the middle of the
/// touching band. The initial bracket is widened when needed.
DistanceEstimate estimate_distance(const Scene& scene, const Probe& probe, double t_lo, double t_hi, double tol,
                                   const IndicatorSettings& settings);

/// Energy gap of the remainder data (1 - cutoff) * v_t.
double localization_error(const Scene& scene, const Probe& probe, double t, double h,
                          const IndicatorSettings& settings);

}  // namespace slabprobe::indicator
