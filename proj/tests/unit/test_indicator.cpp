#include <doctest.h>

#include <cmath>

#include "scenes.hpp"
#include "slabprobe/error.hpp"
#include "slabprobe/indicator/series.hpp"

using namespace slabprobe;
using namespace slabprobe::indicator;

TEST_CASE("slope fits of synthetic series") {
  std::vector<double> x, a, b, c;
  for (int k = 3; k <= 10; ++k) {
    x.push_back(k);
    a.push_back(std::log(std::pow(0.3, k)));
    b.push_back(std::log(5.0 * std::pow(2.0, k)));
    c.push_back(std::log(2.0 * k));
  }
  const SlopeFit fa = fit_slope(x, a);
  CHECK(std::abs(fa.slope - std::log(0.3)) < 1e-12);
  CHECK(fa.r2 == doctest::Approx(1.0).epsilon(1e-12));
  const SlopeFit fb = fit_slope(x, b);
  CHECK(std::abs(fb.slope - std::log(2.0)) < 1e-12);
  CHECK(std::abs(fb.intercept - std::log(5.0)) < 1e-12);
  // Closed form: OLS slope of log k on k over k = 3..10.
  double mean_x = 6.5, mean_y = 0.0, sxy = 0.0;
  for (int k = 3; k <= 10; ++k) mean_y += std::log(k) / 8.0;
  for (int k = 3; k <= 10; ++k) sxy += (k - mean_x) * (std::log(k) - mean_y);
  CHECK(fit_slope(x, c).slope == doctest::Approx(sxy / 42.0).epsilon(1e-12));
  CHECK(std::abs(fit_slope(x, c).slope) < 0.2);

  std::vector<double> x5, c5;
  for (int k = 5; k <= 12; ++k) {
    x5.push_back(k);
    c5.push_back(std::log(2.0 * k));
  }
  CHECK(std::abs(fit_slope(x5, c5).slope) < 0.15);
}

TEST_CASE("classification rule") {
  auto with_slope = [](double s) {
    SlopeFit f;
    f.slope = s;
    f.r2 = 1.0;
    f.n_points = 8;
    return classify(f, 0.1).kind;
  };
  CHECK(with_slope(-0.69) == FrontClass::Outside);
  CHECK(with_slope(0.41) == FrontClass::Intersecting);
  CHECK(with_slope(0.03) == FrontClass::Touching);
  CHECK(to_string(FrontClass::Touching) == "TOUCHING");
}

TEST_CASE("no cavity: every gap is zero and nothing is detectable") {
  const Scene scene(testing::empty_scene(2.66, 0.08));
  IndicatorSettings settings;
  const Probe probe;
  const auto series = compute_series(scene, probe, 0.4, settings);
  for (const auto& e : series.entries) CHECK(e.E == 0.0);
  const auto cls = classify_series(series, settings);
  CHECK(cls.dead);
  CHECK(cls.kind == FrontClass::Outside);
  CHECK_THROWS_WITH_AS(estimate_distance(scene, probe, 0.25, 0.9, 0.005, settings),
                       doctest::Contains("cavity not detectable"), Error);
}

TEST_CASE("fronts inside and across the disc") {
  const Scene scene(testing::disc_scene());
  IndicatorSettings settings;
  const Probe probe;

  const auto before = compute_series(scene, probe, 0.4, settings);
  for (std::size_t i = 1; i < before.entries.size(); ++i) {
    CHECK(before.entries[i].inv_h > before.entries[i - 1].inv_h);
    CHECK(before.entries[i].E < before.entries[i - 1].E);
  }
  CHECK(classify_series(before, settings).kind == FrontClass::Outside);

  const auto after = compute_series(scene, probe, 0.6, settings);
  for (std::size_t i = 1; i < after.entries.size(); ++i) CHECK(after.entries[i].E > after.entries[i - 1].E);
  CHECK(classify_series(after, settings).kind == FrontClass::Intersecting);

  SUBCASE("decay rate far from the cavity") {
    const double t = 0.3;
    const double e10 = gap_for(scene, probe, t, 0.1, settings, probe::DataMode::Localized).E;
    const double e14 = gap_for(scene, probe, t, 1.0 / 14.0, settings, probe::DataMode::Localized).E;
    const double predicted = std::pow(t / 0.5, 8.0);
    const double ratio = e14 / e10;
    CHECK(ratio < 10.0 * predicted);
    CHECK(ratio > predicted / 10.0);
  }

  SUBCASE("remainder gap decays for an OUTSIDE front") {
    std::vector<double> x, y;
    for (std::size_t i = 0; i < settings.grid.size(); ++i) {
      x.push_back(settings.grid.inv_h[i]);
      y.push_back(std::log(localization_error(scene, probe, 0.4, settings.grid.h(i), settings)));
    }
    CHECK(fit_slope(x, y).slope < 0.0);
  }
}

TEST_CASE("invalid bisection bracket") {
  const Scene scene(testing::disc_scene(2.66, 0.1));
  CHECK_THROWS_AS(estimate_distance(scene, Probe{}, 0.6, 0.4, 0.005, IndicatorSettings{}), ValidationError);
}
