#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "slabprobe/error.hpp"
#include "slabprobe/geometry/mesh.hpp"
#include "slabprobe/probe/probe.hpp"
#include "slabprobe/probe/probe_field.hpp"
#include "slabprobe/probe/spherical_wave.hpp"

using namespace slabprobe;
using namespace slabprobe::probe;

TEST_CASE("admissible h grid") {
  const HGrid g = h_grid(2, 0.5, 0, 9);
  CHECK(g.h(0) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(g.h(7) == doctest::Approx(0.1).epsilon(1e-15));
  for (std::size_t i = 1; i < g.size(); ++i) {
    CHECK(g.h(i) < g.h(i - 1));
    CHECK(g.inv_h[i] - g.inv_h[i - 1] == doctest::Approx(1.0));
  }
  CHECK(on_h_grid(0.1, 2, 0.5));
  CHECK_FALSE(on_h_grid(0.11, 2, 0.5));
}

TEST_CASE("phase pair at special directions") {
  const Vec2 p(0.0, 0.0);
  const Vec2 axis(1.0, 0.0);
  auto par = phase<2>(Vec2(1.0, 0.0), p, axis);
  CHECK(par.phi == doctest::Approx(0.0));
  CHECK(par.psi == doctest::Approx(0.0));
  CHECK(phase<2>(Vec2(-2.0, 0.0), p, axis).psi == doctest::Approx(std::numbers::pi));
  par = phase<2>(Vec2(0.0, std::numbers::e), p, axis);
  CHECK(par.phi == doctest::Approx(1.0));
  CHECK(par.psi == doctest::Approx(std::numbers::pi / 2));
  CHECK_THROWS_AS(phase<2>(p, p, axis), Error);
}

TEST_CASE("amplitude follows the principal branch of (2 i r)^((2-n)/2)") {
  CHECK(amplitude_from_perpendicular(0.7, 2).value() == std::complex<double>(1.0, 0.0));
  for (int n : {3, 4}) {
    for (double r : {0.5, 1.0, 2.3}) {
      const std::complex<double> oracle = std::pow(std::complex<double>(0.0, 2.0 * r), (2.0 - n) / 2.0);
      CHECK(std::abs(amplitude_from_perpendicular(r, n).value() - oracle) < 1e-14);
    }
  }
  const auto a3 = amplitude_from_perpendicular(0.5, 3);
  CHECK(a3.magnitude() == doctest::Approx(1.0));
  CHECK(a3.phase == doctest::Approx(-std::numbers::pi / 4));
  const auto a4 = amplitude_from_perpendicular(1.0, 4);
  CHECK(a4.magnitude() == doctest::Approx(0.5));
  CHECK(a4.phase == doctest::Approx(-std::numbers::pi / 2));
}

TEST_CASE("probe magnitude") {
  ProbeParams par;
  par.p = {0.0, 1.2};
  par.t = 0.4;
  par.h = 0.1;
  const Vec2 front = par.p + Vec2(0.0, -0.4);
  CHECK(probe_value(front, par, GammaField{}).value.logmag == doctest::Approx(0.0));
  CHECK(probe_value(par.p + Vec2(0.0, -0.8), par, GammaField{}).value.magnitude() ==
        doctest::Approx(std::pow(2.0, -10.0)).epsilon(1e-13));
  CHECK(probe_value(front, par, GammaField::constant(4.0)).value.magnitude() == doctest::Approx(0.5));

  SUBCASE("overflow cap clamps the magnitude") {
    ProbeOptions opt;
    opt.overflow_cap = 5.0;
    const auto v = probe_value(par.p + Vec2(0.0, -0.01), par, GammaField{}, opt);
    CHECK(v.clamped);
    CHECK(v.value.logmag == doctest::Approx(5.0));
  }
}

TEST_CASE("cutoff profile") {
  ProbeParams par;
  par.p = {0.0, 1.2};
  par.t = 0.4;
  par.delta = 0.04;
  auto at = [&](double r) { return cutoff(par.p + Vec2(0.0, -r), par); };
  CHECK(at(0.4) == 1.0);
  CHECK(at(0.44) == 0.0);
  const double a = at(0.43);
  CHECK(a > 0.0);
  CHECK(a < 1.0);
  CHECK(at(0.435) < a);
  CHECK(at(0.425) > a);
}

TEST_CASE("boundary data modes") {
  const geometry::SlabGeometry slab{0.0, 1.0, 2.0};
  geometry::MeshOptions opt;
  opt.target_edge = 0.1;
  const auto pair = geometry::build_nested_meshes(slab, {}, opt);
  const auto& mesh = *pair.full;
  ProbeParams par;
  par.p = {0.0, 1.2};
  par.t = 0.4;
  par.h = 0.1;
  par.delta = 0.04;

  const auto loc = boundary_data(mesh, slab, par, GammaField{}, DataMode::Localized);
  const auto full = boundary_data(mesh, slab, par, GammaField{}, DataMode::Full);
  const auto rem = boundary_data(mesh, slab, par, GammaField{}, DataMode::Remainder);
  const auto dirichlet = mesh.dirichlet_mask();
  for (std::size_t i = 0; i < mesh.vertex_count(); ++i) {
    if (!dirichlet[i]) {
      CHECK(full.values[i] == std::complex<double>(0.0, 0.0));
      continue;
    }
    const double r = (mesh.vertices[i] - par.p).norm();
    if (r >= par.t + par.delta) CHECK(loc.values[i] == std::complex<double>(0.0, 0.0));
    CHECK(std::abs(loc.values[i] + rem.values[i] - full.values[i]) <= 1e-12 * std::abs(full.values[i]));
    const double expected = std::pow(par.t / r, 1.0 / par.h);
    CHECK(std::abs(full.values[i]) == doctest::Approx(expected).epsilon(1e-12));
  }
  CHECK(loc.lateral_leak == 0.0);

  SUBCASE("remainder magnitude at distance t + 2 delta") {
    const Vec2 x = par.p + Vec2(0.0, -(par.t + 2 * par.delta));
    const double mag = (1.0 - cutoff(x, par)) * probe_value(x, par, GammaField{}).value.magnitude();
    CHECK(mag == doctest::Approx(std::pow(0.4 / 0.48, 10.0)).epsilon(1e-13));
  }
}

TEST_CASE("probe configuration guards") {
  const geometry::SlabGeometry slab{0.0, 1.0, 3.0};
  ProbeParams par;
  CHECK_NOTHROW(validate_probe(par, slab));
  par.p = {0.0, 0.5};
  CHECK_THROWS_AS(validate_probe(par, slab), ValidationError);
  par.p = {0.0, 1.2};
  par.axis = {0.0, 1.0};
  CHECK_THROWS_AS(validate_probe(par, slab), ValidationError);
  par.axis = {1.0, 0.0};
  par.t = 3.0;
  CHECK_THROWS_AS(validate_probe(par, slab), ValidationError);
}

TEST_CASE("residual of the probe") {
  ProbeParams par;
  par.p = {0.0, 1.2};
  par.t = 0.4;
  par.h = 1.0 / 12.0;
  SUBCASE("harmonic at gamma = 1") {
    for (const Vec2 x : {Vec2(0.0, 0.5), Vec2(0.4, 0.3), Vec2(-0.7, 0.1)}) {
      CHECK(residual_at(x, par, GammaField{}) <= 1e-6);
    }
  }
  SUBCASE("bump: h^2-normalized residual stays bounded as h decreases") {
    const GammaField gamma({{{0.0, 0.4}, 0.3, 0.5}}, 1.0);
    const Vec2 x(0.1, 0.45);
    double first = 0.0;
    for (double inv_h : {5.0, 8.0, 12.0, 16.0}) {
      par.h = 1.0 / inv_h;
      const double r = residual_at(x, par, gamma);
      if (first == 0.0) first = r;
      CHECK(r <= 1.01 * first);
    }
  }
}

TEST_CASE("gamma bump derivatives match finite differences") {
  const GammaField gamma({{{0.1, 0.4}, 0.3, 0.5}, {{-0.2, 0.5}, 0.2, -0.3}}, 1.0);
  CHECK_NOTHROW(gamma.validate());
  for (const Vec2 x : {Vec2(0.05, 0.45), Vec2(-0.15, 0.55), Vec2(0.3, 0.3)}) {
    const double g = 1e-6;
    const Vec2 gx(g, 0.0), gy(0.0, g);
    const Vec2 fd((gamma.value(x + gx) - gamma.value(x - gx)) / (2 * g),
                  (gamma.value(x + gy) - gamma.value(x - gy)) / (2 * g));
    CHECK((gamma.gradient(x) - fd).norm() < 1e-8);
    const double s = 1e-4;
    const Vec2 ex(s, 0.0), ey(0.0, s);
    const double lap = (gamma.value(x + ex) + gamma.value(x - ex) + gamma.value(x + ey) + gamma.value(x - ey) -
                        4 * gamma.value(x)) /
                       (s * s);
    CHECK(gamma.laplacian(x) == doctest::Approx(lap).epsilon(1e-5));
  }
}

TEST_CASE("analytic probe gradient matches finite differences") {
  ProbeParams par;
  par.p = {0.0, 1.2};
  par.t = 0.4;
  par.h = 0.1;
  const ProbeField field(par, GammaField({{{0.0, 0.4}, 0.3, 0.5}}, 1.0));
  const double s = 1e-6;
  for (const Vec2 x : {Vec2(0.0, 0.6), Vec2(0.3, 0.5), Vec2(-0.2, 0.35)}) {
    const auto f = field.sample(x);
    const auto dx = (field.sample(x + Vec2(s, 0)).value - field.sample(x - Vec2(s, 0)).value) / (2 * s);
    const auto dy = (field.sample(x + Vec2(0, s)).value - field.sample(x - Vec2(0, s)).value) / (2 * s);
    CHECK(std::abs(f.dx - dx) <= 1e-6 * std::abs(dx) + 1e-9);
    CHECK(std::abs(f.dy - dy) <= 1e-6 * std::abs(dy) + 1e-9);
  }
}
