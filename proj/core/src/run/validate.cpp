#include "slabprobe/run/validate.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>

#include <fmt/format.h>

#include "../solver/quadrature.hpp"
#include "slabprobe/indicator/scene.hpp"
#include "slabprobe/indicator/series.hpp"
#include "slabprobe/probe/spherical_wave.hpp"
#include "slabprobe/solver/stiffness.hpp"

namespace slabprobe::run {

namespace {

template <int N>
ProbeIdentityErrors identity_errors(int count, std::mt19937_64& rng) {
  using V = probe::VecN<N>;
  V p = V::Zero();
  p[N - 1] = 1.2;
  V axis = V::Zero();
  axis[0] = 1.0;
  std::uniform_real_distribution<double> lateral(-1.0, 1.0);
  std::uniform_real_distribution<double> depth(0.0, 1.0);

  auto rho = [&](const V& x) {
    const probe::PhasePair ph = probe::phase<N>(x, p, axis);
    return std::complex<double>(ph.phi, ph.psi);
  };
  auto amp = [&](const V& x) { return probe::amplitude<N>(x, p, axis).value(); };

  ProbeIdentityErrors err;
  for (int k = 0; k < count; ++k) {
    V x;
    for (int i = 0; i + 1 < N; ++i) x[i] = lateral(rng);
    x[N - 1] = depth(rng);

    const auto g = probe::phase_gradients<N>(x, p, axis);
    err.eikonal = std::max(err.eikonal, std::abs(g.grad_phi.squaredNorm() - g.grad_psi.squaredNorm()));
    err.orthogonality = std::max(err.orthogonality, std::abs(g.grad_phi.dot(g.grad_psi)));

    constexpr double s1 = 1e-6;
    constexpr double s = 1e-3;
    std::complex<double> transport = 0.0;
    std::complex<double> lap_rho = 0.0;
    const std::complex<double> a = amp(x);
    for (int i = 0; i < N; ++i) {
      V e = V::Zero();
      e[i] = 1.0;
      const std::complex<double> d_rho = (rho(x + s1 * e) - rho(x - s1 * e)) / (2.0 * s1);
      err.gradient_fd = std::max({err.gradient_fd, std::abs(d_rho.real() - g.grad_phi[i]),
                                  std::abs(d_rho.imag() - g.grad_psi[i])});

      const std::complex<double> da =
          (amp(x - 2 * s * e) - 8.0 * amp(x - s * e) + 8.0 * amp(x + s * e) - amp(x + 2 * s * e)) / (12.0 * s);
      lap_rho += (-rho(x - 2 * s * e) + 16.0 * rho(x - s * e) - 30.0 * rho(x) + 16.0 * rho(x + s * e) -
                  rho(x + 2 * s * e)) /
                 (12.0 * s * s);
      transport += std::complex<double>(g.grad_phi[i], g.grad_psi[i]) * da;
    }
    transport += 0.5 * lap_rho * a;
    err.transport = std::max(err.transport, std::abs(transport));
  }
  return err;
}

double cubic(const Vec2& x) { return x.x() * x.x() * x.x() - 3.0 * x.x() * x.y() * x.y(); }
Vec2 cubic_gradient(const Vec2& x) {
  return {3.0 * x.x() * x.x() - 3.0 * x.y() * x.y(), -6.0 * x.x() * x.y()};
}

CheckResult below(std::string name, double value, double threshold) {
  return {std::move(name), value, threshold, value <= threshold};
}

}  // namespace

ProbeIdentityErrors probe_identity_errors(int n, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  switch (n) {
    case 2:
      return identity_errors<2>(count, rng);
    case 3:
      return identity_errors<3>(count, rng);
    case 4:
      return identity_errors<4>(count, rng);
    default:
      throw Error(fmt::format("probe identities are implemented for n = 2, 3, 4, not {}", n));
  }
}

std::vector<ConvergenceLevel> manufactured_convergence(const geometry::SlabGeometry& slab,
                                                       std::span<const double> edges) {
  std::vector<ConvergenceLevel> levels;
  const auto& rule = solver::detail::triangle_rule();
  for (double edge : edges) {
    geometry::MeshOptions options;
    options.target_edge = edge;
    const auto pair = geometry::build_nested_meshes(slab, {}, options);
    const auto system = solver::assemble(pair.full, probe::GammaField{});
    const auto& mesh = *pair.full;
    Eigen::VectorXd data(mesh.vertex_count());
    for (std::size_t i = 0; i < mesh.vertex_count(); ++i) data[i] = cubic(mesh.vertices[i]);
    const Eigen::VectorXd u = system->solve_dirichlet_real(data);

    double l2 = 0.0, h1 = 0.0;
    for (std::size_t t = 0; t < mesh.triangle_count(); ++t) {
      const auto& tri = mesh.triangles[t];
      const Vec2& a = mesh.vertices[tri[0]];
      const Vec2& b = mesh.vertices[tri[1]];
      const Vec2& c = mesh.vertices[tri[2]];
      const double area = mesh.triangle_area(t);
      const auto g = solver::hat_gradients(a, b, c);
      const Vec2 grad_h = u[tri[0]] * g.row(0).transpose() + u[tri[1]] * g.row(1).transpose() +
                          u[tri[2]] * g.row(2).transpose();
      for (std::size_t q = 0; q < rule.weight.size(); ++q) {
        const auto& l = rule.bary[q];
        const Vec2 x = l[0] * a + l[1] * b + l[2] * c;
        const double uh = l[0] * u[tri[0]] + l[1] * u[tri[1]] + l[2] * u[tri[2]];
        l2 += rule.weight[q] * area * std::pow(uh - cubic(x), 2);
        h1 += rule.weight[q] * area * (grad_h - cubic_gradient(x)).squaredNorm();
      }
    }
    levels.push_back({edge, mesh.vertex_count(), std::sqrt(l2), std::sqrt(h1)});
  }
  return levels;
}

std::vector<Vec2> residual_samples(const geometry::SlabGeometry& slab, const Vec2& p, double min_distance,
                                   double spacing) {
  std::vector<Vec2> out;
  const int nx = static_cast<int>(std::floor(2.0 * slab.halfwidth / spacing));
  const int ny = static_cast<int>(std::floor(slab.thickness() / spacing));
  for (int j = 1; j < ny; ++j) {
    for (int i = 1; i < nx; ++i) {
      const Vec2 x(-slab.halfwidth + i * spacing, slab.d1 + j * spacing);
      if ((x - p).norm() >= min_distance) out.push_back(x);
    }
  }
  return out;
}

std::vector<CheckResult> run_property_suites(const RunConfig& config) {
  std::vector<CheckResult> checks;

  for (int n : {2, 3, 4}) {
    const auto e = probe_identity_errors(n, 1000, config.seed + static_cast<std::uint64_t>(n));
    checks.push_back(below(fmt::format("eikonal |grad phi|^2 - |grad psi|^2, n={}", n), e.eikonal, 1e-8));
    checks.push_back(below(fmt::format("eikonal grad phi . grad psi, n={}", n), e.orthogonality, 1e-8));
    checks.push_back(below(fmt::format("phase gradients vs central differences, n={}", n), e.gradient_fd, 1e-6));
    checks.push_back(below(fmt::format("transport residual, n={}", n), e.transport, 1e-6));
  }

  const auto& ind = config.indicator();
  const auto& first = config.probes.probes.front();
  {
    probe::ProbeParams params;
    params.p = first.p;
    params.axis = first.axis;
    params.t = config.sweep.t_lo;
    params.h = ind.grid.h(ind.grid.size() - 1);
    params.delta = ind.delta_ratio * params.t;
    geometry::SlabGeometry near = config.slab;
    near.halfwidth = std::min(near.halfwidth, std::abs(first.p.x()) + 1.0);
    const auto samples = residual_samples(near, first.p, 0.7, 0.05);
    checks.push_back(below("probe residual h^2|L v|/|v| at gamma=1 (samples >= 0.7 from p)",
                           probe::residual_diagnostic(params, probe::GammaField{}, samples), 1e-6));
  }

  {
    geometry::SlabGeometry slab = config.slab;
    slab.halfwidth = 1.0;
    const std::vector<double> edges{0.05, 0.025, 0.0125};
    const auto levels = manufactured_convergence(slab, edges);
    for (std::size_t k = 1; k < levels.size(); ++k) {
      const double ratio = levels[k - 1].l2_error / levels[k].l2_error;
      checks.push_back({fmt::format("L2 error ratio, edge {} -> {}", edges[k - 1], edges[k]), ratio, 3.2,
                        ratio >= 3.2 && ratio <= 4.8});
    }
  }

  {
    const indicator::Scene scene(config.scene_spec());
    double worst = 0.0;
    double min_e = std::numeric_limits<double>::infinity();
    for (double t : {config.sweep.t_lo, 0.5 * (config.sweep.t_lo + config.sweep.t_hi)}) {
      const auto series = indicator::compute_series(scene, first, t, ind);
      for (const auto& e : series.entries) {
        worst = std::max(worst, e.identity_residual);
        min_e = std::min(min_e, e.E);
      }
    }
    checks.push_back(below("energy-gap identity |E - (term_D + term_diff)| / E", worst, 1e-10));
    checks.push_back({"energy gap E >= 0", min_e, 0.0, min_e >= 0.0});

    const auto& sys = *scene.systems().holed;
    std::mt19937_64 rng(config.seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::vector<double> f(sys.node_count(), 0.0), g(sys.node_count(), 0.0);
    for (int v : sys.dirichlet_nodes()) {
      f[v] = unit(rng);
      g[v] = unit(rng);
    }
    const double fg = solver::dtn_pairing(sys, f, g);
    const double gf = solver::dtn_pairing(sys, g, f);
    const double scale = std::sqrt(solver::dtn_pairing(sys, f, f) * solver::dtn_pairing(sys, g, g));
    checks.push_back(below("DtN pairing symmetry |<Lf,g> - <Lg,f>| / scale", std::abs(fg - gf) / scale, 1e-12));
  }

  {
    std::vector<double> x, y_exp, y_scaled;
    for (int k = 0; k < 8; ++k) {
      const double inv_h = k + 3.0;
      x.push_back(inv_h);
      y_exp.push_back(std::log(std::pow(0.3, inv_h)));
      y_scaled.push_back(std::log(5.0 * std::pow(2.0, inv_h)));
    }
    const auto a = indicator::fit_slope(x, y_exp);
    const auto b = indicator::fit_slope(x, y_scaled);
    checks.push_back(below("synthetic fit slope of 0.3^(1/h)", std::abs(a.slope - std::log(0.3)), 1e-12));
    checks.push_back(below("synthetic fit intercept of 5*2^(1/h)", std::abs(b.intercept - std::log(5.0)), 1e-12));
  }
  return checks;
}

void print_checks(std::ostream& out, const std::vector<CheckResult>& checks) {
  std::size_t width = 0;
  for (const auto& c : checks) width = std::max(width, c.name.size());
  for (const auto& c : checks) {
    out << fmt::format("{:<{}}  {:>12.4e}  (threshold {:.1e})  {}\n", c.name, width, c.value, c.threshold,
                       c.pass ? "PASS" : "FAIL");
  }
}

}  // namespace slabprobe::run
