#include <doctest.h>

#include <random>

#include "scenes.hpp"
#include "slabprobe/geometry/mesh.hpp"
#include "slabprobe/indicator/scene.hpp"
#include "slabprobe/solver/energy_gap.hpp"
#include "slabprobe/solver/stiffness.hpp"
#include "slabprobe/solver/system_cache.hpp"

using namespace slabprobe;
using namespace slabprobe::solver;

namespace {

std::shared_ptr<const geometry::TriMesh> slab_mesh(double edge, bool with_cavity = false) {
  const geometry::SlabGeometry slab{0.0, 1.0, 1.0};
  geometry::MeshOptions opt;
  opt.target_edge = edge;
  std::vector<Vec2> poly;
  if (with_cavity) poly = geometry::polygonize_cavity(geometry::Disc{{0.0, 0.5}, 0.2}, 64).vertices;
  return geometry::build_nested_meshes(slab, poly, opt).full;
}

}  // namespace

TEST_CASE("reference element matrix") {
  const Eigen::Matrix3d k = element_matrix({0, 0}, {1, 0}, {0, 1}, 1.0);
  Eigen::Matrix3d expected;
  expected << 1.0, -0.5, -0.5, -0.5, 0.5, 0.0, -0.5, 0.0, 0.5;
  CHECK((k - expected).norm() < 1e-15);
  CHECK(k.rowwise().sum().norm() < 1e-15);
  CHECK((element_matrix({0, 0}, {1, 0}, {0, 1}, 3.5) - 3.5 * k).norm() < 1e-14);
}

TEST_CASE("assembled matrix is symmetric and scales with gamma") {
  const auto mesh = slab_mesh(0.1);
  const auto sys = assemble(mesh, probe::GammaField({{{0.0, 0.5}, 0.3, 0.7}}, 1.0));
  const SparseMatrix& k = sys->matrix();
  CHECK((SparseMatrix(k.transpose()) - k).norm() <= 1e-14 * k.norm());

  const auto one = assemble(mesh, probe::GammaField{});
  const auto scaled = assemble(mesh, probe::GammaField::constant(2.5));
  CHECK((scaled->matrix() - 2.5 * one->matrix()).norm() <= 1e-14 * scaled->matrix().norm());
}

TEST_CASE("P1 reproduces constants and linear functions") {
  const auto mesh = slab_mesh(0.1);
  const auto sys = assemble(mesh, probe::GammaField{});
  std::vector<std::complex<double>> data(mesh->vertex_count());
  for (std::size_t i = 0; i < data.size(); ++i) {
    const Vec2& x = mesh->vertices[i];
    data[i] = {2.0 * x.x() - 3.0 * x.y() + 0.5, 1.7};
  }
  const FieldSolution u = solve_dirichlet(*sys, data);
  for (std::size_t i = 0; i < data.size(); ++i) {
    CHECK(std::abs(u.at(i) - data[i]) < 1e-10);
  }

  SUBCASE("constant with variable gamma") {
    const auto bumpy = assemble(mesh, probe::GammaField({{{0.0, 0.5}, 0.3, 0.7}}, 1.0));
    std::vector<std::complex<double>> c(mesh->vertex_count(), {3.0, -1.0});
    const FieldSolution v = solve_dirichlet(*bumpy, c);
    for (std::size_t i = 0; i < c.size(); ++i) CHECK(std::abs(v.at(i) - c[i]) < 1e-12);
    CHECK(dirichlet_energy(*bumpy, v) == doctest::Approx(0.0));
  }
}

TEST_CASE("energy of a linear field") {
  const auto mesh = slab_mesh(0.1);
  const auto sys = assemble(mesh, probe::GammaField{});
  FieldSolution f;
  f.re.resize(static_cast<Eigen::Index>(mesh->vertex_count()));
  f.im = Eigen::VectorXd::Zero(f.re.size());
  for (std::size_t i = 0; i < mesh->vertex_count(); ++i) f.re[i] = 3.0 * mesh->vertices[i].x();
  CHECK(dirichlet_energy(*sys, f) == doctest::Approx(9.0 * mesh->area()).epsilon(1e-12));

  SUBCASE("random field agrees with an element loop") {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> g;
    for (Eigen::Index i = 0; i < f.re.size(); ++i) {
      f.re[i] = g(rng);
      f.im[i] = g(rng);
    }
    double brute = 0.0;
    for (const auto& t : mesh->triangles) {
      const Eigen::Matrix3d ke = element_matrix(mesh->vertices[t[0]], mesh->vertices[t[1]], mesh->vertices[t[2]], 1.0);
      for (const auto* part : {&f.re, &f.im}) {
        const Eigen::Vector3d v((*part)[t[0]], (*part)[t[1]], (*part)[t[2]]);
        brute += v.dot(ke * v);
      }
    }
    CHECK(dirichlet_energy(*sys, f) == doctest::Approx(brute).epsilon(1e-12));
  }
}

TEST_CASE("energy gap vanishes without a cavity") {
  const indicator::Scene scene(testing::empty_scene(1.0, 0.1));
  std::vector<std::complex<double>> data(scene.meshes().full->vertex_count());
  for (std::size_t i = 0; i < data.size(); ++i) data[i] = {std::sin(3.0 * scene.meshes().full->vertices[i].x()), 0.5};
  const auto r = energy_gap(scene.systems(), data);
  CHECK(r.E == 0.0);
}

TEST_CASE("energy gap identity with random data") {
  const indicator::Scene scene(testing::disc_scene(1.0, 0.08));
  const auto& mesh = *scene.meshes().full;
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 3; ++trial) {
    std::vector<std::complex<double>> data(mesh.vertex_count());
    const auto mask = mesh.dirichlet_mask();
    for (std::size_t i = 0; i < data.size(); ++i) {
      if (mask[i]) data[i] = {u(rng), u(rng)};
    }
    EnergyGapFields fields;
    const auto r = energy_gap(scene.systems(), data, &fields);
    CHECK(r.E >= 0.0);
    CHECK(std::abs(r.E - (r.term_D + r.term_diff)) <= 1e-10 * r.E);

    const double e_full = dirichlet_energy(*scene.systems().full, fields.v);
    const double e_holed = dirichlet_energy(*scene.systems().holed, fields.u);
    CHECK(e_full - e_holed == doctest::Approx(r.E).epsilon(1e-8));
  }
}

TEST_CASE("DtN pairing is symmetric") {
  const indicator::Scene scene(testing::disc_scene(1.0, 0.1));
  const auto& sys = *scene.systems().holed;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> f(sys.node_count(), 0.0), g(sys.node_count(), 0.0);
  for (int v : sys.dirichlet_nodes()) {
    f[v] = u(rng);
    g[v] = u(rng);
  }
  const double fg = dtn_pairing(sys, f, g);
  CHECK(std::abs(fg - dtn_pairing(sys, g, f)) <= 1e-12 * std::abs(fg));
  CHECK(dtn_pairing(sys, f, f) > 0.0);
}

TEST_CASE("factorization cache") {
  SystemCache cache;
  const auto mesh = slab_mesh(0.1, true);
  const auto a = cache.get(mesh, probe::GammaField{});
  const auto b = cache.get(mesh, probe::GammaField{});
  CHECK(a.get() == b.get());
  CHECK(cache.hits() == 1);
  CHECK(cache.misses() == 1);
  const auto c = cache.get(mesh, probe::GammaField::constant(2.0));
  CHECK(c.get() != a.get());
  CHECK(cache.size() == 2);
}
