#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "slabprobe/error.hpp"
#include "slabprobe/geometry/cavity.hpp"
#include "slabprobe/geometry/mesh.hpp"

using namespace slabprobe;
using namespace slabprobe::geometry;

namespace {

double shoelace(const std::vector<Vec2>& v) {
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Vec2& a = v[i];
    const Vec2& b = v[(i + 1) % v.size()];
    s += a.x() * b.y() - b.x() * a.y();
  }
  return 0.5 * s;
}

}  // namespace

TEST_CASE("slab invariants are enforced") {
  const SlabGeometry good{0.0, 1.0, 1.0};
  const SlabGeometry flat{1.0, 1.0, 1.0};
  const SlabGeometry narrow{0.0, 1.0, 0.0};
  CHECK_NOTHROW(good.validate());
  CHECK_THROWS_AS(flat.validate(), ValidationError);
  CHECK_THROWS_AS(narrow.validate(), ValidationError);
}

TEST_CASE("disc with four segments is a square on the circle") {
  const auto poly = polygonize_cavity(Disc{{0.0, 0.5}, 0.2}, 4);
  REQUIRE(poly.vertices.size() == 4);
  for (const auto& v : poly.vertices) CHECK((v - Vec2(0.0, 0.5)).norm() == doctest::Approx(0.2).epsilon(1e-14));
  CHECK(shoelace(poly.vertices) == doctest::Approx(2.0 * 0.2 * 0.2).epsilon(1e-12));
}

TEST_CASE("constant radial star matches the disc") {
  const auto star = polygonize_cavity(RadialStar{{0.0, 0.5}, {0.2}, {}}, 32);
  const auto disc = polygonize_cavity(Disc{{0.0, 0.5}, 0.2}, 32);
  REQUIRE(star.vertices.size() == disc.vertices.size());
  for (std::size_t i = 0; i < star.vertices.size(); ++i) {
    CHECK((star.vertices[i] - disc.vertices[i]).norm() < 1e-14);
  }
}

TEST_CASE("ellipse polygon area is close to pi a b") {
  const auto poly = polygonize_cavity(Ellipse{{0.0, 0.5}, 0.3, 0.1, 0.0}, 64);
  const double exact = std::numbers::pi * 0.3 * 0.1;
  CHECK(std::abs(shoelace(poly.vertices) - exact) / exact < 0.005);
}

TEST_CASE("cavity distance") {
  const Disc disc{{0.0, 0.5}, 0.2};
  CHECK(cavity_distance({0.0, 1.2}, disc) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(cavity_distance({0.2, 0.5}, disc) == doctest::Approx(0.0));

  SUBCASE("polygon agrees with dense boundary sampling") {
    const Polygon poly{{{-0.3, 0.3}, {0.2, 0.25}, {0.35, 0.5}, {0.0, 0.45}, {-0.25, 0.7}}};
    const Vec2 p(0.1, 1.3);
    const auto& v = poly.vertices;
    const int per_edge = 200000;
    double brute = std::numeric_limits<double>::infinity();
    for (std::size_t e = 0; e < v.size(); ++e) {
      const Vec2& a = v[e];
      const Vec2& b = v[(e + 1) % v.size()];
      for (int k = 0; k <= per_edge; ++k) brute = std::min(brute, (a + (b - a) * (double(k) / per_edge) - p).norm());
    }
    CHECK(std::abs(cavity_distance(p, poly) - brute) < 1e-4);
  }
}

TEST_CASE("cavity validation against the slab") {
  const SlabGeometry slab{0.0, 1.0, 1.0};
  const Disc inside{{0.0, 0.5}, 0.2};
  const Disc crossing{{0.0, 0.9}, 0.2};
  const Polygon clockwise{{{0.0, 0.2}, {0.0, 0.6}, {0.3, 0.4}}};
  CHECK_NOTHROW(validate_cavity(inside, slab));
  CHECK_THROWS_AS(validate_cavity(crossing, slab), ValidationError);
  CHECK_THROWS_AS(validate_cavity(clockwise, slab), ValidationError);
}

TEST_CASE("empty cavity gives identical meshes") {
  MeshOptions opt;
  opt.target_edge = 0.1;
  const auto pair = build_nested_meshes({0.0, 1.0, 1.0}, {}, opt);
  CHECK_FALSE(pair.has_cavity());
  CHECK(pair.holed->vertex_count() == pair.full->vertex_count());
  CHECK(pair.holed->triangle_count() == pair.full->triangle_count());
  CHECK(check_mesh(*pair.full).empty());
}

TEST_CASE("nested meshes around a disc") {
  const SlabGeometry slab{0.0, 1.0, 1.0};
  const auto poly = polygonize_cavity(Disc{{0.0, 0.5}, 0.2}, 128);
  MeshOptions opt;
  opt.target_edge = 0.05;
  const auto pair = build_nested_meshes(slab, poly.vertices, opt);
  const auto& holed = *pair.holed;
  const auto& full = *pair.full;

  CHECK(check_mesh(holed).empty());
  CHECK(check_mesh(full).empty());
  CHECK(holed.min_angle_degrees() >= 20.0 - 1e-9);

  for (std::size_t i = 0; i < holed.vertex_count(); ++i) REQUIRE(holed.vertices[i] == full.vertices[i]);
  for (std::size_t t = 0; t < holed.triangle_count(); ++t) REQUIRE(holed.triangles[t] == full.triangles[t]);
  CHECK(pair.hole_triangles.size() == full.triangle_count() - holed.triangle_count());

  double hole_area = 0.0;
  for (int t : pair.hole_triangles) hole_area += full.triangle_area(static_cast<std::size_t>(t));
  const double exact = shoelace(poly.vertices);
  CHECK(std::abs(hole_area - exact) / exact < 1e-12);
  CHECK(full.area() == doctest::Approx(slab.area()).epsilon(1e-12));

  for (const auto& e : holed.boundary_edges) {
    if (e.tag != BoundaryTag::Cavity) continue;
    const Vec2 mid = 0.5 * (holed.vertices[e.a] + holed.vertices[e.b]);
    CHECK(polygon_boundary_distance(mid, poly.vertices) < 1e-12);
  }
}

TEST_CASE("mesh text format round trip") {
  MeshOptions opt;
  opt.target_edge = 0.1;
  const auto pair = build_nested_meshes({0.0, 1.0, 1.0}, polygonize_cavity(Disc{{0.0, 0.5}, 0.2}, 16).vertices, opt);
  std::stringstream s;
  write_mesh(s, *pair.holed);
  const TriMesh back = read_mesh(s);
  CHECK(back.hash() == pair.holed->hash());
  CHECK(back.boundary_edges.size() == pair.holed->boundary_edges.size());
}
