#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "slabprobe/error.hpp"
#include "slabprobe/reconstruct/carve.hpp"
#include "slabprobe/reconstruct/sweep.hpp"

using namespace slabprobe;
using namespace slabprobe::reconstruct;

namespace {

const geometry::SlabGeometry kSlab{0.0, 1.0, 1.0};

DistanceMap map_of(std::vector<std::pair<Vec2, double>> entries) {
  DistanceMap m;
  int id = 0;
  for (const auto& [p, d] : entries) {
    DistanceRecord r;
    r.probe_id = id++;
    r.p = p;
    r.status = ProbeStatus::Ok;
    r.d_hat = d;
    m.records.push_back(r);
  }
  return m;
}

bool segments_cross(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
  auto orient = [](const Vec2& p, const Vec2& q, const Vec2& r) {
    const double v = (q.x() - p.x()) * (r.y() - p.y()) - (q.y() - p.y()) * (r.x() - p.x());
    return (v > 0) - (v < 0);
  };
  return orient(a, b, c) * orient(a, b, d) < 0 && orient(c, d, a) * orient(c, d, b) < 0;
}

}  // namespace

TEST_CASE("probe line and probe validation") {
  const auto set = make_probe_line({{-0.4, 1.2}, {0.4, 1.2}, 9, {1.0, 0.0}});
  REQUIRE(set.probes.size() == 9);
  CHECK(set.probes[4].p.x() == doctest::Approx(0.0));
  CHECK(set.probes[8].id == 8);
  CHECK_NOTHROW(validate_probes(set, kSlab));

  ProbeSet bad = set;
  bad.probes[3].p = {0.0, 0.5};
  CHECK_THROWS_WITH_AS(validate_probes(bad, kSlab), doctest::Contains("3"), ValidationError);
}

TEST_CASE("carving one ball is the disc cap") {
  const Vec2 p(0.0, 1.2);
  const auto mask = carve(kSlab, map_of({{p, 0.5}}), 0.02, 0.0);
  CHECK(mask.nx == 100);
  CHECK(mask.ny == 50);
  for (int j = 0; j < mask.ny; ++j) {
    for (int i = 0; i < mask.nx; ++i) CHECK(mask.at(i, j) == ((mask.center(i, j) - p).norm() < 0.5));
  }
  CHECK(mask.carved_count() > 0);
}

TEST_CASE("carving is a union: monotone and order independent") {
  std::vector<std::pair<Vec2, double>> entries{{{-0.3, 1.2}, 0.55}, {{0.0, 1.2}, 0.5}, {{0.3, 1.2}, 0.55}};
  const auto all = carve(kSlab, map_of(entries), 0.02, 0.01);
  const auto fewer = carve(kSlab, map_of({entries[0], entries[2]}), 0.02, 0.01);
  for (std::size_t k = 0; k < all.carved.size(); ++k) {
    if (fewer.carved[k]) CHECK(all.carved[k]);
  }
  std::reverse(entries.begin(), entries.end());
  CHECK(carve(kSlab, map_of(entries), 0.02, 0.01).carved == all.carved);
  CHECK_THROWS_WITH_AS(carve(kSlab, DistanceMap{}, 0.02, 0.0), doctest::Contains("nothing to carve"), Error);
}

TEST_CASE("half-plane mask gives one straight polyline") {
  RegionMask mask;
  mask.origin = {-1.0, 0.0};
  mask.dx = mask.dy = 0.1;
  mask.nx = 20;
  mask.ny = 10;
  mask.carved.assign(200, 0);
  for (int j = 6; j < 10; ++j) {
    for (int i = 0; i < 20; ++i) mask.carved[j * 20 + i] = 1;
  }
  const auto b = extract_boundary(mask);
  REQUIRE(b.curves.size() == 1);
  CHECK_FALSE(b.curves[0].closed);
  for (const auto& v : b.curves[0].points) CHECK(v.y() == doctest::Approx(0.6));

  mask.carved.assign(200, 1);
  CHECK_THROWS_AS(extract_boundary(mask), Error);
}

TEST_CASE("disc-cap boundary: vertices on transition edges, no self-intersection") {
  const auto mask = carve(kSlab, map_of({{{0.1, 1.2}, 0.6}}), 0.02, 0.0);
  const auto b = extract_boundary(mask);
  REQUIRE(b.curves.size() == 1);
  const auto& pts = b.curves[0].points;
  REQUIRE(pts.size() > 10);
  for (const auto& v : pts) {
    const double fi = (v.x() - mask.origin.x()) / mask.dx - 0.5;
    const double fj = (v.y() - mask.origin.y()) / mask.dy - 0.5;
    const bool on_row = std::abs(fj - std::round(fj)) < 1e-9;
    int i0, j0, i1, j1;
    if (on_row) {
      j0 = j1 = static_cast<int>(std::round(fj));
      i0 = static_cast<int>(std::floor(fi));
      i1 = i0 + 1;
    } else {
      i0 = i1 = static_cast<int>(std::round(fi));
      j0 = static_cast<int>(std::floor(fj));
      j1 = j0 + 1;
    }
    REQUIRE(i0 >= 0);
    REQUIRE(j0 >= 0);
    REQUIRE(i1 < mask.nx);
    REQUIRE(j1 < mask.ny);
    CHECK(mask.at(i0, j0) != mask.at(i1, j1));
  }
  for (std::size_t a = 0; a + 1 < pts.size(); ++a) {
    for (std::size_t c = a + 2; c + 1 < pts.size(); ++c) {
      CHECK_FALSE(segments_cross(pts[a], pts[a + 1], pts[c], pts[c + 1]));
    }
  }
}

TEST_CASE("evaluation metrics") {
  const geometry::Disc disc{{0.0, 0.5}, 0.2};
  const auto poly = geometry::polygonize_cavity(disc, 256);
  BoundaryEstimate exact;
  exact.curves.push_back({poly.vertices, true});
  const std::vector<Vec2> probes{{0.0, 1.2}};
  const auto m = evaluate(exact, disc, probes, 0.01);
  CHECK(m.hausdorff < 1e-3);
  CHECK(m.vertices_evaluated > 0);

  const auto mask = carve(kSlab, map_of({{{0.0, 1.2}, 0.5}}), 0.01, 0.0);
  const auto est = extract_boundary(mask);
  const auto mc = evaluate(est, disc, probes, 0.03);
  CHECK(mc.coverage < 1.0);
  // The cap meets the disc only at its top; the widest gap over the disc's
  // horizontal extent is at x = 0.2.
  const double gap = std::hypot(0.2, 1.2 - std::sqrt(0.25 - 0.04) - 0.5) - 0.2;
  CHECK(mc.hausdorff == doctest::Approx(gap).epsilon(0.1));
}
