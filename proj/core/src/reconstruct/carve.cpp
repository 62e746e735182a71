#include "slabprobe/reconstruct/carve.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>

#include "slabprobe/error.hpp"

namespace slabprobe::reconstruct {

std::size_t RegionMask::carved_count() const {
  return static_cast<std::size_t>(std::count(carved.begin(), carved.end(), std::uint8_t{1}));
}

RegionMask carve_balls(const geometry::SlabGeometry& slab, std::span<const Ball> balls, double resolution) {
  if (!(resolution > 0.0)) throw ValidationError("carve resolution must be positive");
  RegionMask mask;
  mask.origin = slab.lower_left();
  mask.nx = std::max(1, static_cast<int>(std::ceil(2.0 * slab.halfwidth / resolution)));
  mask.ny = std::max(1, static_cast<int>(std::ceil(slab.thickness() / resolution)));
  mask.dx = 2.0 * slab.halfwidth / mask.nx;
  mask.dy = slab.thickness() / mask.ny;
  mask.carved.assign(static_cast<std::size_t>(mask.nx) * mask.ny, 0);
  for (int j = 0; j < mask.ny; ++j) {
    for (int i = 0; i < mask.nx; ++i) {
      const Vec2 c = mask.center(i, j);
      for (const Ball& b : balls) {
        if ((c - b.center).norm() < b.radius) {
          mask.carved[static_cast<std::size_t>(j) * mask.nx + i] = 1;
          break;
        }
      }
    }
  }
  return mask;
}

RegionMask carve(const geometry::SlabGeometry& slab, const DistanceMap& map, double resolution, double margin) {
  std::vector<Ball> balls;
  for (const auto& r : map.records) {
    if (r.status == ProbeStatus::Ok) balls.push_back({r.p, r.d_hat - margin});
  }
  if (balls.empty()) throw Error("nothing to carve: no probe detected the cavity");
  return carve_balls(slab, balls, resolution);
}

namespace {

// Grid-edge identifiers: horizontal edge between centers (i,j)-(i+1,j) and
// vertical edge between (i,j)-(i,j+1).
struct EdgeKey {
  int i, j;
  bool vertical;
  auto operator<=>(const EdgeKey&) const = default;
};

Vec2 edge_point(const RegionMask& m, const EdgeKey& e) {
  const Vec2 a = m.center(e.i, e.j);
  const Vec2 b = e.vertical ? m.center(e.i, e.j + 1) : m.center(e.i + 1, e.j);
  return 0.5 * (a + b);
}

}  // namespace

BoundaryEstimate extract_boundary(const RegionMask& mask) {
  const std::size_t carved = mask.carved_count();
  if (carved == 0 || carved == mask.carved.size()) {
    throw Error("cannot extract a boundary from a mask with a single flag");
  }

  // Segments per square, with saddles split so that carved corners stay apart.
  std::map<EdgeKey, std::vector<EdgeKey>> adjacency;
  std::vector<EdgeKey> order;
  auto link = [&](const EdgeKey& a, const EdgeKey& b) {
    for (const auto& k : {a, b}) {
      auto [it, inserted] = adjacency.try_emplace(k);
      if (inserted) order.push_back(k);
    }
    adjacency[a].push_back(b);
    adjacency[b].push_back(a);
  };
  for (int j = 0; j + 1 < mask.ny; ++j) {
    for (int i = 0; i + 1 < mask.nx; ++i) {
      const bool a = mask.at(i, j), b = mask.at(i + 1, j), c = mask.at(i + 1, j + 1), d = mask.at(i, j + 1);
      const EdgeKey bottom{i, j, false}, right{i + 1, j, true}, top{i, j + 1, false}, left{i, j, true};
      std::vector<EdgeKey> hits;
      if (a != b) hits.push_back(bottom);
      if (b != c) hits.push_back(right);
      if (c != d) hits.push_back(top);
      if (d != a) hits.push_back(left);
      if (hits.size() == 2) {
        link(hits[0], hits[1]);
      } else if (hits.size() == 4) {
        if (a) {  // a and c carved
          link(bottom, left);
          link(top, right);
        } else {  // b and d carved
          link(bottom, right);
          link(top, left);
        }
      }
    }
  }

  BoundaryEstimate out;
  std::map<EdgeKey, bool> used;
  auto walk = [&](EdgeKey start) {
    Polyline line;
    EdgeKey cur = start;
    line.points.push_back(edge_point(mask, cur));
    used[cur] = true;
    for (;;) {
      const auto& nbrs = adjacency[cur];
      const EdgeKey* next = nullptr;
      for (const auto& n : nbrs) {
        if (!used[n]) {
          next = &n;
          break;
        }
      }
      if (!next) {
        // Closed when the last vertex links back to the start.
        line.closed = line.points.size() > 2 &&
                      std::find(nbrs.begin(), nbrs.end(), start) != nbrs.end() && !(cur == start);
        break;
      }
      cur = *next;
      used[cur] = true;
      line.points.push_back(edge_point(mask, cur));
    }
    if (line.closed) line.points.push_back(line.points.front());
    out.curves.push_back(std::move(line));
  };
  // Open curves first (start at an end), then closed loops.
  for (const auto& k : order) {
    if (!used[k] && adjacency[k].size() == 1) walk(k);
  }
  for (const auto& k : order) {
    if (!used[k]) walk(k);
  }
  return out;
}

EvaluationMetrics evaluate(const BoundaryEstimate& estimate, const geometry::CavityShape& truth,
                           std::span<const Vec2> probe_points, double band) {
  EvaluationMetrics m;
  m.band = band;
  const auto boundary = geometry::polygonize_cavity(truth, 1024).vertices;
  const auto [lo, hi] = geometry::cavity_bounds(truth);
  const double cy = 0.5 * (lo.y() + hi.y());
  double mean_y = 0.0;
  for (const Vec2& p : probe_points) mean_y += p.y();
  const bool from_above = probe_points.empty() || mean_y / static_cast<double>(probe_points.size()) > cy;

  // Extreme boundary height of the cavity along the vertical line through x.
  auto extreme_y = [&](double x, double& out) {
    bool found = false;
    for (std::size_t k = 0; k < boundary.size(); ++k) {
      const Vec2& a = boundary[k];
      const Vec2& b = boundary[(k + 1) % boundary.size()];
      if ((a.x() - x) * (b.x() - x) > 0.0 || a.x() == b.x()) continue;
      const double y = a.y() + (x - a.x()) / (b.x() - a.x()) * (b.y() - a.y());
      if (!found || (from_above ? y > out : y < out)) out = y;
      found = true;
    }
    return found;
  };

  for (const auto& curve : estimate.curves) {
    for (const Vec2& v : curve.points) {
      if (v.x() <= lo.x() || v.x() >= hi.x()) continue;
      double y = 0.0;
      if (!extreme_y(v.x(), y)) continue;
      if (from_above ? v.y() < y : v.y() > y) continue;
      m.hausdorff = std::max(m.hausdorff, geometry::boundary_distance(v, truth));
      ++m.vertices_evaluated;
    }
  }

  std::size_t covered = 0;
  for (const Vec2& b : boundary) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& curve : estimate.curves) {
      for (std::size_t k = 0; k + 1 < curve.points.size(); ++k) {
        best = std::min(best, geometry::point_segment_distance(b, curve.points[k], curve.points[k + 1]));
      }
      if (curve.points.size() == 1) best = std::min(best, (b - curve.points[0]).norm());
    }
    if (best <= band) ++covered;
  }
  m.coverage = boundary.empty() ? 0.0 : static_cast<double>(covered) / static_cast<double>(boundary.size());
  return m;
}

}  // namespace slabprobe::reconstruct
