#include "slabprobe/geometry/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <istream>
#include <map>
#include <numbers>
#include <ostream>
#include <random>
#include <string>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "geometry/triangulator.hpp"
#include "slabprobe/error.hpp"

namespace slabprobe::geometry {

namespace {

std::uint64_t hash_bytes(const std::string& bytes) {
  return static_cast<std::uint64_t>(std::hash<std::string>{}(bytes));
}

template <class T>
void append_raw(std::string& buf, const T& value) {
  buf.append(reinterpret_cast<const char*>(&value), sizeof(T));
}

BoundaryTag parse_tag(const std::string& s) {
  if (s == "SLAB_TOP") return BoundaryTag::SlabTop;
  if (s == "SLAB_BOTTOM") return BoundaryTag::SlabBottom;
  if (s == "LATERAL") return BoundaryTag::Lateral;
  if (s == "CAVITY") return BoundaryTag::Cavity;
  throw Error("unknown boundary tag '" + s + "'");
}

}  // namespace

std::string_view to_string(BoundaryTag tag) {
  switch (tag) {
    case BoundaryTag::SlabTop:
      return "SLAB_TOP";
    case BoundaryTag::SlabBottom:
      return "SLAB_BOTTOM";
    case BoundaryTag::Lateral:
      return "LATERAL";
    case BoundaryTag::Cavity:
      return "CAVITY";
  }
  return "?";
}

double TriMesh::triangle_area(std::size_t t) const {
  const auto& tri = triangles[t];
  return 0.5 * cross(vertices[tri[1]] - vertices[tri[0]], vertices[tri[2]] - vertices[tri[0]]);
}

double TriMesh::area() const {
  double total = 0.0;
  for (std::size_t t = 0; t < triangles.size(); ++t) total += triangle_area(t);
  return total;
}

double TriMesh::min_angle_degrees() const {
  double smallest = 180.0;
  for (const auto& tri : triangles) {
    for (int i = 0; i < 3; ++i) {
      const Vec2 u = vertices[tri[(i + 1) % 3]] - vertices[tri[i]];
      const Vec2 v = vertices[tri[(i + 2) % 3]] - vertices[tri[i]];
      const double angle = std::atan2(std::abs(cross(u, v)), u.dot(v));
      smallest = std::min(smallest, angle * 180.0 / std::numbers::pi);
    }
  }
  return smallest;
}

double TriMesh::max_edge_length() const {
  double longest = 0.0;
  for (const auto& tri : triangles) {
    for (int i = 0; i < 3; ++i) {
      longest = std::max(longest, (vertices[tri[(i + 1) % 3]] - vertices[tri[i]]).norm());
    }
  }
  return longest;
}

std::vector<bool> TriMesh::dirichlet_mask() const {
  std::vector<bool> mask(vertices.size(), false);
  for (const auto& e : boundary_edges) {
    if (e.tag == BoundaryTag::Cavity) continue;
    mask[e.a] = true;
    mask[e.b] = true;
  }
  return mask;
}

std::uint64_t TriMesh::hash() const {
  std::string buf;
  buf.reserve(vertices.size() * 16 + triangles.size() * 12 + boundary_edges.size() * 9);
  for (const auto& v : vertices) {
    append_raw(buf, v.x());
    append_raw(buf, v.y());
  }
  for (const auto& t : triangles) {
    for (int i : t) append_raw(buf, i);
  }
  for (const auto& e : boundary_edges) {
    append_raw(buf, e.a);
    append_raw(buf, e.b);
    append_raw(buf, static_cast<std::uint8_t>(e.tag));
  }
  return hash_bytes(buf);
}

NestedMeshPair build_nested_meshes(const SlabGeometry& slab, std::span<const Vec2> cavity_polygon,
                                   const MeshOptions& options) {
  slab.validate();
  const double edge = options.target_edge;
  std::vector<std::string> issues;
  if (!(edge > 0.0)) issues.push_back("target edge must be positive");
  if (!(options.min_angle_degrees > 0.0 && options.min_angle_degrees <= 30.0)) {
    issues.push_back("minimum angle must lie in (0, 30] degrees");
  }
  if (edge > slab.thickness()) issues.push_back("target edge exceeds the slab thickness");
  if (!issues.empty()) throw ValidationError(std::move(issues));

  std::vector<Vec2> polygon(cavity_polygon.begin(), cavity_polygon.end());
  double min_segment = edge;
  if (!polygon.empty()) {
    if (!is_simple(polygon)) throw ValidationError("cavity polygon is self-intersecting");
    if (signed_area(polygon) < 0.0) std::reverse(polygon.begin(), polygon.end());
    Vec2 lo = polygon.front(), hi = polygon.front();
    for (const auto& v : polygon) {
      if (!(v.x() > -slab.halfwidth && v.x() < slab.halfwidth && v.y() > slab.d1 && v.y() < slab.d2)) {
        throw ValidationError("cavity polygon must lie strictly inside the truncated slab");
      }
      lo = lo.cwiseMin(v);
      hi = hi.cwiseMax(v);
    }
    const double feature = 0.5 * std::min(hi.x() - lo.x(), hi.y() - lo.y());
    if (edge > feature) {
      throw ValidationError(fmt::format("mesh too coarse for cavity (target edge {} > feature size {})",
                                        edge, feature));
    }
    for (std::size_t i = 0; i < polygon.size(); ++i) {
      min_segment = std::min(min_segment, (polygon[(i + 1) % polygon.size()] - polygon[i]).norm());
    }
  }

  detail::Triangulator tri(slab.lower_left(), slab.upper_right());
  const double face_edge = options.face_edge > 0.0 ? std::min(options.face_edge, edge) : edge;
  tri.subdivide_hull(face_edge, edge);

  std::vector<int> ids;
  ids.reserve(polygon.size());
  for (const auto& v : polygon) ids.push_back(tri.insert_point(v));

  // Interior seeds on a triangular lattice keep the refinement stage short.
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> jitter(-0.5, 0.5);
  const double row_height = edge * std::sqrt(3.0) / 2.0;
  const double clearance = 0.5 * edge;
  int row = 0;
  for (double y = slab.d1 + row_height; y < slab.d2 - 0.5 * clearance; y += row_height, ++row) {
    const double shift = (row % 2) ? 0.5 * edge : 0.0;
    for (double x = -slab.halfwidth + shift + 0.5 * edge; x < slab.halfwidth; x += edge) {
      Vec2 q(x, y);
      if (options.jitter > 0.0) {
        q += options.jitter * edge * Vec2(jitter(rng), jitter(rng));
      }
      if (q.x() - (-slab.halfwidth) < clearance || slab.halfwidth - q.x() < clearance ||
          q.y() - slab.d1 < clearance || slab.d2 - q.y() < clearance) {
        continue;
      }
      if (!polygon.empty() && polygon_boundary_distance(q, polygon) < clearance) continue;
      tri.insert_point(q);
    }
  }

  for (std::size_t i = 0; i < ids.size(); ++i) {
    tri.add_segment(ids[i], ids[(i + 1) % ids.size()], BoundaryTag::Cavity);
  }
  tri.recover_segments();

  detail::Triangulator::RefineOptions refine;
  refine.max_circumradius = edge / std::sqrt(3.0);
  refine.min_angle_degrees = options.min_angle_degrees;
  refine.min_edge = 1e-3 * min_segment;
  tri.refine(refine);

  auto extraction = tri.extract();

  auto holed = std::make_shared<TriMesh>();
  auto full = std::make_shared<TriMesh>();
  holed->target_edge = full->target_edge = edge;
  full->vertices = extraction.vertices;
  holed->vertices.assign(extraction.vertices.begin(),
                         extraction.vertices.begin() + static_cast<std::ptrdiff_t>(extraction.outside_vertex_count));
  holed->triangles = extraction.outside_triangles;
  full->triangles = extraction.outside_triangles;
  full->triangles.insert(full->triangles.end(), extraction.inside_triangles.begin(),
                         extraction.inside_triangles.end());
  holed->boundary_edges = extraction.hull_edges;
  holed->boundary_edges.insert(holed->boundary_edges.end(), extraction.cavity_edges.begin(),
                               extraction.cavity_edges.end());
  full->boundary_edges = extraction.hull_edges;

  NestedMeshPair pair;
  pair.hole_triangles.resize(extraction.inside_triangles.size());
  for (std::size_t i = 0; i < pair.hole_triangles.size(); ++i) {
    pair.hole_triangles[i] = static_cast<int>(extraction.outside_triangles.size() + i);
  }
  pair.polygon_area = polygon.empty() ? 0.0 : signed_area(polygon);
  pair.holed = std::move(holed);
  pair.full = std::move(full);
  return pair;
}

std::vector<std::string> check_mesh(const TriMesh& mesh) {
  std::vector<std::string> problems;
  const int n = static_cast<int>(mesh.vertices.size());
  std::vector<char> used(mesh.vertices.size(), 0);
  std::map<std::pair<int, int>, int> edge_use;
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tri = mesh.triangles[t];
    for (int v : tri) {
      if (v < 0 || v >= n) {
        problems.push_back(fmt::format("triangle {} references vertex {} out of range", t, v));
        return problems;
      }
      used[v] = 1;
    }
    if (!(mesh.triangle_area(t) > 0.0)) problems.push_back(fmt::format("triangle {} is not positively oriented", t));
    for (int i = 0; i < 3; ++i) {
      const int a = tri[i], b = tri[(i + 1) % 3];
      ++edge_use[{std::min(a, b), std::max(a, b)}];
    }
  }
  std::map<std::pair<int, int>, int> tagged;
  for (const auto& e : mesh.boundary_edges) ++tagged[{std::min(e.a, e.b), std::max(e.a, e.b)}];
  for (const auto& [edge, count] : edge_use) {
    if (count > 2) {
      problems.push_back(fmt::format("edge ({}, {}) shared by {} triangles", edge.first, edge.second, count));
    }
    const auto it = tagged.find(edge);
    const int tags = it == tagged.end() ? 0 : it->second;
    if (count == 1 && tags != 1) {
      problems.push_back(fmt::format("boundary edge ({}, {}) carries {} tags", edge.first, edge.second, tags));
    }
    if (count == 2 && tags != 0) {
      problems.push_back(fmt::format("interior edge ({}, {}) is tagged", edge.first, edge.second));
    }
  }
  for (const auto& [edge, count] : tagged) {
    if (!edge_use.count(edge)) {
      problems.push_back(fmt::format("tagged edge ({}, {}) is not a mesh edge", edge.first, edge.second));
    }
  }
  for (int v = 0; v < n; ++v) {
    if (!used[v]) problems.push_back(fmt::format("vertex {} is unreferenced", v));
  }
  return problems;
}

void write_mesh(std::ostream& out, const TriMesh& mesh) {
  fmt::print(out, "slabprobe-mesh 1\nvertices {}\n", mesh.vertices.size());
  for (const auto& v : mesh.vertices) fmt::print(out, "{:.17g} {:.17g}\n", v.x(), v.y());
  fmt::print(out, "triangles {}\n", mesh.triangles.size());
  for (const auto& t : mesh.triangles) fmt::print(out, "{} {} {}\n", t[0], t[1], t[2]);
  fmt::print(out, "boundary_edges {}\n", mesh.boundary_edges.size());
  for (const auto& e : mesh.boundary_edges) fmt::print(out, "{} {} {}\n", e.a, e.b, to_string(e.tag));
}

TriMesh read_mesh(std::istream& in) {
  auto expect = [&](const std::string& word) {
    std::string token;
    if (!(in >> token) || token != word) throw Error("mesh file: expected '" + word + "'");
  };
  TriMesh mesh;
  expect("slabprobe-mesh");
  int version = 0;
  in >> version;
  if (version != 1) throw Error("mesh file: unsupported version");
  std::size_t count = 0;
  expect("vertices");
  in >> count;
  mesh.vertices.resize(count);
  for (auto& v : mesh.vertices) in >> v.x() >> v.y();
  expect("triangles");
  in >> count;
  mesh.triangles.resize(count);
  for (auto& t : mesh.triangles) in >> t[0] >> t[1] >> t[2];
  expect("boundary_edges");
  in >> count;
  mesh.boundary_edges.resize(count);
  for (auto& e : mesh.boundary_edges) {
    std::string tag;
    in >> e.a >> e.b >> tag;
    e.tag = parse_tag(tag);
  }
  if (!in) throw Error("mesh file: truncated input");
  return mesh;
}

}  // namespace slabprobe::geometry
