#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "slabprobe/geometry/cavity.hpp"
#include "slabprobe/geometry/vec.hpp"

namespace slabprobe::geometry {

enum class BoundaryTag : std::uint8_t { SlabTop = 0, SlabBottom = 1, Lateral = 2, Cavity = 3 };

std::string_view to_string(BoundaryTag tag);

struct BoundaryEdge {
  int a = 0;
  int b = 0;
  BoundaryTag tag = BoundaryTag::SlabTop;
};

/// Conforming, positively oriented P1 triangulation with tagged boundary edges.
struct TriMesh {
  std::vector<Vec2> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::vector<BoundaryEdge> boundary_edges;
  double target_edge = 0.0;

  std::size_t vertex_count() const { return vertices.size(); }
  std::size_t triangle_count() const { return triangles.size(); }

  double triangle_area(std::size_t t) const;
  double area() const;
  double min_angle_degrees() const;
  double max_edge_length() const;

  /// Per-vertex flag: true for vertices on a slab face or lateral face.
  std::vector<bool> dirichlet_mask() const;

  /// Deterministic content hash over coordinates, connectivity and tags.
  std::uint64_t hash() const;
};

/// Holed mesh of the slab minus the cavity, and the full slab mesh obtained by
/// appending the cavity triangles. The holed mesh uses the vertex prefix
/// [0, holed->vertex_count()) and the triangle prefix [0, holed->triangle_count())
/// of the full mesh.
struct NestedMeshPair {
  std::shared_ptr<const TriMesh> holed;
  std::shared_ptr<const TriMesh> full;
  std::vector<int> hole_triangles;  ///< indices into full->triangles
  double polygon_area = 0.0;        ///< area of the meshed cavity polygon

  bool has_cavity() const { return !hole_triangles.empty(); }
};

struct MeshOptions {
  double target_edge = 0.05;
  double min_angle_degrees = 20.0;
  /// Node spacing along the two slab faces; 0 means target_edge. Finer face
  /// spacing resolves boundary data that vary faster than the interior field.
  double face_edge = 0.0;
  /// Relative amplitude of the deterministic jitter applied to interior seed
  /// points; 0 disables jitter.
  double jitter = 0.0;
  std::uint64_t seed = 0;
};

/// Constrained Delaunay meshing of the truncated slab with the cavity polygon
/// as an internal constraint, refined to the target edge and angle floor.
/// An empty polygon yields holed == full.
NestedMeshPair build_nested_meshes(const SlabGeometry& slab, std::span<const Vec2> cavity_polygon,
                                   const MeshOptions& options);

/// Structural problems found by check_mesh; empty when the mesh is valid.
std::vector<std::string> check_mesh(const TriMesh& mesh);

/// ASCII export. Layout:
///   slabprobe-mesh 1
///   vertices <N>          then N lines "x y"
///   triangles <M>         then M lines "i j k" (0-based, counterclockwise)
///   boundary_edges <B>    then B lines "i j TAG" with TAG in
///                         {SLAB_TOP, SLAB_BOTTOM, LATERAL, CAVITY}
/// Coordinates are written with 17 significant digits.
void write_mesh(std::ostream& out, const TriMesh& mesh);
TriMesh read_mesh(std::istream& in);

}  // namespace slabprobe::geometry
