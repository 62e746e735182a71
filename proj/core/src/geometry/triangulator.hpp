#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "slabprobe/geometry/mesh.hpp"
#include "slabprobe/geometry/vec.hpp"

namespace slabprobe::geometry::detail {

// Incremental constrained Delaunay triangulation of an axis-aligned rectangle
// with Ruppert-style quality refinement. Edges carry an optional BoundaryTag;
// tagged edges are constraints and are never crossed by an insertion cavity.
class Triangulator {
 public:
  static constexpr std::int8_t kUntagged = -1;

  Triangulator(const Vec2& lower_left, const Vec2& upper_right);

  /// Splits the horizontal rectangle sides into pieces no longer than
  /// face_length and the vertical sides into pieces no longer than side_length.
  void subdivide_hull(double face_length, double side_length);

  /// Inserts a free point strictly inside the rectangle. Returns the vertex id
  /// (an existing id if the point coincides with a vertex).
  int insert_point(const Vec2& p);

  /// Registers a constraint between two existing vertices. Missing constraints
  /// are recovered by midpoint splitting in recover_segments().
  void add_segment(int a, int b, BoundaryTag tag);
  void recover_segments();

  struct RefineOptions {
    double max_circumradius = 0.0;
    double min_angle_degrees = 20.0;
    double min_edge = 0.0;          ///< triangles/segments below this are not split
    std::size_t max_vertices = 4'000'000;
  };
  void refine(const RefineOptions& options);

  /// Triangles reachable from the hull without crossing a tag == Cavity edge
  /// are "outside" (true); the rest lie in the cavity.
  struct Extraction {
    std::vector<Vec2> vertices;
    std::vector<std::array<int, 3>> outside_triangles;
    std::vector<std::array<int, 3>> inside_triangles;
    std::vector<BoundaryEdge> hull_edges;
    std::vector<BoundaryEdge> cavity_edges;  ///< oriented as seen from outside triangles
    std::size_t outside_vertex_count = 0;
  };
  Extraction extract() const;

  std::size_t vertex_count() const { return points_.size(); }
  const Vec2& point(int v) const { return points_[v]; }

 private:
  struct Tri {
    std::array<int, 3> v{};
    std::array<int, 3> nbr{-1, -1, -1};
    std::array<std::int8_t, 3> tag{kUntagged, kUntagged, kUntagged};
    bool alive = true;
  };

  struct Location {
    enum class Kind { Inside, OnEdge, OnVertex, Outside, Blocked } kind = Kind::Inside;
    int tri = -1;
    int edge = -1;    // OnEdge/Blocked: local edge index
    int vertex = -1;  // OnVertex
  };

  struct Split {
    int a = -1;
    int b = -1;
    std::int8_t tag = kUntagged;
  };

  using SegmentKey = std::pair<int, int>;
  static SegmentKey key(int a, int b) { return a < b ? SegmentKey{a, b} : SegmentKey{b, a}; }

  int new_triangle(int a, int b, int c);
  void kill_triangle(int t);
  int local_index(const Tri& t, int vertex) const;
  int edge_of(const Tri& t, int a, int b) const;  // local edge index with endpoints {a,b}
  std::optional<std::pair<int, int>> find_edge(int a, int b) const;
  void set_edge_tag(int t, int e, std::int8_t tag);

  Location locate(const Vec2& p, int start, bool stop_at_constraints) const;
  std::vector<int> insertion_cavity(const Vec2& p, const Location& loc, const Split& split) const;
  int commit(const Vec2& p, const std::vector<int>& cavity, const Split& split);
  int insert_located(const Vec2& p, Location loc);
  int split_segment(int a, int b);

  bool encroached(int a, int b, const Vec2& q) const;
  bool segment_encroached(int a, int b) const;
  bool is_bad(int t, const RefineOptions& options) const;
  double shortest_edge(int t) const;

  std::vector<Vec2> points_;
  std::vector<Tri> tris_;
  std::vector<int> free_;
  std::vector<int> vertex_tri_;
  std::map<SegmentKey, BoundaryTag> segments_;
  std::vector<int> recent_;  // triangles created by the last commit
  int last_tri_ = 0;
  mutable std::uint64_t walk_state_ = 0x9E3779B97F4A7C15ULL;
};

}  // namespace slabprobe::geometry::detail
