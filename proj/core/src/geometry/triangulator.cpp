#include "geometry/triangulator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "slabprobe/error.hpp"
#include "slabprobe/geometry/predicates.hpp"

namespace slabprobe::geometry::detail {

namespace {

constexpr int next3(int i) { return i == 2 ? 0 : i + 1; }
constexpr int prev3(int i) { return i == 0 ? 2 : i - 1; }

Vec2 circumcenter(const Vec2& a, const Vec2& b, const Vec2& c) {
  const Vec2 ab = b - a, ac = c - a;
  const double d = 2.0 * cross(ab, ac);
  const double ab2 = ab.squaredNorm(), ac2 = ac.squaredNorm();
  return a + Vec2(ac.y() * ab2 - ab.y() * ac2, ab.x() * ac2 - ac.x() * ab2) / d;
}

}  // namespace

Triangulator::Triangulator(const Vec2& lower_left, const Vec2& upper_right) {
  points_ = {lower_left, {upper_right.x(), lower_left.y()}, upper_right, {lower_left.x(), upper_right.y()}};
  vertex_tri_.assign(4, -1);
  const int t0 = new_triangle(0, 1, 2);
  const int t1 = new_triangle(0, 2, 3);
  tris_[t0].nbr[1] = t1;
  tris_[t1].nbr[2] = t0;
  tris_[t0].tag[0] = static_cast<std::int8_t>(BoundaryTag::Lateral);
  tris_[t0].tag[2] = static_cast<std::int8_t>(BoundaryTag::SlabBottom);
  tris_[t1].tag[0] = static_cast<std::int8_t>(BoundaryTag::SlabTop);
  tris_[t1].tag[1] = static_cast<std::int8_t>(BoundaryTag::Lateral);
  segments_[key(0, 1)] = BoundaryTag::SlabBottom;
  segments_[key(1, 2)] = BoundaryTag::Lateral;
  segments_[key(2, 3)] = BoundaryTag::SlabTop;
  segments_[key(3, 0)] = BoundaryTag::Lateral;
  vertex_tri_ = {t0, t0, t0, t1};
}

int Triangulator::new_triangle(int a, int b, int c) {
  Tri t;
  t.v = {a, b, c};
  int id;
  if (!free_.empty()) {
    id = free_.back();
    free_.pop_back();
    tris_[id] = t;
  } else {
    id = static_cast<int>(tris_.size());
    tris_.push_back(t);
  }
  return id;
}

void Triangulator::kill_triangle(int t) {
  tris_[t].alive = false;
  free_.push_back(t);
}

int Triangulator::local_index(const Tri& t, int vertex) const {
  for (int i = 0; i < 3; ++i) {
    if (t.v[i] == vertex) return i;
  }
  return -1;
}

int Triangulator::edge_of(const Tri& t, int a, int b) const {
  for (int e = 0; e < 3; ++e) {
    const int u = t.v[next3(e)], w = t.v[prev3(e)];
    if ((u == a && w == b) || (u == b && w == a)) return e;
  }
  return -1;
}

std::optional<std::pair<int, int>> Triangulator::find_edge(int a, int b) const {
  const int start = vertex_tri_[a];
  if (start < 0 || !tris_[start].alive) return std::nullopt;
  // Rotate around a in both directions.
  for (int dir = 0; dir < 2; ++dir) {
    int t = start;
    for (std::size_t guard = 0; guard < 4096; ++guard) {
      const Tri& tri = tris_[t];
      const int e = edge_of(tri, a, b);
      if (e >= 0) return std::pair{t, e};
      const int i = local_index(tri, a);
      // dir 0: cross edge (a, v[i+1]) which is opposite v[i+2]
      const int across = dir == 0 ? prev3(i) : next3(i);
      t = tri.nbr[across];
      if (t < 0 || t == start) break;
    }
  }
  return std::nullopt;
}

void Triangulator::set_edge_tag(int t, int e, std::int8_t tag) {
  tris_[t].tag[e] = tag;
  const int n = tris_[t].nbr[e];
  if (n >= 0) {
    const int ne = edge_of(tris_[n], tris_[t].v[next3(e)], tris_[t].v[prev3(e)]);
    tris_[n].tag[ne] = tag;
  }
}

Triangulator::Location Triangulator::locate(const Vec2& p, int start, bool stop_at_constraints) const {
  int t = start;
  if (t < 0 || t >= static_cast<int>(tris_.size()) || !tris_[t].alive) {
    t = -1;
    for (int i = static_cast<int>(tris_.size()) - 1; i >= 0; --i) {
      if (tris_[i].alive) {
        t = i;
        break;
      }
    }
  }
  const std::size_t max_steps = 4 * tris_.size() + 64;
  for (std::size_t step = 0; step < max_steps; ++step) {
    const Tri& tri = tris_[t];
    walk_state_ = walk_state_ * 6364136223846793005ULL + 1442695040888963407ULL;
    const int offset = static_cast<int>((walk_state_ >> 33) % 3);
    int zeros = 0, zero_edge = -1, nonzero_edge = -1;
    bool moved = false;
    for (int k = 0; k < 3; ++k) {
      const int e = (offset + k) % 3;
      const double o = orient2d(points_[tri.v[next3(e)]], points_[tri.v[prev3(e)]], p);
      if (o < 0.0) {
        if (stop_at_constraints && tri.tag[e] != kUntagged) return {Location::Kind::Blocked, t, e, -1};
        if (tri.nbr[e] < 0) return {Location::Kind::Outside, t, e, -1};
        t = tri.nbr[e];
        moved = true;
        break;
      }
      if (o == 0.0) {
        ++zeros;
        zero_edge = e;
      } else {
        nonzero_edge = e;
      }
    }
    if (moved) continue;
    if (zeros == 0) return {Location::Kind::Inside, t, -1, -1};
    if (zeros == 1) return {Location::Kind::OnEdge, t, zero_edge, -1};
    return {Location::Kind::OnVertex, t, -1, tri.v[nonzero_edge]};
  }
  throw Error("point location failed to converge");
}

std::vector<int> Triangulator::insertion_cavity(const Vec2& p, const Location& loc,
                                                const Split& split) const {
  std::vector<int> cavity{loc.tri};
  if (split.a >= 0) {
    const int n = tris_[loc.tri].nbr[loc.edge];
    if (n >= 0) cavity.push_back(n);
  }
  for (std::size_t i = 0; i < cavity.size(); ++i) {
    const Tri& t = tris_[cavity[i]];
    for (int e = 0; e < 3; ++e) {
      if (t.tag[e] != kUntagged) continue;
      const int n = t.nbr[e];
      if (n < 0 || std::find(cavity.begin(), cavity.end(), n) != cavity.end()) continue;
      const Tri& nt = tris_[n];
      if (incircle(points_[nt.v[0]], points_[nt.v[1]], points_[nt.v[2]], p) > 0.0) cavity.push_back(n);
    }
  }
  return cavity;
}

int Triangulator::commit(const Vec2& p, const std::vector<int>& cavity, const Split& split) {
  struct Rim {
    int a, b, outer;
    std::int8_t tag;
  };
  std::vector<Rim> rim;
  auto in_cavity = [&](int t) { return std::find(cavity.begin(), cavity.end(), t) != cavity.end(); };
  const SegmentKey split_key = split.a >= 0 ? key(split.a, split.b) : SegmentKey{-1, -1};
  for (int t : cavity) {
    const Tri& tri = tris_[t];
    for (int e = 0; e < 3; ++e) {
      const int n = tri.nbr[e];
      if (n >= 0 && in_cavity(n)) continue;
      const int a = tri.v[next3(e)], b = tri.v[prev3(e)];
      if (split.a >= 0 && key(a, b) == split_key) continue;
      rim.push_back({a, b, n, tri.tag[e]});
    }
  }

  const int idx = static_cast<int>(points_.size());
  for (const Rim& r : rim) {
    if (!(orient2d(p, points_[r.a], points_[r.b]) > 0.0)) {
      throw Error("mesher produced a non-star-shaped insertion cavity");
    }
  }
  points_.push_back(p);
  vertex_tri_.push_back(-1);
  for (int t : cavity) kill_triangle(t);

  recent_.clear();
  for (const Rim& r : rim) {
    const int nt = new_triangle(idx, r.a, r.b);
    Tri& tri = tris_[nt];
    tri.nbr[0] = r.outer;
    tri.tag[0] = r.tag;
    if (r.outer >= 0) {
      Tri& outer = tris_[r.outer];
      outer.nbr[edge_of(outer, r.a, r.b)] = nt;
    }
    recent_.push_back(nt);
  }
  for (int nt : recent_) {
    Tri& tri = tris_[nt];
    const int a = tri.v[1], b = tri.v[2];
    for (int other : recent_) {
      const Tri& o = tris_[other];
      if (o.v[2] == a) tri.nbr[2] = other;  // spoke (idx, a)
      if (o.v[1] == b) tri.nbr[1] = other;  // spoke (b, idx)
    }
    if (split.a >= 0) {
      if (a == split.a || a == split.b) tri.tag[2] = split.tag;
      if (b == split.a || b == split.b) tri.tag[1] = split.tag;
    }
    vertex_tri_[idx] = nt;
    vertex_tri_[a] = nt;
    vertex_tri_[b] = nt;
  }
  if (split.a >= 0) {
    const BoundaryTag tag = static_cast<BoundaryTag>(split.tag);
    segments_.erase(split_key);
    segments_[key(split.a, idx)] = tag;
    segments_[key(idx, split.b)] = tag;
  }
  if (!recent_.empty()) last_tri_ = recent_.front();
  return idx;
}

int Triangulator::insert_located(const Vec2& p, Location loc) {
  switch (loc.kind) {
    case Location::Kind::OnVertex:
      return loc.vertex;
    case Location::Kind::Outside:
    case Location::Kind::Blocked:
      throw Error("point lies outside the meshing rectangle");
    default:
      break;
  }
  Split split;
  if (loc.kind == Location::Kind::OnEdge) {
    const Tri& t = tris_[loc.tri];
    if (t.tag[loc.edge] != kUntagged) {
      split = {t.v[next3(loc.edge)], t.v[prev3(loc.edge)], t.tag[loc.edge]};
    }
  }
  return commit(p, insertion_cavity(p, loc, split), split);
}

int Triangulator::insert_point(const Vec2& p) { return insert_located(p, locate(p, last_tri_, false)); }

int Triangulator::split_segment(int a, int b) {
  const Vec2 mid = 0.5 * (points_[a] + points_[b]);
  const auto tag_it = segments_.find(key(a, b));
  if (tag_it == segments_.end()) throw Error("split requested for an unknown segment");
  const BoundaryTag tag = tag_it->second;
  if (const auto edge = find_edge(a, b)) {
    const auto [t, e] = *edge;
    if (tris_[t].tag[e] != kUntagged) {
      Location loc{Location::Kind::OnEdge, t, e, -1};
      const Split split{tris_[t].v[next3(e)], tris_[t].v[prev3(e)], tris_[t].tag[e]};
      return commit(mid, insertion_cavity(mid, loc, split), split);
    }
  }
  // Constraint not yet present (recovery stage): insert as a free point.
  const int m = insert_point(mid);
  segments_.erase(key(a, b));
  segments_[key(a, m)] = tag;
  segments_[key(m, b)] = tag;
  return m;
}

void Triangulator::subdivide_hull(double face_length, double side_length) {
  const std::array<std::pair<int, int>, 4> sides{{{0, 1}, {1, 2}, {2, 3}, {3, 0}}};
  for (const auto& [from, to] : sides) {
    const Vec2 a = points_[from], b = points_[to];
    const double max_length = a.y() == b.y() ? face_length : side_length;
    const int pieces = std::max(1, static_cast<int>(std::ceil((b - a).norm() / max_length - 1e-9)));
    int prev = from;
    for (int k = 1; k < pieces; ++k) {
      Vec2 q = a + (b - a) * (static_cast<double>(k) / pieces);
      // keep boundary points exactly on the rectangle
      if (a.x() == b.x()) q.x() = a.x();
      if (a.y() == b.y()) q.y() = a.y();
      const auto edge = find_edge(prev, to);
      if (!edge) throw Error("hull subdivision lost a boundary edge");
      const auto [t, e] = *edge;
      Location loc{Location::Kind::OnEdge, t, e, -1};
      const Split split{tris_[t].v[next3(e)], tris_[t].v[prev3(e)], tris_[t].tag[e]};
      prev = commit(q, insertion_cavity(q, loc, split), split);
    }
  }
}

void Triangulator::add_segment(int a, int b, BoundaryTag tag) { segments_[key(a, b)] = tag; }

void Triangulator::recover_segments() {
  for (std::size_t round = 0; round < 64; ++round) {
    std::vector<SegmentKey> missing;
    for (const auto& [k, tag] : segments_) {
      const auto edge = find_edge(k.first, k.second);
      if (!edge) {
        missing.push_back(k);
        continue;
      }
      const auto [t, e] = *edge;
      if (tris_[t].tag[e] == kUntagged) set_edge_tag(t, e, static_cast<std::int8_t>(tag));
    }
    if (missing.empty()) return;
    for (const auto& k : missing) {
      if (segments_.count(k) && !find_edge(k.first, k.second)) split_segment(k.first, k.second);
    }
  }
  throw Error("constraint recovery did not converge");
}

bool Triangulator::encroached(int a, int b, const Vec2& q) const {
  return (points_[a] - q).dot(points_[b] - q) <= 0.0;
}

bool Triangulator::segment_encroached(int a, int b) const {
  const auto edge = find_edge(a, b);
  if (!edge) return true;
  const auto [t, e] = *edge;
  if (encroached(a, b, points_[tris_[t].v[e]])) return true;
  const int n = tris_[t].nbr[e];
  if (n >= 0) {
    const int ne = edge_of(tris_[n], a, b);
    if (encroached(a, b, points_[tris_[n].v[ne]])) return true;
  }
  return false;
}

double Triangulator::shortest_edge(int t) const {
  const Tri& tri = tris_[t];
  const Vec2& a = points_[tri.v[0]];
  const Vec2& b = points_[tri.v[1]];
  const Vec2& c = points_[tri.v[2]];
  return std::sqrt(std::min({(a - b).squaredNorm(), (b - c).squaredNorm(), (c - a).squaredNorm()}));
}

bool Triangulator::is_bad(int t, const RefineOptions& options) const {
  const Tri& tri = tris_[t];
  const Vec2& a = points_[tri.v[0]];
  const Vec2& b = points_[tri.v[1]];
  const Vec2& c = points_[tri.v[2]];
  const double la = (b - c).norm(), lb = (c - a).norm(), lc = (a - b).norm();
  const double area2 = cross(b - a, c - a);
  const double radius = la * lb * lc / (2.0 * area2);
  if (radius > options.max_circumradius) return true;
  const double shortest = std::min({la, lb, lc});
  if (shortest < options.min_edge) return false;
  const double sin_min = std::sin(options.min_angle_degrees * std::numbers::pi / 180.0);
  return shortest < 2.0 * radius * sin_min;
}

void Triangulator::refine(const RefineOptions& options) {
  std::deque<SegmentKey> seg_queue;
  std::deque<std::pair<int, std::array<int, 3>>> bad;
  for (const auto& [k, tag] : segments_) {
    if (segment_encroached(k.first, k.second)) seg_queue.push_back(k);
  }
  for (int t = 0; t < static_cast<int>(tris_.size()); ++t) {
    if (tris_[t].alive && is_bad(t, options)) bad.emplace_back(t, tris_[t].v);
  }
  auto splittable = [&](const SegmentKey& k) {
    return (points_[k.first] - points_[k.second]).norm() >= 2.0 * options.min_edge;
  };
  auto after_insert = [&]() {
    for (int nt : recent_) {
      const Tri& tri = tris_[nt];
      if (is_bad(nt, options)) bad.emplace_back(nt, tri.v);
      for (int e = 0; e < 3; ++e) {
        if (tri.tag[e] == kUntagged) continue;
        const int a = tri.v[next3(e)], b = tri.v[prev3(e)];
        if (segment_encroached(a, b)) seg_queue.push_back(key(a, b));
      }
    }
  };

  while (true) {
    if (points_.size() > options.max_vertices) throw Error("mesh refinement exceeded the vertex budget");
    if (!seg_queue.empty()) {
      const SegmentKey k = seg_queue.front();
      seg_queue.pop_front();
      if (!segments_.count(k) || !splittable(k) || !segment_encroached(k.first, k.second)) continue;
      split_segment(k.first, k.second);
      after_insert();
      continue;
    }
    if (bad.empty()) break;
    const auto [t, verts] = bad.front();
    bad.pop_front();
    if (!tris_[t].alive || tris_[t].v != verts || !is_bad(t, options)) continue;

    const Tri& tri = tris_[t];
    const Vec2 c = circumcenter(points_[tri.v[0]], points_[tri.v[1]], points_[tri.v[2]]);
    const Location loc = locate(c, t, true);
    if (loc.kind == Location::Kind::OnVertex) continue;
    if (loc.kind == Location::Kind::Blocked || loc.kind == Location::Kind::Outside ||
        (loc.kind == Location::Kind::OnEdge && tris_[loc.tri].tag[loc.edge] != kUntagged)) {
      const Tri& lt = tris_[loc.tri];
      const SegmentKey k = key(lt.v[next3(loc.edge)], lt.v[prev3(loc.edge)]);
      if (segments_.count(k) && splittable(k)) {
        split_segment(k.first, k.second);
        after_insert();
        bad.emplace_back(t, verts);
      }
      continue;
    }
    const std::vector<int> cavity = insertion_cavity(c, loc, {});
    std::vector<SegmentKey> encroached_by_center;
    for (int ct : cavity) {
      const Tri& ctri = tris_[ct];
      for (int e = 0; e < 3; ++e) {
        if (ctri.tag[e] == kUntagged) continue;
        const int a = ctri.v[next3(e)], b = ctri.v[prev3(e)];
        if (encroached(a, b, c) && splittable(key(a, b))) {
          encroached_by_center.push_back(key(a, b));
        }
      }
    }
    if (!encroached_by_center.empty()) {
      for (const auto& k : encroached_by_center) {
        if (segments_.count(k)) {
          split_segment(k.first, k.second);
          after_insert();
        }
      }
      bad.emplace_back(t, verts);
      continue;
    }
    commit(c, cavity, {});
    after_insert();
  }
}

Triangulator::Extraction Triangulator::extract() const {
  const int cavity_tag = static_cast<int>(BoundaryTag::Cavity);
  std::vector<char> outside(tris_.size(), 0);
  std::vector<int> stack;
  for (int t = 0; t < static_cast<int>(tris_.size()); ++t) {
    if (!tris_[t].alive) continue;
    for (int e = 0; e < 3; ++e) {
      if (tris_[t].nbr[e] < 0 && tris_[t].tag[e] != cavity_tag && !outside[t]) {
        outside[t] = 1;
        stack.push_back(t);
      }
    }
  }
  while (!stack.empty()) {
    const int t = stack.back();
    stack.pop_back();
    for (int e = 0; e < 3; ++e) {
      const int n = tris_[t].nbr[e];
      if (n < 0 || outside[n] || tris_[t].tag[e] == cavity_tag) continue;
      outside[n] = 1;
      stack.push_back(n);
    }
  }

  std::vector<int> remap(points_.size(), -1);
  Extraction out;
  for (int t = 0; t < static_cast<int>(tris_.size()); ++t) {
    if (!tris_[t].alive || !outside[t]) continue;
    for (int v : tris_[t].v) remap[v] = 0;
  }
  int next = 0;
  for (std::size_t v = 0; v < points_.size(); ++v) {
    if (remap[v] == 0) remap[v] = next++;
  }
  out.outside_vertex_count = static_cast<std::size_t>(next);
  for (int t = 0; t < static_cast<int>(tris_.size()); ++t) {
    if (!tris_[t].alive || outside[t]) continue;
    for (int v : tris_[t].v) {
      if (remap[v] < 0) remap[v] = -2;
    }
  }
  for (std::size_t v = 0; v < points_.size(); ++v) {
    if (remap[v] == -2) remap[v] = next++;
  }
  out.vertices.resize(static_cast<std::size_t>(next));
  for (std::size_t v = 0; v < points_.size(); ++v) {
    if (remap[v] >= 0) out.vertices[remap[v]] = points_[v];
  }

  for (int t = 0; t < static_cast<int>(tris_.size()); ++t) {
    const Tri& tri = tris_[t];
    if (!tri.alive) continue;
    const std::array<int, 3> mapped{remap[tri.v[0]], remap[tri.v[1]], remap[tri.v[2]]};
    if (outside[t]) {
      out.outside_triangles.push_back(mapped);
      for (int e = 0; e < 3; ++e) {
        const int a = mapped[next3(e)], b = mapped[prev3(e)];
        if (tri.nbr[e] < 0) {
          out.hull_edges.push_back({a, b, static_cast<BoundaryTag>(tri.tag[e])});
        } else if (tri.tag[e] == cavity_tag && !outside[tri.nbr[e]]) {
          out.cavity_edges.push_back({a, b, BoundaryTag::Cavity});
        }
      }
    } else {
      out.inside_triangles.push_back(mapped);
    }
  }
  return out;
}

}  // namespace slabprobe::geometry::detail
