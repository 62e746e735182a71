#include "slabprobe/geometry/cavity.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <fmt/format.h>

#include "slabprobe/error.hpp"
#include "slabprobe/geometry/predicates.hpp"

namespace slabprobe::geometry {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

Vec2 rotate(const Vec2& v, double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  return {c * v.x() - s * v.y(), s * v.x() + c * v.y()};
}

Vec2 ellipse_point(const Ellipse& e, double theta) {
  return e.center + rotate(Vec2(e.semi_a * std::cos(theta), e.semi_b * std::sin(theta)), e.rotation);
}

Vec2 star_point(const RadialStar& s, double theta) {
  return s.center + s.radius(theta) * Vec2(std::cos(theta), std::sin(theta));
}

// Robust bisection for the distance from (y0, y1), y0, y1 >= 0, to the
// ellipse (x0/e0)^2 + (x1/e1)^2 = 1 with e0 >= e1 > 0 (D. Eberly).
double ellipse_root(double r0, double z0, double z1, double g) {
  const double n0 = r0 * z0;
  double s0 = z1 - 1.0;
  double s1 = g < 0.0 ? 0.0 : std::hypot(n0, z1) - 1.0;
  double s = 0.0;
  for (int i = 0; i < 1100; ++i) {
    s = 0.5 * (s0 + s1);
    if (s == s0 || s == s1) break;
    const double ratio0 = n0 / (s + r0);
    const double ratio1 = z1 / (s + 1.0);
    g = ratio0 * ratio0 + ratio1 * ratio1 - 1.0;
    if (g > 0.0) {
      s0 = s;
    } else if (g < 0.0) {
      s1 = s;
    } else {
      break;
    }
  }
  return s;
}

double ellipse_first_quadrant_distance(double e0, double e1, double y0, double y1) {
  if (y1 > 0.0) {
    if (y0 > 0.0) {
      const double z0 = y0 / e0, z1 = y1 / e1;
      const double g = z0 * z0 + z1 * z1 - 1.0;
      if (g == 0.0) return 0.0;
      const double r0 = (e0 / e1) * (e0 / e1);
      const double sbar = ellipse_root(r0, z0, z1, g);
      const double x0 = r0 * y0 / (sbar + r0);
      const double x1 = y1 / (sbar + 1.0);
      return std::hypot(x0 - y0, x1 - y1);
    }
    return std::abs(y1 - e1);
  }
  const double numer0 = e0 * y0;
  const double denom0 = e0 * e0 - e1 * e1;
  if (numer0 < denom0) {
    const double xde0 = numer0 / denom0;
    const double x0 = e0 * xde0;
    const double x1 = e1 * std::sqrt(1.0 - xde0 * xde0);
    return std::hypot(x0 - y0, x1);
  }
  return std::abs(y0 - e0);
}

double ellipse_boundary_distance(const Ellipse& e, const Vec2& p) {
  Vec2 local = rotate(p - e.center, -e.rotation);
  double a = e.semi_a, b = e.semi_b;
  double y0 = std::abs(local.x()), y1 = std::abs(local.y());
  if (a < b) {
    std::swap(a, b);
    std::swap(y0, y1);
  }
  return ellipse_first_quadrant_distance(a, b, y0, y1);
}

double star_boundary_distance(const RadialStar& s, const Vec2& p) {
  // Dense scan followed by golden-section refinement of the best brackets.
  constexpr int kSamples = 4096;
  const double step = kTwoPi / kSamples;
  auto dist = [&](double theta) { return (star_point(s, theta) - p).norm(); };
  std::vector<double> d(kSamples);
  for (int i = 0; i < kSamples; ++i) d[i] = dist(i * step);
  double best = *std::min_element(d.begin(), d.end());
  for (int i = 0; i < kSamples; ++i) {
    const double prev = d[(i + kSamples - 1) % kSamples];
    const double next = d[(i + 1) % kSamples];
    if (d[i] > prev || d[i] > next) continue;
    double lo = (i - 1) * step, hi = (i + 1) * step;
    constexpr double kInvPhi = 0.6180339887498949;
    double x1 = hi - kInvPhi * (hi - lo), x2 = lo + kInvPhi * (hi - lo);
    double f1 = dist(x1), f2 = dist(x2);
    for (int it = 0; it < 80 && hi - lo > 1e-15; ++it) {
      if (f1 < f2) {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - kInvPhi * (hi - lo);
        f1 = dist(x1);
      } else {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + kInvPhi * (hi - lo);
        f2 = dist(x2);
      }
    }
    best = std::min({best, f1, f2});
  }
  return best;
}

bool segments_intersect(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
  const double o1 = orient2d(a, b, c), o2 = orient2d(a, b, d);
  const double o3 = orient2d(c, d, a), o4 = orient2d(c, d, b);
  if (((o1 > 0 && o2 < 0) || (o1 < 0 && o2 > 0)) && ((o3 > 0 && o4 < 0) || (o3 < 0 && o4 > 0))) {
    return true;
  }
  auto on_segment = [](const Vec2& p, const Vec2& q, const Vec2& r) {
    return std::min(p.x(), q.x()) <= r.x() && r.x() <= std::max(p.x(), q.x()) &&
           std::min(p.y(), q.y()) <= r.y() && r.y() <= std::max(p.y(), q.y());
  };
  if (o1 == 0 && on_segment(a, b, c)) return true;
  if (o2 == 0 && on_segment(a, b, d)) return true;
  if (o3 == 0 && on_segment(c, d, a)) return true;
  if (o4 == 0 && on_segment(c, d, b)) return true;
  return false;
}

void validate_shape_parameters(const CavityShape& shape) {
  std::visit(Overloaded{
                 [](const Disc& d) {
                   if (!(d.radius > 0.0)) throw ValidationError("disc radius must be positive");
                 },
                 [](const Ellipse& e) {
                   if (!(e.semi_a > 0.0 && e.semi_b > 0.0)) {
                     throw ValidationError("ellipse semi-axes must be positive");
                   }
                 },
                 [](const Polygon& p) {
                   if (p.vertices.size() < 3) throw ValidationError("polygon needs >= 3 vertices");
                   if (!is_simple(p.vertices)) {
                     throw ValidationError("polygon cavity is self-intersecting");
                   }
                   if (signed_area(p.vertices) <= 0.0) {
                     throw ValidationError("polygon cavity must be counterclockwise");
                   }
                 },
                 [](const RadialStar& s) {
                   if (s.cos_coeffs.empty()) throw ValidationError("radial star needs c0");
                   for (int i = 0; i < 4096; ++i) {
                     if (!(s.radius(kTwoPi * i / 4096.0) > 0.0)) {
                       throw ValidationError("radial star radius must stay positive");
                     }
                   }
                 },
             },
             shape);
}

}  // namespace

void SlabGeometry::validate() const {
  std::vector<std::string> issues;
  if (!(d1 < d2)) issues.push_back(fmt::format("slab requires d1 < d2 (got d1={}, d2={})", d1, d2));
  if (!(halfwidth > 0.0)) issues.push_back(fmt::format("halfwidth must be positive (got {})", halfwidth));
  if (dim != 2) issues.push_back("only dim = 2 slabs can be meshed");
  if (!issues.empty()) throw ValidationError(std::move(issues));
}

double SlabGeometry::strip_distance(const Vec2& p) const {
  if (p.y() < d1) return d1 - p.y();
  if (p.y() > d2) return p.y() - d2;
  return 0.0;
}

double RadialStar::radius(double theta) const {
  double r = cos_coeffs.empty() ? 0.0 : cos_coeffs[0];
  const std::size_t n = std::max(cos_coeffs.size(), sin_coeffs.size());
  for (std::size_t k = 1; k < n; ++k) {
    const double a = k < cos_coeffs.size() ? cos_coeffs[k] : 0.0;
    const double b = k < sin_coeffs.size() ? sin_coeffs[k] : 0.0;
    r += a * std::cos(k * theta) + b * std::sin(k * theta);
  }
  return r;
}

double RadialStar::radius_derivative(double theta) const {
  double dr = 0.0;
  const std::size_t n = std::max(cos_coeffs.size(), sin_coeffs.size());
  for (std::size_t k = 1; k < n; ++k) {
    const double a = k < cos_coeffs.size() ? cos_coeffs[k] : 0.0;
    const double b = k < sin_coeffs.size() ? sin_coeffs[k] : 0.0;
    dr += k * (-a * std::sin(k * theta) + b * std::cos(k * theta));
  }
  return dr;
}

double signed_area(std::span<const Vec2> polygon) {
  double twice = 0.0;
  const std::size_t n = polygon.size();
  for (std::size_t i = 0; i < n; ++i) twice += cross(polygon[i], polygon[(i + 1) % n]);
  return 0.5 * twice;
}

bool is_simple(std::span<const Vec2> polygon) {
  const std::size_t n = polygon.size();
  if (n < 3) return false;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& a = polygon[i];
    const Vec2& b = polygon[(i + 1) % n];
    if (a == b) return false;
    for (std::size_t j = i + 1; j < n; ++j) {
      const Vec2& c = polygon[j];
      const Vec2& d = polygon[(j + 1) % n];
      const bool adjacent = j == i + 1 || (i == 0 && j == n - 1);
      if (adjacent) {
        // Shared vertex only; reject a fold-back along the same line.
        const Vec2& shared = (j == i + 1) ? b : a;
        const Vec2& other_ab = (j == i + 1) ? a : b;
        const Vec2& other_cd = (j == i + 1) ? d : c;
        if (orient2d(other_ab, shared, other_cd) == 0.0 &&
            (other_ab - shared).dot(other_cd - shared) > 0.0) {
          return false;
        }
        continue;
      }
      if (segments_intersect(a, b, c, d)) return false;
    }
  }
  return true;
}

bool point_in_polygon(const Vec2& p, std::span<const Vec2> polygon) {
  // Winding number; boundary points count as outside.
  int winding = 0;
  const std::size_t n = polygon.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& a = polygon[i];
    const Vec2& b = polygon[(i + 1) % n];
    const double o = orient2d(a, b, p);
    if (o == 0.0 && point_segment_distance(p, a, b) == 0.0) return false;
    if (a.y() <= p.y()) {
      if (b.y() > p.y() && o > 0.0) ++winding;
    } else if (b.y() <= p.y() && o < 0.0) {
      --winding;
    }
  }
  return winding != 0;
}

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 ab = b - a;
  const double len2 = ab.squaredNorm();
  if (len2 == 0.0) return (p - a).norm();
  const double s = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
  return (p - (a + s * ab)).norm();
}

double polygon_boundary_distance(const Vec2& p, std::span<const Vec2> polygon) {
  double best = std::numeric_limits<double>::infinity();
  const std::size_t n = polygon.size();
  for (std::size_t i = 0; i < n; ++i) {
    best = std::min(best, point_segment_distance(p, polygon[i], polygon[(i + 1) % n]));
  }
  return best;
}

std::vector<Vec2> convex_hull(std::span<const Vec2> points) {
  std::vector<Vec2> pts(points.begin(), points.end());
  std::sort(pts.begin(), pts.end(), [](const Vec2& a, const Vec2& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;
  std::vector<Vec2> hull(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && orient2d(hull[k - 2], hull[k - 1], p) <= 0.0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && orient2d(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

Polygonization polygonize_cavity(const CavityShape& shape, int segments) {
  validate_shape_parameters(shape);
  if (const auto* poly = std::get_if<Polygon>(&shape)) {
    return {poly->vertices, 0.0};
  }
  if (segments < 3) throw ValidationError("cavity polygonization needs at least 3 segments");

  auto boundary_at = [&](double theta) -> Vec2 {
    return std::visit(Overloaded{
                          [&](const Disc& d) -> Vec2 {
                            return d.center + d.radius * Vec2(std::cos(theta), std::sin(theta));
                          },
                          [&](const Ellipse& e) -> Vec2 { return ellipse_point(e, theta); },
                          [&](const RadialStar& s) -> Vec2 { return star_point(s, theta); },
                          [&](const Polygon&) -> Vec2 { return Vec2::Zero(); },
                      },
                      shape);
  };

  Polygonization out;
  out.vertices.reserve(segments);
  for (int k = 0; k < segments; ++k) out.vertices.push_back(boundary_at(kTwoPi * k / segments));

  constexpr int kProbesPerChord = 16;
  for (int k = 0; k < segments; ++k) {
    const Vec2& a = out.vertices[k];
    const Vec2& b = out.vertices[(k + 1) % segments];
    for (int j = 1; j < kProbesPerChord; ++j) {
      const double theta = kTwoPi * (k + static_cast<double>(j) / kProbesPerChord) / segments;
      out.max_chord_deviation =
          std::max(out.max_chord_deviation, point_segment_distance(boundary_at(theta), a, b));
    }
  }
  if (!is_simple(out.vertices)) throw ValidationError("polygonized cavity is self-intersecting");
  return out;
}

bool cavity_contains(const CavityShape& shape, const Vec2& p) {
  return std::visit(Overloaded{
                        [&](const Disc& d) { return (p - d.center).norm() < d.radius; },
                        [&](const Ellipse& e) {
                          const Vec2 l = rotate(p - e.center, -e.rotation);
                          const double u = l.x() / e.semi_a, v = l.y() / e.semi_b;
                          return u * u + v * v < 1.0;
                        },
                        [&](const Polygon& poly) { return point_in_polygon(p, poly.vertices); },
                        [&](const RadialStar& s) {
                          const Vec2 r = p - s.center;
                          return r.norm() < s.radius(std::atan2(r.y(), r.x()));
                        },
                    },
                    shape);
}

double boundary_distance(const Vec2& p, const CavityShape& shape) {
  return std::visit(Overloaded{
                        [&](const Disc& d) { return std::abs((p - d.center).norm() - d.radius); },
                        [&](const Ellipse& e) { return ellipse_boundary_distance(e, p); },
                        [&](const Polygon& poly) { return polygon_boundary_distance(p, poly.vertices); },
                        [&](const RadialStar& s) { return star_boundary_distance(s, p); },
                    },
                    shape);
}

double cavity_distance(const Vec2& p, const CavityShape& shape) {
  if (cavity_contains(shape, p)) {
    throw Error(fmt::format("point ({}, {}) lies inside the cavity", p.x(), p.y()));
  }
  return boundary_distance(p, shape);
}

std::pair<Vec2, Vec2> cavity_bounds(const CavityShape& shape) {
  return std::visit(
      Overloaded{
          [](const Disc& d) -> std::pair<Vec2, Vec2> {
            return {d.center - Vec2::Constant(d.radius), d.center + Vec2::Constant(d.radius)};
          },
          [](const Ellipse& e) -> std::pair<Vec2, Vec2> {
            const double c = std::cos(e.rotation), s = std::sin(e.rotation);
            const Vec2 ext(std::hypot(e.semi_a * c, e.semi_b * s), std::hypot(e.semi_a * s, e.semi_b * c));
            return {e.center - ext, e.center + ext};
          },
          [](const Polygon& poly) -> std::pair<Vec2, Vec2> {
            Vec2 lo = Vec2::Constant(std::numeric_limits<double>::infinity());
            Vec2 hi = -lo;
            for (const auto& v : poly.vertices) {
              lo = lo.cwiseMin(v);
              hi = hi.cwiseMax(v);
            }
            return {lo, hi};
          },
          [](const RadialStar& s) -> std::pair<Vec2, Vec2> {
            Vec2 lo = Vec2::Constant(std::numeric_limits<double>::infinity());
            Vec2 hi = -lo;
            for (int i = 0; i < 8192; ++i) {
              const Vec2 q = star_point(s, kTwoPi * i / 8192.0);
              lo = lo.cwiseMin(q);
              hi = hi.cwiseMax(q);
            }
            return {lo, hi};
          },
      },
      shape);
}

void validate_cavity(const CavityShape& shape, const SlabGeometry& slab) {
  validate_shape_parameters(shape);
  const auto [lo, hi] = cavity_bounds(shape);
  std::vector<std::string> issues;
  if (!(lo.y() > slab.d1 && hi.y() < slab.d2)) {
    issues.push_back(fmt::format("cavity spans y in [{}, {}], not strictly inside the slab ({}, {})",
                                 lo.y(), hi.y(), slab.d1, slab.d2));
  }
  if (!(lo.x() > -slab.halfwidth && hi.x() < slab.halfwidth)) {
    issues.push_back(fmt::format("cavity spans x in [{}, {}], not strictly inside |x| < {}", lo.x(),
                                 hi.x(), slab.halfwidth));
  }
  if (!issues.empty()) throw ValidationError(std::move(issues));
}

}  // namespace slabprobe::geometry
