#pragma once

#include <span>
#include <variant>
#include <vector>

#include "slabprobe/geometry/vec.hpp"

namespace slabprobe::geometry {

/// Truncated slab (-halfwidth, halfwidth) x (d1, d2). Only dim == 2 is meshed.
struct SlabGeometry {
  double d1 = 0.0;
  double d2 = 1.0;
  double halfwidth = 1.0;
  int dim = 2;

  /// Throws ValidationError listing every violated invariant.
  void validate() const;

  double thickness() const { return d2 - d1; }
  Vec2 lower_left() const { return {-halfwidth, d1}; }
  Vec2 upper_right() const { return {halfwidth, d2}; }
  double area() const { return 2.0 * halfwidth * thickness(); }

  /// Distance from p to the closed infinite strip d1 <= y <= d2.
  double strip_distance(const Vec2& p) const;
};

struct Disc {
  Vec2 center{0.0, 0.5};
  double radius = 0.2;
};

struct Ellipse {
  Vec2 center{0.0, 0.5};
  double semi_a = 0.3;
  double semi_b = 0.1;
  double rotation = 0.0;  ///< radians, counterclockwise, applied to the a-axis
};

/// Counterclockwise vertex list; the closing edge is implicit.
struct Polygon {
  std::vector<Vec2> vertices;
};

/// Star-shaped boundary r(theta) = c[0] + sum_k (c[k] cos k theta + s[k] sin k theta).
/// sin_coeffs[0] is ignored.
struct RadialStar {
  Vec2 center{0.0, 0.5};
  std::vector<double> cos_coeffs{0.2};
  std::vector<double> sin_coeffs{};

  double radius(double theta) const;
  double radius_derivative(double theta) const;
};

using CavityShape = std::variant<Disc, Ellipse, Polygon, RadialStar>;

struct Polygonization {
  std::vector<Vec2> vertices;  ///< counterclockwise, on the exact boundary
  double max_chord_deviation = 0.0;
};

/// Samples the cavity boundary into a simple counterclockwise polygon.
/// Polygon shapes are returned unchanged (after validation).
Polygonization polygonize_cavity(const CavityShape& shape, int segments = 128);

/// Exact Euclidean distance from p to the closed cavity. Throws if p is inside.
double cavity_distance(const Vec2& p, const CavityShape& shape);

/// Distance from p to the cavity boundary curve (valid on both sides).
double boundary_distance(const Vec2& p, const CavityShape& shape);

/// True if p lies strictly inside the cavity.
bool cavity_contains(const CavityShape& shape, const Vec2& p);

/// Throws ValidationError unless the closed cavity sits strictly inside the
/// truncation rectangle of the slab.
void validate_cavity(const CavityShape& shape, const SlabGeometry& slab);

/// Axis-aligned bounding box of the exact cavity, as {min, max}.
std::pair<Vec2, Vec2> cavity_bounds(const CavityShape& shape);

// Polygon utilities shared with the mesher and the reconstruction module.
double signed_area(std::span<const Vec2> polygon);
bool is_simple(std::span<const Vec2> polygon);
bool point_in_polygon(const Vec2& p, std::span<const Vec2> polygon);
double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b);
double polygon_boundary_distance(const Vec2& p, std::span<const Vec2> polygon);
std::vector<Vec2> convex_hull(std::span<const Vec2> points);

}  // namespace slabprobe::geometry
