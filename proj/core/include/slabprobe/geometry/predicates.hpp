#pragma once

#include "slabprobe/geometry/vec.hpp"

namespace slabprobe::geometry {

// Sign-exact geometric predicates. A floating-point evaluation is used when
// its error bound certifies the sign; otherwise the determinant is evaluated
// in exact rational arithmetic. Only the sign of the result is meaningful.

/// > 0 if (a, b, c) is counterclockwise, < 0 if clockwise, 0 if collinear.
double orient2d(const Vec2& a, const Vec2& b, const Vec2& c);

/// > 0 if d lies strictly inside the circle through counterclockwise (a, b, c).
double incircle(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d);

}  // namespace slabprobe::geometry
