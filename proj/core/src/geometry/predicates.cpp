#include "slabprobe/geometry/predicates.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <limits>

namespace slabprobe::geometry {

namespace {

using boost::multiprecision::cpp_rational;

constexpr double kEps = std::numeric_limits<double>::epsilon() * 0.5;
constexpr double kOrientBound = (3.0 + 16.0 * kEps) * kEps;
constexpr double kIncircleBound = (10.0 + 96.0 * kEps) * kEps;

double sign_of(const cpp_rational& v) {
  if (v > 0) return 1.0;
  if (v < 0) return -1.0;
  return 0.0;
}

double orient_exact(const Vec2& a, const Vec2& b, const Vec2& c) {
  const cpp_rational acx = cpp_rational(a.x()) - cpp_rational(c.x());
  const cpp_rational bcx = cpp_rational(b.x()) - cpp_rational(c.x());
  const cpp_rational acy = cpp_rational(a.y()) - cpp_rational(c.y());
  const cpp_rational bcy = cpp_rational(b.y()) - cpp_rational(c.y());
  return sign_of(acx * bcy - acy * bcx);
}

double incircle_exact(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
  const cpp_rational dx(d.x()), dy(d.y());
  const cpp_rational adx = cpp_rational(a.x()) - dx, ady = cpp_rational(a.y()) - dy;
  const cpp_rational bdx = cpp_rational(b.x()) - dx, bdy = cpp_rational(b.y()) - dy;
  const cpp_rational cdx = cpp_rational(c.x()) - dx, cdy = cpp_rational(c.y()) - dy;
  const cpp_rational alift = adx * adx + ady * ady;
  const cpp_rational blift = bdx * bdx + bdy * bdy;
  const cpp_rational clift = cdx * cdx + cdy * cdy;
  const cpp_rational det = alift * (bdx * cdy - cdx * bdy) + blift * (cdx * ady - adx * cdy) +
                           clift * (adx * bdy - bdx * ady);
  return sign_of(det);
}

}  // namespace

double orient2d(const Vec2& a, const Vec2& b, const Vec2& c) {
  const double detleft = (a.x() - c.x()) * (b.y() - c.y());
  const double detright = (a.y() - c.y()) * (b.x() - c.x());
  const double det = detleft - detright;
  const double bound = kOrientBound * (std::abs(detleft) + std::abs(detright));
  if (det > bound || -det > bound) return det;
  return orient_exact(a, b, c);
}

double incircle(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
  const double adx = a.x() - d.x(), ady = a.y() - d.y();
  const double bdx = b.x() - d.x(), bdy = b.y() - d.y();
  const double cdx = c.x() - d.x(), cdy = c.y() - d.y();

  const double bdxcdy = bdx * cdy, cdxbdy = cdx * bdy;
  const double alift = adx * adx + ady * ady;
  const double cdxady = cdx * ady, adxcdy = adx * cdy;
  const double blift = bdx * bdx + bdy * bdy;
  const double adxbdy = adx * bdy, bdxady = bdx * ady;
  const double clift = cdx * cdx + cdy * cdy;

  const double det =
      alift * (bdxcdy - cdxbdy) + blift * (cdxady - adxcdy) + clift * (adxbdy - bdxady);
  const double permanent = (std::abs(bdxcdy) + std::abs(cdxbdy)) * alift +
                           (std::abs(cdxady) + std::abs(adxcdy)) * blift +
                           (std::abs(adxbdy) + std::abs(bdxady)) * clift;
  const double bound = kIncircleBound * permanent;
  if (det > bound || -det > bound) return det;
  return incircle_exact(a, b, c, d);
}

}  // namespace slabprobe::geometry
