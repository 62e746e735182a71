#pragma once

#include <array>

namespace slabprobe::solver::detail {

struct TriangleRule {
  std::array<std::array<double, 3>, 7> bary;
  std::array<double, 7> weight;  // sums to 1
};

// Degree-5 symmetric rule on triangles (7 points).
inline const TriangleRule& triangle_rule() {
  static const TriangleRule rule = [] {
    constexpr double a1 = 0.059715871789770, b1 = 0.470142064105115;
    constexpr double a2 = 0.797426985353087, b2 = 0.101286507323456;
    constexpr double w0 = 0.225, w1 = 0.132394152788506, w2 = 0.125939180544827;
    TriangleRule r;
    r.bary = {{{1.0 / 3, 1.0 / 3, 1.0 / 3},
               {a1, b1, b1}, {b1, a1, b1}, {b1, b1, a1},
               {a2, b2, b2}, {b2, a2, b2}, {b2, b2, a2}}};
    r.weight = {w0, w1, w1, w1, w2, w2, w2};
    return r;
  }();
  return rule;
}

// Three-point Gauss-Legendre rule on [0, 1].
inline constexpr std::array<double, 3> kGaussNodes{0.11270166537925831, 0.5, 0.88729833462074169};
inline constexpr std::array<double, 3> kGaussWeights{5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};

}  // namespace slabprobe::solver::detail
