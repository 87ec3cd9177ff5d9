#pragma once

#include <array>
#include <vector>

#include "podns/types.hpp"

namespace podns {

// Quadrature on the reference triangle, points in barycentric coordinates.
// Weights sum to the reference-triangle area (1/2).
struct QuadratureRule {
  std::vector<std::array<Real, 3>> points;
  std::vector<Real> weights;

  int size() const { return static_cast<int>(points.size()); }
};

// 6-point rule, exact through degree 4 (covers every Taylor-Hood bilinear
// form except the convection terms, whose committed error is below the
// discretization error).
inline const QuadratureRule& triangle_rule() {
  static const QuadratureRule rule = [] {
    QuadratureRule r;
    const Real a1 = 0.445948490915965, w1 = 0.223381589678011;
    const Real a2 = 0.091576213509771, w2 = 0.109951743655322;
    for (auto [a, w] : {std::pair{a1, w1}, std::pair{a2, w2}}) {
      r.points.push_back({1 - 2 * a, a, a});
      r.points.push_back({a, 1 - 2 * a, a});
      r.points.push_back({a, a, 1 - 2 * a});
      for (int i = 0; i < 3; ++i) r.weights.push_back(0.5 * w);
    }
    return r;
  }();
  return rule;
}

// 12-point rule, exact through degree 6; used for error norms so that the
// quadrature error stays far below the P2 convergence signal.
inline const QuadratureRule& triangle_rule_high() {
  static const QuadratureRule rule = [] {
    QuadratureRule r;
    const Real a1 = 0.063089014491502, w1 = 0.050844906370207;
    const Real a2 = 0.249286745170910, w2 = 0.116786275726379;
    const Real b1 = 0.310352451033785, b2 = 0.053145049844816;
    const Real w3 = 0.082851075618374;
    for (auto [a, w] : {std::pair{a1, w1}, std::pair{a2, w2}}) {
      r.points.push_back({1 - 2 * a, a, a});
      r.points.push_back({a, 1 - 2 * a, a});
      r.points.push_back({a, a, 1 - 2 * a});
      for (int i = 0; i < 3; ++i) r.weights.push_back(0.5 * w);
    }
    const std::array<std::array<Real, 3>, 6> perms = {{
        {1 - b1 - b2, b1, b2},
        {1 - b1 - b2, b2, b1},
        {b1, 1 - b1 - b2, b2},
        {b2, 1 - b1 - b2, b1},
        {b1, b2, 1 - b1 - b2},
        {b2, b1, 1 - b1 - b2},
    }};
    for (const auto& p : perms) {
      r.points.push_back(p);
      r.weights.push_back(0.5 * w3);
    }
    return r;
  }();
  return rule;
}

// Gauss rule on [0,1], exact through degree 5 (boundary traces of P2 need
// degree 4 at most in the traction integrals).
struct EdgeRule {
  std::vector<Real> points;   // in [0,1]
  std::vector<Real> weights;  // sum to 1

  int size() const { return static_cast<int>(points.size()); }
};

inline const EdgeRule& edge_rule() {
  static const EdgeRule rule = [] {
    EdgeRule r;
    const Real s = std::sqrt(3.0 / 5.0);
    r.points = {0.5 * (1 - s), 0.5, 0.5 * (1 + s)};
    r.weights = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};
    return r;
  }();
  return rule;
}

}  // namespace podns
