#pragma once

#include <cmath>
#include <memory>
#include <numbers>
#include <string>
#include <vector>

#include "podns/mesh.hpp"
#include "podns/problem.hpp"

namespace podns {

namespace tags {
// flow past a cylinder with jets
inline constexpr int inlet = 1;
inline constexpr int outlet = 2;
inline constexpr int symmetry = 3;
inline constexpr int cylinder_wall = 4;
inline constexpr int jet_upper = 5;
inline constexpr int jet_lower = 6;
// lid-driven cavity with jets
inline constexpr int lid = 1;
inline constexpr int cavity_wall = 2;
inline constexpr int cavity_jet1 = 3;
inline constexpr int cavity_jet2 = 4;
inline constexpr int cavity_jet3 = 5;
inline constexpr int cavity_out = 6;
// unit square
inline constexpr int square_bottom = 1;
inline constexpr int square_right = 2;
inline constexpr int square_top = 3;
inline constexpr int square_left = 4;
}  // namespace tags

// ---------------------------------------------------------------------------
// Structured generators

// Uniform N x N triangulation of [0,1]^2 with per-side tags.
inline Mesh make_unit_square_mesh(Index n) {
  return [n] {
    Mesh mesh;
    std::vector<Real> line(n + 1);
    for (Index i = 0; i <= n; ++i) line[i] = static_cast<Real>(i) / n;
    auto idx = [&](Index i, Index j) { return i * (n + 1) + j; };
    for (Index i = 0; i <= n; ++i)
      for (Index j = 0; j <= n; ++j)
        mesh.nodes.push_back({line[i], line[j]});
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j) {
        mesh.triangles.push_back({idx(i, j), idx(i + 1, j), idx(i + 1, j + 1)});
        mesh.triangles.push_back({idx(i, j), idx(i + 1, j + 1), idx(i, j + 1)});
      }
    for (Index i = 0; i < n; ++i) {
      mesh.boundary_facets.push_back(
          {{idx(i, 0), idx(i + 1, 0)}, tags::square_bottom});
      mesh.boundary_facets.push_back(
          {{idx(n, i), idx(n, i + 1)}, tags::square_right});
      mesh.boundary_facets.push_back(
          {{idx(i, n), idx(i + 1, n)}, tags::square_top});
      mesh.boundary_facets.push_back(
          {{idx(0, i), idx(0, i + 1)}, tags::square_left});
    }
    finalize_mesh(mesh);
    return mesh;
  }();
}

namespace detail {

// Grid lines for the cavity: uniform, with the lines nearest to the lid and
// jet profile breakpoints snapped onto them so facet tags partition cleanly.
inline std::vector<Real> cavity_lines(Index n) {
  std::vector<Real> line(n + 1);
  for (Index i = 0; i <= n; ++i) line[i] = static_cast<Real>(i) / n;
  for (const Real b : {0.06, 0.12, 0.88, 0.94}) {
    const Index k = std::clamp<Index>(
        static_cast<Index>(std::lround(b * n)), 1, n - 1);
    line[k] = b;
  }
  for (Index i = 0; i < n; ++i)
    if (!(line[i] < line[i + 1]))
      throw ConfigError("cavity mesh too coarse for breakpoint snapping");
  return line;
}

}  // namespace detail

// Cavity [0,1]^2, 2*n^2 triangles, breakpoints of the lid and jet profiles
// on grid lines.  Needs n >= 17.
inline Mesh make_cavity_mesh(Index n) {
  Mesh mesh;
  const auto line = detail::cavity_lines(n);
  auto idx = [&](Index i, Index j) { return i * (n + 1) + j; };
  for (Index i = 0; i <= n; ++i)
    for (Index j = 0; j <= n; ++j)
      mesh.nodes.push_back({line[i], line[j]});
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) {
      mesh.triangles.push_back({idx(i, j), idx(i + 1, j), idx(i + 1, j + 1)});
      mesh.triangles.push_back({idx(i, j), idx(i + 1, j + 1), idx(i, j + 1)});
    }
  auto side_tag = [&](Real x, Real y) {
    if (y >= 1.0 - 1e-12) return tags::lid;
    if (x <= 1e-12)
      return y >= 0.88 ? tags::cavity_jet1
             : y <= 0.12 ? tags::cavity_out
                         : tags::cavity_wall;
    if (x >= 1.0 - 1e-12)
      return y >= 0.88 ? tags::cavity_jet2
             : y <= 0.12 ? tags::cavity_jet3
                         : tags::cavity_wall;
    return tags::cavity_wall;
  };
  for (Index i = 0; i < n; ++i) {
    const Real ym_left = 0.5 * (line[i] + line[i + 1]);
    mesh.boundary_facets.push_back(
        {{idx(i, 0), idx(i + 1, 0)}, tags::cavity_wall});
    mesh.boundary_facets.push_back(
        {{idx(i, n), idx(i + 1, n)}, tags::lid});
    mesh.boundary_facets.push_back(
        {{idx(0, i), idx(0, i + 1)}, side_tag(0.0, ym_left)});
    mesh.boundary_facets.push_back(
        {{idx(n, i), idx(n, i + 1)}, side_tag(1.0, ym_left)});
  }
  finalize_mesh(mesh);
  return mesh;
}

namespace detail {

inline Real wrap_angle(Real a) {
  while (a > std::numbers::pi) a -= 2 * std::numbers::pi;
  while (a <= -std::numbers::pi) a += 2 * std::numbers::pi;
  return a;
}

}  // namespace detail

struct CylinderGeometry {
  static constexpr Real x_max = 30.5;
  static constexpr Real y_max = 16.0;
  static constexpr Real cx = 8.0;
  static constexpr Real cy = 8.0;
  static constexpr Real radius = 0.5;
  // full opening angle of each jet
  static constexpr Real omega = 5.0 * std::numbers::pi / 36.0;
  static constexpr Real jet_upper_angle = 0.5 * std::numbers::pi;
  static constexpr Real jet_lower_angle = -0.5 * std::numbers::pi;
};

// Single-block O-grid between the cylinder surface and the outer rectangle.
// The azimuthal grid contains the rectangle corners and the jet edges, so
// boundary facets never straddle a tag change; the radial grid is graded
// geometrically toward the cylinder.
inline Mesh make_cylinder_mesh(Index n_theta, Index n_radial,
                               Real grading = 1.2) {
  using Geo = CylinderGeometry;
  const Real pi = std::numbers::pi;
  const Vec2 c(Geo::cx, Geo::cy);

  std::vector<Real> critical = {
      std::atan2(0.0 - Geo::cy, 0.0 - Geo::cx),
      std::atan2(0.0 - Geo::cy, Geo::x_max - Geo::cx),
      std::atan2(Geo::y_max - Geo::cy, Geo::x_max - Geo::cx),
      std::atan2(Geo::y_max - Geo::cy, 0.0 - Geo::cx),
      Geo::jet_upper_angle - 0.5 * Geo::omega,
      Geo::jet_upper_angle + 0.5 * Geo::omega,
      Geo::jet_lower_angle - 0.5 * Geo::omega,
      Geo::jet_lower_angle + 0.5 * Geo::omega,
  };
  std::sort(critical.begin(), critical.end());

  std::vector<Real> theta;
  for (std::size_t s = 0; s < critical.size(); ++s) {
    const Real a = critical[s];
    const Real b = s + 1 < critical.size() ? critical[s + 1]
                                           : critical[0] + 2 * pi;
    const Index sub = std::max<Index>(
        1, static_cast<Index>(std::lround(n_theta * (b - a) / (2 * pi))));
    for (Index k = 0; k < sub; ++k)
      theta.push_back(a + (b - a) * static_cast<Real>(k) / sub);
  }
  const Index nt = static_cast<Index>(theta.size());

  // distance from the center to the rectangle along direction angle
  auto outer_radius = [&](Real a) {
    const Real dx = std::cos(a), dy = std::sin(a);
    Real t = std::numeric_limits<Real>::max();
    if (dx > 1e-14) t = std::min(t, (Geo::x_max - Geo::cx) / dx);
    if (dx < -1e-14) t = std::min(t, (0.0 - Geo::cx) / dx);
    if (dy > 1e-14) t = std::min(t, (Geo::y_max - Geo::cy) / dy);
    if (dy < -1e-14) t = std::min(t, (0.0 - Geo::cy) / dy);
    return t;
  };

  std::vector<Real> s(n_radial + 1);
  for (Index k = 0; k <= n_radial; ++k)
    s[k] = grading == 1.0
               ? static_cast<Real>(k) / n_radial
               : (std::pow(grading, static_cast<Real>(k)) - 1.0) /
                     (std::pow(grading, static_cast<Real>(n_radial)) - 1.0);

  Mesh mesh;
  auto idx = [&](Index k, Index j) { return k * nt + (j % nt); };
  for (Index k = 0; k <= n_radial; ++k)
    for (Index j = 0; j < nt; ++j) {
      const Real a = theta[j];
      const Real r = Geo::radius + s[k] * (outer_radius(a) - Geo::radius);
      mesh.nodes.push_back(c + r * Vec2(std::cos(a), std::sin(a)));
    }
  for (Index k = 0; k < n_radial; ++k)
    for (Index j = 0; j < nt; ++j) {
      mesh.triangles.push_back({idx(k, j), idx(k, j + 1), idx(k + 1, j + 1)});
      mesh.triangles.push_back({idx(k, j), idx(k + 1, j + 1), idx(k + 1, j)});
    }

  auto in_jet = [&](Real a, Real center) {
    return std::abs(detail::wrap_angle(a - center)) <= 0.5 * Geo::omega + 1e-12;
  };
  for (Index j = 0; j < nt; ++j) {
    const Real mid = theta[j] + 0.5 * (theta[(j + 1) % nt] +
                                       (j + 1 == nt ? 2 * pi : 0.0) -
                                       theta[j]);
    int tag = tags::cylinder_wall;
    if (in_jet(mid, Geo::jet_upper_angle)) tag = tags::jet_upper;
    if (in_jet(mid, Geo::jet_lower_angle)) tag = tags::jet_lower;
    mesh.boundary_facets.push_back({{idx(0, j), idx(0, j + 1)}, tag});

    const Vec2 pm = 0.5 * (mesh.nodes[idx(n_radial, j)] +
                           mesh.nodes[idx(n_radial, j + 1)]);
    int otag;
    if (pm.x() <= 1e-9)
      otag = tags::inlet;
    else if (pm.x() >= Geo::x_max - 1e-9)
      otag = tags::outlet;
    else if (pm.y() <= 1e-9 || pm.y() >= Geo::y_max - 1e-9)
      otag = tags::symmetry;
    else
      throw TopologyError("cylinder mesh: outer facet off the rectangle");
    mesh.boundary_facets.push_back(
        {{idx(n_radial, j), idx(n_radial, j + 1)}, otag});
  }
  finalize_mesh(mesh);
  return mesh;
}

// ---------------------------------------------------------------------------
// Problem registry

namespace detail {

inline std::pair<Index, Index> cylinder_resolution(int level) {
  if (level < 0) return {40, 8};
  return {96 + 32 * static_cast<Index>(level),
          18 + 6 * static_cast<Index>(level)};
}

inline Index cavity_resolution(int level) {
  if (level < 0) return 18;
  return 36 + 12 * static_cast<Index>(level);
}

}  // namespace detail

// mu = (Re, gamma): Re in [5,30] sets the inlet speed through
// U_in = Re nu / D with D = 1 and nu = 0.01; gamma in [0,4] scales the
// blowing/suction jets.  The jet profile is a cosine bump over each jet
// opening, directed along the cylinder radius.
inline FlowProblem make_cylinder_problem(int mesh_level) {
  using Geo = CylinderGeometry;
  auto mesh = std::make_shared<Mesh>();
  const auto [n_theta, n_radial] = detail::cylinder_resolution(mesh_level);
  *mesh = make_cylinder_mesh(n_theta, n_radial);

  FlowProblem pb;
  pb.name = "cylinder_jets";
  pb.mesh = mesh;
  pb.velocity_space = make_space(mesh, 2);
  pb.pressure_space = make_space(mesh, 1);
  pb.viscosity = [](const Vector&) { return 0.01; };
  pb.parameter_dim = 2;
  pb.parameter_box = {{5.0, 30.0}, {0.0, 4.0}};
  pb.force_tags = {tags::cylinder_wall, tags::jet_upper, tags::jet_lower};

  auto u_in = [](const Vector& mu) { return mu[0] * 0.01; };
  auto jet = [u_in](const Vector& mu, const Vec2& x, Real center, Real sign) {
    const Real a = std::atan2(x.y() - Geo::cy, x.x() - Geo::cx);
    const Real d = detail::wrap_angle(a - center);
    const Real profile =
        2.0 * u_in(mu) * std::cos(std::numbers::pi / Geo::omega * d);
    return Vec2(sign * mu[1] * profile * (x.x() - Geo::cx),
                sign * mu[1] * profile * (x.y() - Geo::cy));
  };
  pb.dirichlet_spec[tags::inlet] = [u_in](const Vector& mu, const Vec2&) {
    return Vec2(u_in(mu), 0.0);
  };
  pb.dirichlet_spec[tags::cylinder_wall] = [](const Vector&, const Vec2&) {
    return Vec2::Zero().eval();
  };
  pb.dirichlet_spec[tags::jet_upper] = [jet](const Vector& mu, const Vec2& x) {
    return jet(mu, x, Geo::jet_upper_angle, 1.0);
  };
  pb.dirichlet_spec[tags::jet_lower] = [jet](const Vector& mu, const Vec2& x) {
    return jet(mu, x, Geo::jet_lower_angle, -1.0);
  };
  pb.slip_tags = {tags::symmetry};
  pb.neumann_spec[tags::outlet] = [](const Vector&, const Vec2&) {
    return Vec2::Zero().eval();
  };
  pb.validate();
  return pb;
}

inline Real cavity_lid_profile(Real x) {
  if (x <= 0.06) return 10.0 * x / 0.06;
  if (x < 0.94) return 10.0;
  return 10.0 * (1.0 - x) / 0.06;
}

inline Real cavity_jet_profile(int which, Real y) {
  if (which == 3) return -1.0 + std::cos(2 * std::numbers::pi * y / 0.12);
  return 1.0 - std::cos(2 * std::numbers::pi * (y - 0.88) / 0.12);
}

// mu = (scale) in (0,1]: the lid drives the cavity at Re = 1000 and the
// three jets are scaled by mu.
inline FlowProblem make_cavity_problem(int mesh_level) {
  auto mesh = std::make_shared<Mesh>();
  *mesh = make_cavity_mesh(detail::cavity_resolution(mesh_level));

  FlowProblem pb;
  pb.name = "lid_cavity";
  pb.mesh = mesh;
  pb.velocity_space = make_space(mesh, 2);
  pb.pressure_space = make_space(mesh, 1);
  pb.viscosity = [](const Vector&) { return 0.01; };
  pb.parameter_dim = 1;
  pb.parameter_box = {{0.0, 1.0}};  // physical range is (0,1]
  pb.force_tags = {tags::lid};

  pb.dirichlet_spec[tags::lid] = [](const Vector&, const Vec2& x) {
    return Vec2(cavity_lid_profile(x.x()), 0.0);
  };
  pb.dirichlet_spec[tags::cavity_wall] = [](const Vector&, const Vec2&) {
    return Vec2::Zero().eval();
  };
  for (const auto [tag, which] : {std::pair{tags::cavity_jet1, 1},
                                  {tags::cavity_jet2, 2},
                                  {tags::cavity_jet3, 3}}) {
    pb.dirichlet_spec[tag] = [which = which](const Vector& mu, const Vec2& x) {
      return Vec2(mu[0] * cavity_jet_profile(which, x.y()), 0.0);
    };
  }
  pb.neumann_spec[tags::cavity_out] = [](const Vector&, const Vec2&) {
    return Vec2::Zero().eval();
  };
  pb.validate();
  return pb;
}

inline FlowProblem make_problem(const std::string& name, int mesh_level) {
  if (name == "cylinder_jets") return make_cylinder_problem(mesh_level);
  if (name == "lid_cavity") return make_cavity_problem(mesh_level);
  throw UnknownProblem("unknown problem: " + name);
}

}  // namespace podns
