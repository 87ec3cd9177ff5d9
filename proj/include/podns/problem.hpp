#pragma once

#include <functional>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "podns/assembly.hpp"
#include "podns/space.hpp"
#include "podns/types.hpp"

namespace podns {

// Parametric flow problem: mu -> (viscosity, Dirichlet data, tractions).
// Every boundary tag must appear in exactly one of dirichlet_spec,
// neumann_spec or slip_tags.  Slip (symmetry) boundaries must be axis
// aligned: the normal velocity component is constrained to zero and the
// tangential condition is natural.
struct FlowProblem {
  std::string name;
  std::shared_ptr<const Mesh> mesh;
  FeSpace velocity_space;  // P2
  FeSpace pressure_space;  // P1

  std::function<Real(const Vector& mu)> viscosity;
  std::map<int, std::function<Vec2(const Vector& mu, const Vec2& x)>>
      dirichlet_spec;
  std::map<int, std::function<Vec2(const Vector& mu, const Vec2& x)>>
      neumann_spec;
  std::set<int> slip_tags;
  std::function<Vec2(const Vector& mu, const Vec2& x)> body_force;  // optional

  int parameter_dim = 0;
  std::vector<std::array<Real, 2>> parameter_box;
  std::vector<int> force_tags;  // quantity-of-interest surface

  // With no Neumann boundary the pressure is defined up to a constant and
  // one pressure dof gets pinned.
  bool pin_pressure() const { return neumann_spec.empty(); }

  void validate() const {
    if (parameter_dim <= 0 || parameter_box.size() !=
        static_cast<std::size_t>(parameter_dim))
      throw ConfigError("FlowProblem: parameter box dimension mismatch");
    for (const auto& [lo, hi] : parameter_box)
      if (!(lo <= hi)) throw ConfigError("FlowProblem: empty parameter box");
    const auto tags = mesh->boundary_tags();
    for (int tag : tags) {
      const int n = (dirichlet_spec.count(tag) ? 1 : 0) +
                    (neumann_spec.count(tag) ? 1 : 0) +
                    (slip_tags.count(tag) ? 1 : 0);
      if (n != 1)
        throw UnknownTag("FlowProblem: tag " + std::to_string(tag) +
                         " must appear in exactly one boundary spec");
    }
    for (const auto& [tag, fn] : dirichlet_spec)
      if (!tags.count(tag)) throw UnknownTag("dirichlet tag not in mesh");
    for (const auto& [tag, fn] : neumann_spec)
      if (!tags.count(tag)) throw UnknownTag("neumann tag not in mesh");
    for (int tag : slip_tags)
      if (!tags.count(tag)) throw UnknownTag("slip tag not in mesh");
  }

  bool in_box(const Vector& mu) const {
    if (mu.size() != parameter_dim) return false;
    for (int d = 0; d < parameter_dim; ++d)
      if (mu[d] < parameter_box[d][0] - 1e-12 ||
          mu[d] > parameter_box[d][1] + 1e-12)
        return false;
    return true;
  }

  // Scalar velocity dofs constrained at mu.  Slip facets constrain the
  // normal component; full Dirichlet facets overwrite both components.
  DirichletBC dirichlet_at(const Vector& mu) const {
    const Mesh& m = *mesh;
    const FeSpace& v = velocity_space;
    std::map<Index, Real> vals;
    auto facet_dofs = [&](Index f) {
      const auto& fc = m.boundary_facets[f];
      std::array<Index, 3> dofs = {fc.nodes[0], fc.nodes[1], -1};
      int n = 2;
      if (v.degree == 2) {
        const Index cell = m.facet_cell[f];
        dofs[2] = v.cell_dofs[cell][3 + m.facet_local_edge[f]];
        n = 3;
      }
      return std::pair{dofs, n};
    };
    for (Index f = 0; f < m.n_facets(); ++f) {
      const int tag = m.boundary_facets[f].tag;
      if (!slip_tags.count(tag)) continue;
      const Vec2 nrm = m.facet_normal(f);
      int comp;
      if (std::abs(nrm.x()) > 0.99)
        comp = 0;
      else if (std::abs(nrm.y()) > 0.99)
        comp = 1;
      else
        throw TopologyError("slip boundary must be axis aligned");
      const auto [dofs, n] = facet_dofs(f);
      for (int i = 0; i < n; ++i) vals[2 * dofs[i] + comp] = 0.0;
    }
    for (Index f = 0; f < m.n_facets(); ++f) {
      const int tag = m.boundary_facets[f].tag;
      auto it = dirichlet_spec.find(tag);
      if (it == dirichlet_spec.end()) continue;
      const auto [dofs, n] = facet_dofs(f);
      for (int i = 0; i < n; ++i) {
        const Vec2 g = it->second(mu, v.dof_coords[dofs[i]]);
        vals[2 * dofs[i]] = g.x();
        vals[2 * dofs[i] + 1] = g.y();
      }
    }
    return DirichletBC::from_map(vals);
  }

  // Boundary traction plus body-force load at mu.
  Vector load_vector(const Vector& mu) const {
    Vector f = Vector::Zero(velocity_space.n_vector_dofs());
    for (const auto& [tag, traction] : neumann_spec)
      f += assemble_neumann(velocity_space, tag,
                            [&](const Vec2& x) { return traction(mu, x); });
    if (body_force) {
      const Mesh& m = *mesh;
      const auto& rule = triangle_rule();
      Real N[6];
      for (Index t = 0; t < m.n_triangles(); ++t) {
        const CellGeom g = cell_geometry(m, t);
        for (int q = 0; q < rule.size(); ++q) {
          const Vec2 x = g.point(rule.points[q], m);
          const Vec2 b = body_force(mu, x);
          shape_values(velocity_space.degree, rule.points[q], N);
          const Real wgt = rule.weights[q] * g.abs_det;
          for (int i = 0; i < velocity_space.dofs_per_cell(); ++i) {
            const Index d = velocity_space.cell_dofs[t][i];
            f[2 * d] += wgt * b.x() * N[i];
            f[2 * d + 1] += wgt * b.y() * N[i];
          }
        }
      }
    }
    return f;
  }
};

inline std::vector<char> constrained_mask(const FlowProblem& pb,
                                          const DirichletBC& bc) {
  std::vector<char> mask(pb.velocity_space.n_vector_dofs(), 0);
  for (const Index d : bc.constrained_dofs) mask[d] = 1;
  return mask;
}

}  // namespace podns
