#pragma once

#include <array>
#include <map>
#include <memory>
#include <vector>

#include "podns/mesh.hpp"
#include "podns/types.hpp"

namespace podns {

// Scalar Lagrange space on triangles, degree 1 or 2.  P2 numbers vertex
// dofs first, then one dof per edge midpoint.  Local dofs: 0,1,2 vertices;
// 3,4,5 midpoints of edges (0,1),(1,2),(2,0).
//
// The vector-valued velocity space interleaves components per node:
// dof 2*i is the x-component and 2*i+1 the y-component of scalar dof i.
struct FeSpace {
  std::shared_ptr<const Mesh> mesh;
  int degree = 1;
  Index ndof = 0;
  std::vector<Vec2> dof_coords;
  std::vector<std::array<Index, 6>> cell_dofs;  // P1 uses the first 3

  int dofs_per_cell() const { return degree == 1 ? 3 : 6; }
  Index n_vector_dofs() const { return 2 * ndof; }
};

inline FeSpace make_space(std::shared_ptr<const Mesh> mesh, int degree) {
  if (degree != 1 && degree != 2)
    throw DimensionMismatch("make_space: degree must be 1 or 2");
  FeSpace sp;
  sp.mesh = mesh;
  sp.degree = degree;
  const Index nv = mesh->n_nodes();
  sp.dof_coords.assign(mesh->nodes.begin(), mesh->nodes.end());
  sp.cell_dofs.resize(mesh->triangles.size());
  if (degree == 1) {
    sp.ndof = nv;
    for (Index t = 0; t < mesh->n_triangles(); ++t) {
      const auto& tri = mesh->triangles[t];
      sp.cell_dofs[t] = {tri[0], tri[1], tri[2], -1, -1, -1};
    }
    return sp;
  }
  std::map<std::pair<Index, Index>, Index> edge_ids;
  for (Index t = 0; t < mesh->n_triangles(); ++t) {
    const auto& tri = mesh->triangles[t];
    auto& cd = sp.cell_dofs[t];
    cd = {tri[0], tri[1], tri[2], -1, -1, -1};
    for (int e = 0; e < 3; ++e) {
      const Index a = tri[e], b = tri[(e + 1) % 3];
      const auto key = detail::sorted_edge(a, b);
      auto [it, inserted] = edge_ids.try_emplace(
          key, nv + static_cast<Index>(edge_ids.size()));
      if (inserted)
        sp.dof_coords.push_back(0.5 * (mesh->nodes[a] + mesh->nodes[b]));
      cd[3 + e] = it->second;
    }
  }
  sp.ndof = nv + static_cast<Index>(edge_ids.size());
  return sp;
}

// Shape function values at a barycentric point.
inline void shape_values(int degree, const std::array<Real, 3>& l, Real* N) {
  if (degree == 1) {
    N[0] = l[0];
    N[1] = l[1];
    N[2] = l[2];
    return;
  }
  N[0] = l[0] * (2 * l[0] - 1);
  N[1] = l[1] * (2 * l[1] - 1);
  N[2] = l[2] * (2 * l[2] - 1);
  N[3] = 4 * l[0] * l[1];
  N[4] = 4 * l[1] * l[2];
  N[5] = 4 * l[2] * l[0];
}

// Shape gradients with respect to barycentric coordinates assembled into
// physical gradients:  grad N_i = sum_k (dN_i/dl_k) grad l_k.
inline void shape_gradients(int degree, const std::array<Real, 3>& l,
                            const std::array<Vec2, 3>& grad_l, Vec2* dN) {
  if (degree == 1) {
    dN[0] = grad_l[0];
    dN[1] = grad_l[1];
    dN[2] = grad_l[2];
    return;
  }
  dN[0] = (4 * l[0] - 1) * grad_l[0];
  dN[1] = (4 * l[1] - 1) * grad_l[1];
  dN[2] = (4 * l[2] - 1) * grad_l[2];
  dN[3] = 4 * (l[1] * grad_l[0] + l[0] * grad_l[1]);
  dN[4] = 4 * (l[2] * grad_l[1] + l[1] * grad_l[2]);
  dN[5] = 4 * (l[0] * grad_l[2] + l[2] * grad_l[0]);
}

// Affine geometry of one triangle.
struct CellGeom {
  std::array<Index, 3> verts;
  Vec2 p0;
  Mat2 jac;        // [p1-p0 | p2-p0]
  Mat2 inv_jac;    // jac^{-1}
  Real abs_det;    // 2 * area
  std::array<Vec2, 3> grad_l;

  Vec2 point(const std::array<Real, 3>& l, const Mesh& mesh) const {
    return l[0] * mesh.nodes[verts[0]] + l[1] * mesh.nodes[verts[1]] +
           l[2] * mesh.nodes[verts[2]];
  }

  std::array<Real, 3> barycentric(const Vec2& x) const {
    const Vec2 xi = inv_jac * (x - p0);
    return {1.0 - xi.x() - xi.y(), xi.x(), xi.y()};
  }
};

inline CellGeom cell_geometry(const Mesh& mesh, Index t) {
  CellGeom g;
  g.verts = mesh.triangles[t];
  g.p0 = mesh.nodes[g.verts[0]];
  const Vec2 e1 = mesh.nodes[g.verts[1]] - g.p0;
  const Vec2 e2 = mesh.nodes[g.verts[2]] - g.p0;
  g.jac << e1.x(), e2.x(), e1.y(), e2.y();
  const Real det = g.jac.determinant();
  g.abs_det = std::abs(det);
  g.inv_jac = g.jac.inverse();
  // grad l1 and grad l2 are the rows of jac^{-1}; grad l0 completes to zero
  g.grad_l[1] = g.inv_jac.row(0).transpose();
  g.grad_l[2] = g.inv_jac.row(1).transpose();
  g.grad_l[0] = -g.grad_l[1] - g.grad_l[2];
  return g;
}

// Velocity/scalar field evaluation inside a cell.
inline Vec2 eval_vector(const FeSpace& sp, const Vector& u, Index cell,
                        const std::array<Real, 3>& l) {
  Real N[6];
  shape_values(sp.degree, l, N);
  Vec2 val = Vec2::Zero();
  for (int i = 0; i < sp.dofs_per_cell(); ++i) {
    const Index d = sp.cell_dofs[cell][i];
    val.x() += N[i] * u[2 * d];
    val.y() += N[i] * u[2 * d + 1];
  }
  return val;
}

inline Real eval_scalar(const FeSpace& sp, const Vector& u, Index cell,
                        const std::array<Real, 3>& l) {
  Real N[6];
  shape_values(sp.degree, l, N);
  Real val = 0;
  for (int i = 0; i < sp.dofs_per_cell(); ++i)
    val += N[i] * u[sp.cell_dofs[cell][i]];
  return val;
}

// Gradient of a vector field: row c is grad of component c.
inline Mat2 eval_vector_gradient(const FeSpace& sp, const CellGeom& g,
                                 const Vector& u, Index cell,
                                 const std::array<Real, 3>& l) {
  Vec2 dN[6];
  shape_gradients(sp.degree, l, g.grad_l, dN);
  Mat2 grad = Mat2::Zero();
  for (int i = 0; i < sp.dofs_per_cell(); ++i) {
    const Index d = sp.cell_dofs[cell][i];
    grad.row(0) += u[2 * d] * dN[i].transpose();
    grad.row(1) += u[2 * d + 1] * dN[i].transpose();
  }
  return grad;
}

inline Vec2 eval_scalar_gradient(const FeSpace& sp, const CellGeom& g,
                                 const Vector& u, Index cell,
                                 const std::array<Real, 3>& l) {
  Vec2 dN[6];
  shape_gradients(sp.degree, l, g.grad_l, dN);
  Vec2 grad = Vec2::Zero();
  for (int i = 0; i < sp.dofs_per_cell(); ++i)
    grad += u[sp.cell_dofs[cell][i]] * dN[i];
  return grad;
}

// Constrained scalar dofs of the velocity space with their values,
// strictly increasing in dof index.
struct DirichletBC {
  std::vector<Index> constrained_dofs;
  std::vector<Real> values;

  static DirichletBC from_map(const std::map<Index, Real>& m) {
    DirichletBC bc;
    bc.constrained_dofs.reserve(m.size());
    bc.values.reserve(m.size());
    for (const auto& [dof, val] : m) {
      bc.constrained_dofs.push_back(dof);
      bc.values.push_back(val);
    }
    return bc;
  }

  std::size_t size() const { return constrained_dofs.size(); }

  DirichletBC homogeneous() const {
    DirichletBC bc = *this;
    std::fill(bc.values.begin(), bc.values.end(), 0.0);
    return bc;
  }
};

}  // namespace podns
