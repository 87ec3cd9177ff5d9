#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "podns/linalg.hpp"
#include "podns/quadrature.hpp"
#include "podns/space.hpp"
#include "podns/types.hpp"

namespace podns {

// d(u,v) = int nu grad(u):grad(v) on the interleaved vector space.
inline SparseMatrix assemble_diffusion(const FeSpace& v, Real nu) {
  const Mesh& mesh = *v.mesh;
  const auto& rule = triangle_rule();
  const int nd = v.dofs_per_cell();
  std::vector<Triplet> trips;
  trips.reserve(mesh.triangles.size() * nd * nd * 2);
  Vec2 dN[6];
  for (Index t = 0; t < mesh.n_triangles(); ++t) {
    const CellGeom g = cell_geometry(mesh, t);
    Eigen::Matrix<Real, 6, 6> loc = Eigen::Matrix<Real, 6, 6>::Zero();
    for (int q = 0; q < rule.size(); ++q) {
      shape_gradients(v.degree, rule.points[q], g.grad_l, dN);
      const Real w = rule.weights[q] * g.abs_det;
      for (int i = 0; i < nd; ++i)
        for (int j = 0; j < nd; ++j)
          loc(i, j) += w * nu * dN[i].dot(dN[j]);
    }
    for (int i = 0; i < nd; ++i)
      for (int j = 0; j < nd; ++j) {
        const Index gi = v.cell_dofs[t][i], gj = v.cell_dofs[t][j];
        for (int c = 0; c < 2; ++c)
          trips.emplace_back(2 * gi + c, 2 * gj + c, loc(i, j));
      }
  }
  SparseMatrix A(v.n_vector_dofs(), v.n_vector_dofs());
  A.setFromTriplets(trips.begin(), trips.end());
  return A;
}

// c(w, u, v) = int (w . grad u) . v with frozen convective field w.
inline SparseMatrix assemble_convection_c1(const FeSpace& v, const Vector& w) {
  const Mesh& mesh = *v.mesh;
  if (w.size() != v.n_vector_dofs())
    throw DimensionMismatch("assemble_convection_c1: field size mismatch");
  const auto& rule = triangle_rule();
  const int nd = v.dofs_per_cell();
  std::vector<Triplet> trips;
  trips.reserve(mesh.triangles.size() * nd * nd * 2);
  Real N[6];
  Vec2 dN[6];
  for (Index t = 0; t < mesh.n_triangles(); ++t) {
    const CellGeom g = cell_geometry(mesh, t);
    Eigen::Matrix<Real, 6, 6> loc = Eigen::Matrix<Real, 6, 6>::Zero();
    for (int q = 0; q < rule.size(); ++q) {
      shape_values(v.degree, rule.points[q], N);
      shape_gradients(v.degree, rule.points[q], g.grad_l, dN);
      const Vec2 wq = eval_vector(v, w, t, rule.points[q]);
      const Real wgt = rule.weights[q] * g.abs_det;
      for (int i = 0; i < nd; ++i)
        for (int j = 0; j < nd; ++j)
          loc(i, j) += wgt * N[i] * wq.dot(dN[j]);
    }
    for (int i = 0; i < nd; ++i)
      for (int j = 0; j < nd; ++j) {
        const Index gi = v.cell_dofs[t][i], gj = v.cell_dofs[t][j];
        for (int c = 0; c < 2; ++c)
          trips.emplace_back(2 * gi + c, 2 * gj + c, loc(i, j));
      }
  }
  SparseMatrix A(v.n_vector_dofs(), v.n_vector_dofs());
  A.setFromTriplets(trips.begin(), trips.end());
  return A;
}

// c(u, w, v) = int (u . grad w) . v; couples components through grad w.
inline SparseMatrix assemble_convection_c2(const FeSpace& v, const Vector& w) {
  const Mesh& mesh = *v.mesh;
  if (w.size() != v.n_vector_dofs())
    throw DimensionMismatch("assemble_convection_c2: field size mismatch");
  const auto& rule = triangle_rule();
  const int nd = v.dofs_per_cell();
  std::vector<Triplet> trips;
  trips.reserve(mesh.triangles.size() * nd * nd * 4);
  Real N[6];
  for (Index t = 0; t < mesh.n_triangles(); ++t) {
    const CellGeom g = cell_geometry(mesh, t);
    for (int q = 0; q < rule.size(); ++q) {
      shape_values(v.degree, rule.points[q], N);
      const Mat2 gw = eval_vector_gradient(v, g, w, t, rule.points[q]);
      const Real wgt = rule.weights[q] * g.abs_det;
      for (int i = 0; i < nd; ++i)
        for (int j = 0; j < nd; ++j) {
          const Index gi = v.cell_dofs[t][i], gj = v.cell_dofs[t][j];
          const Real m = wgt * N[i] * N[j];
          // trial N_j e_c convects w: (N_j e_c . grad) w = N_j dw/dx_c
          for (int ci = 0; ci < 2; ++ci)
            for (int cj = 0; cj < 2; ++cj)
              trips.emplace_back(2 * gi + ci, 2 * gj + cj, m * gw(ci, cj));
        }
    }
  }
  SparseMatrix A(v.n_vector_dofs(), v.n_vector_dofs());
  A.setFromTriplets(trips.begin(), trips.end());
  return A;
}

// b(v, q) = int q div(v); rows are pressure dofs, columns velocity dofs.
inline SparseMatrix assemble_divergence(const FeSpace& v, const FeSpace& p) {
  const Mesh& mesh = *v.mesh;
  const auto& rule = triangle_rule();
  const int ndv = v.dofs_per_cell(), ndp = p.dofs_per_cell();
  std::vector<Triplet> trips;
  trips.reserve(mesh.triangles.size() * ndv * ndp * 2);
  Real Np[6];
  Vec2 dN[6];
  for (Index t = 0; t < mesh.n_triangles(); ++t) {
    const CellGeom g = cell_geometry(mesh, t);
    for (int q = 0; q < rule.size(); ++q) {
      shape_values(p.degree, rule.points[q], Np);
      shape_gradients(v.degree, rule.points[q], g.grad_l, dN);
      const Real wgt = rule.weights[q] * g.abs_det;
      for (int i = 0; i < ndp; ++i)
        for (int j = 0; j < ndv; ++j) {
          const Index gi = p.cell_dofs[t][i], gj = v.cell_dofs[t][j];
          trips.emplace_back(gi, 2 * gj, wgt * Np[i] * dN[j].x());
          trips.emplace_back(gi, 2 * gj + 1, wgt * Np[i] * dN[j].y());
        }
    }
  }
  SparseMatrix B(p.ndof, v.n_vector_dofs());
  B.setFromTriplets(trips.begin(), trips.end());
  return B;
}

namespace detail {
inline SparseMatrix scalar_mass_or_stiffness(const FeSpace& s, bool stiffness) {
  const Mesh& mesh = *s.mesh;
  const auto& rule = triangle_rule();
  const int nd = s.dofs_per_cell();
  std::vector<Triplet> trips;
  trips.reserve(mesh.triangles.size() * nd * nd);
  Real N[6];
  Vec2 dN[6];
  for (Index t = 0; t < mesh.n_triangles(); ++t) {
    const CellGeom g = cell_geometry(mesh, t);
    for (int q = 0; q < rule.size(); ++q) {
      const Real wgt = rule.weights[q] * g.abs_det;
      if (stiffness) {
        shape_gradients(s.degree, rule.points[q], g.grad_l, dN);
        for (int i = 0; i < nd; ++i)
          for (int j = 0; j < nd; ++j)
            trips.emplace_back(s.cell_dofs[t][i], s.cell_dofs[t][j],
                               wgt * dN[i].dot(dN[j]));
      } else {
        shape_values(s.degree, rule.points[q], N);
        for (int i = 0; i < nd; ++i)
          for (int j = 0; j < nd; ++j)
            trips.emplace_back(s.cell_dofs[t][i], s.cell_dofs[t][j],
                               wgt * N[i] * N[j]);
      }
    }
  }
  SparseMatrix A(s.ndof, s.ndof);
  A.setFromTriplets(trips.begin(), trips.end());
  return A;
}
}  // namespace detail

inline SparseMatrix assemble_scalar_mass(const FeSpace& s) {
  return detail::scalar_mass_or_stiffness(s, false);
}

inline SparseMatrix assemble_scalar_laplacian(const FeSpace& s) {
  return detail::scalar_mass_or_stiffness(s, true);
}

inline SparseMatrix assemble_vector_mass(const FeSpace& v) {
  const SparseMatrix m = assemble_scalar_mass(v);
  std::vector<Triplet> trips;
  trips.reserve(2 * m.nonZeros());
  for (int k = 0; k < m.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(m, k); it; ++it)
      for (int c = 0; c < 2; ++c)
        trips.emplace_back(2 * it.row() + c, 2 * it.col() + c, it.value());
  SparseMatrix A(v.n_vector_dofs(), v.n_vector_dofs());
  A.setFromTriplets(trips.begin(), trips.end());
  return A;
}

// Nodal load from a boundary traction on one tagged boundary piece:
// f_i = int_Gamma t . N_i dGamma.
inline Vector assemble_neumann(
    const FeSpace& v, int tag,
    const std::function<Vec2(const Vec2&)>& traction) {
  const Mesh& mesh = *v.mesh;
  bool found = false;
  for (const auto& f : mesh.boundary_facets)
    if (f.tag == tag) { found = true; break; }
  if (!found) throw UnknownTag("assemble_neumann: unknown boundary tag");

  const auto& rule = edge_rule();
  Vector out = Vector::Zero(v.n_vector_dofs());
  Real N[6];
  for (Index f = 0; f < mesh.n_facets(); ++f) {
    if (mesh.boundary_facets[f].tag != tag) continue;
    const auto& fc = mesh.boundary_facets[f];
    const Vec2 a = mesh.nodes[fc.nodes[0]], b = mesh.nodes[fc.nodes[1]];
    const Real len = (b - a).norm();
    const Index cell = mesh.facet_cell[f];
    const CellGeom g = cell_geometry(mesh, cell);
    for (int q = 0; q < rule.size(); ++q) {
      const Vec2 x = (1 - rule.points[q]) * a + rule.points[q] * b;
      const Vec2 t = traction(x);
      shape_values(v.degree, g.barycentric(x), N);
      const Real wgt = rule.weights[q] * len;
      for (int i = 0; i < v.dofs_per_cell(); ++i) {
        const Index d = v.cell_dofs[cell][i];
        out[2 * d] += wgt * t.x() * N[i];
        out[2 * d + 1] += wgt * t.y() * N[i];
      }
    }
  }
  return out;
}

// Row replacement: constrained rows become identity rows and the rhs takes
// the boundary values.  Columns are not eliminated, so symmetry is lost.
inline void apply_dirichlet(SparseMatrix& A, Vector& b, const DirichletBC& bc) {
  if (bc.size() == 0) return;
  std::vector<char> mask(A.rows(), 0);
  for (std::size_t k = 0; k < bc.size(); ++k) {
    const Index d = bc.constrained_dofs[k];
    if (d < 0 || d >= A.rows())
      throw DimensionMismatch("apply_dirichlet: dof out of range");
    mask[d] = 1;
    b[d] = bc.values[k];
  }
  std::vector<Triplet> trips;
  trips.reserve(A.nonZeros());
  for (int k = 0; k < A.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(A, k); it; ++it)
      if (!mask[it.row()]) trips.emplace_back(it.row(), it.col(), it.value());
  for (const Index d : bc.constrained_dofs) trips.emplace_back(d, d, 1.0);
  SparseMatrix out(A.rows(), A.cols());
  out.setFromTriplets(trips.begin(), trips.end());
  A.swap(out);
}

// Samplers evaluate data at assembly quadrature points.
using CellSampler2 =
    std::function<Vec2(Index cell, int q, const Vec2& x)>;
using CellSampler1 =
    std::function<Real(Index cell, int q, const Vec2& x)>;

// L2 projection of a sampled vector field into the velocity space; solves
// the vector mass system.
inline Vector l2_project_vector(const FeSpace& v, const CellSampler2& field) {
  const Mesh& mesh = *v.mesh;
  const auto& rule = triangle_rule();
  Vector rhs = Vector::Zero(v.n_vector_dofs());
  Real N[6];
  for (Index t = 0; t < mesh.n_triangles(); ++t) {
    const CellGeom g = cell_geometry(mesh, t);
    for (int q = 0; q < rule.size(); ++q) {
      const Vec2 x = g.point(rule.points[q], mesh);
      const Vec2 val = field(t, q, x);
      shape_values(v.degree, rule.points[q], N);
      const Real wgt = rule.weights[q] * g.abs_det;
      for (int i = 0; i < v.dofs_per_cell(); ++i) {
        const Index d = v.cell_dofs[t][i];
        rhs[2 * d] += wgt * val.x() * N[i];
        rhs[2 * d + 1] += wgt * val.y() * N[i];
      }
    }
  }
  return sparse_solve(assemble_vector_mass(v), rhs);
}

// Traction integral over one or more tagged boundary pieces:
// (drag, lift) = int (nu grad u - p I) n dGamma, n outward from the fluid.
inline Vec2 boundary_force(const FeSpace& v, const FeSpace& p, const Vector& u,
                           const Vector& pr, const std::vector<int>& tags,
                           Real nu) {
  const Mesh& mesh = *v.mesh;
  const auto known = mesh.boundary_tags();
  for (int tag : tags)
    if (known.find(tag) == known.end())
      throw UnknownTag("boundary_force: unknown boundary tag");

  const auto& rule = edge_rule();
  Vec2 force = Vec2::Zero();
  for (Index f = 0; f < mesh.n_facets(); ++f) {
    const int tag = mesh.boundary_facets[f].tag;
    if (std::find(tags.begin(), tags.end(), tag) == tags.end()) continue;
    const auto& fc = mesh.boundary_facets[f];
    const Vec2 a = mesh.nodes[fc.nodes[0]], b = mesh.nodes[fc.nodes[1]];
    const Real len = (b - a).norm();
    const Vec2 n = mesh.facet_normal(f);
    const Index cell = mesh.facet_cell[f];
    const CellGeom g = cell_geometry(mesh, cell);
    for (int q = 0; q < rule.size(); ++q) {
      const Vec2 x = (1 - rule.points[q]) * a + rule.points[q] * b;
      const auto l = g.barycentric(x);
      const Mat2 grad_u = eval_vector_gradient(v, g, u, cell, l);
      const Real pq = eval_scalar(p, pr, cell, l);
      const Vec2 traction = nu * (grad_u * n) - pq * n;
      force += rule.weights[q] * len * traction;
    }
  }
  return force;
}

// L2 norms against an analytic reference, via the degree-6 rule.
inline Real l2_error_vector(const FeSpace& v, const Vector& u,
                            const std::function<Vec2(const Vec2&)>& exact) {
  const Mesh& mesh = *v.mesh;
  const auto& rule = triangle_rule_high();
  Real err2 = 0;
  for (Index t = 0; t < mesh.n_triangles(); ++t) {
    const CellGeom g = cell_geometry(mesh, t);
    for (int q = 0; q < rule.size(); ++q) {
      const Vec2 x = g.point(rule.points[q], mesh);
      const Vec2 diff = eval_vector(v, u, t, rule.points[q]) - exact(x);
      err2 += rule.weights[q] * g.abs_det * diff.squaredNorm();
    }
  }
  return std::sqrt(err2);
}

inline Real l2_error_scalar(const FeSpace& s, const Vector& u,
                            const std::function<Real(const Vec2&)>& exact) {
  const Mesh& mesh = *s.mesh;
  const auto& rule = triangle_rule_high();
  Real err2 = 0;
  for (Index t = 0; t < mesh.n_triangles(); ++t) {
    const CellGeom g = cell_geometry(mesh, t);
    for (int q = 0; q < rule.size(); ++q) {
      const Vec2 x = g.point(rule.points[q], mesh);
      const Real diff = eval_scalar(s, u, t, rule.points[q]) - exact(x);
      err2 += rule.weights[q] * g.abs_det * diff * diff;
    }
  }
  return std::sqrt(err2);
}

inline Real domain_integral_scalar(const FeSpace& s, const Vector& u) {
  const Mesh& mesh = *s.mesh;
  const auto& rule = triangle_rule();
  Real val = 0;
  for (Index t = 0; t < mesh.n_triangles(); ++t) {
    const CellGeom g = cell_geometry(mesh, t);
    for (int q = 0; q < rule.size(); ++q)
      val += rule.weights[q] * g.abs_det * eval_scalar(s, u, t, rule.points[q]);
  }
  return val;
}

inline Real domain_area(const Mesh& mesh) {
  Real a = 0;
  for (Index t = 0; t < mesh.n_triangles(); ++t) a += mesh.signed_area(t);
  return a;
}

// Nodal interpolation helpers.
inline Vector interpolate_vector(const FeSpace& v,
                                 const std::function<Vec2(const Vec2&)>& f) {
  Vector out(v.n_vector_dofs());
  for (Index i = 0; i < v.ndof; ++i) {
    const Vec2 val = f(v.dof_coords[i]);
    out[2 * i] = val.x();
    out[2 * i + 1] = val.y();
  }
  return out;
}

inline Vector interpolate_scalar(const FeSpace& s,
                                 const std::function<Real(const Vec2&)>& f) {
  Vector out(s.ndof);
  for (Index i = 0; i < s.ndof; ++i) out[i] = f(s.dof_coords[i]);
  return out;
}

}  // namespace podns
