#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "podns/assembly.hpp"
#include "podns/counters.hpp"
#include "podns/problem.hpp"
#include "podns/types.hpp"

namespace podns {

// The saddle systems are assembled as [A  G^T; G  0] acting on (u, p),
// where G is the incompressibility constraint matrix.  G = -B keeps the
// physical pressure sign in the momentum rows, since the weak form carries
// -b(v, p).  Constrained momentum rows are replaced by identity rows; with
// no Neumann boundary the first pressure dof row is pinned instead of the
// first continuity row.

inline SparseMatrix constraint_matrix(const FeSpace& v, const FeSpace& p) {
  return SparseMatrix(-assemble_divergence(v, p));
}

inline Real weak_divergence(const SparseMatrix& G, const Vector& u) {
  const Real un = u.norm();
  if (un == 0) return 0;
  return (G * u).norm() / un;
}

namespace detail {

inline SparseMatrix assemble_saddle(const SparseMatrix& A,
                                    const SparseMatrix& G,
                                    const std::vector<char>& mask, bool pin) {
  const Index nu = A.rows(), np = G.rows();
  std::vector<Triplet> trips;
  trips.reserve(A.nonZeros() + 2 * G.nonZeros() + nu + 1);
  for (int k = 0; k < A.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(A, k); it; ++it)
      if (!mask[it.row()]) trips.emplace_back(it.row(), it.col(), it.value());
  for (Index d = 0; d < nu; ++d)
    if (mask[d]) trips.emplace_back(d, d, 1.0);
  for (int k = 0; k < G.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(G, k); it; ++it) {
      if (!(pin && it.row() == 0))
        trips.emplace_back(nu + it.row(), it.col(), it.value());
      if (!mask[it.col()])
        trips.emplace_back(it.col(), nu + it.row(), it.value());
    }
  if (pin) trips.emplace_back(nu, nu, 1.0);
  SparseMatrix S(nu + np, nu + np);
  S.setFromTriplets(trips.begin(), trips.end());
  return S;
}

struct LinearFlowSolve {
  Vector velocity;
  Vector pressure;
};

// One linear saddle solve with velocity block A and Dirichlet values bc.
inline LinearFlowSolve linear_flow_solve(const FlowProblem& pb,
                                         const SparseMatrix& A,
                                         const SparseMatrix& G,
                                         const Vector& load,
                                         const DirichletBC& bc) {
  const Index nu = pb.velocity_space.n_vector_dofs();
  const Index np = pb.pressure_space.ndof;
  const auto mask = constrained_mask(pb, bc);
  const bool pin = pb.pin_pressure();
  const SparseMatrix S = assemble_saddle(A, G, mask, pin);
  Vector rhs = Vector::Zero(nu + np);
  rhs.head(nu) = load;
  for (std::size_t k = 0; k < bc.size(); ++k)
    rhs[bc.constrained_dofs[k]] = bc.values[k];
  if (pin) rhs[nu] = 0.0;
  const Vector x = sparse_solve(S, rhs);
  return {x.head(nu), x.tail(np)};
}

}  // namespace detail

// Stokes solve at mu; used as the Newton initial guess so that the first
// iterate already carries the inhomogeneous Dirichlet values.
inline detail::LinearFlowSolve solve_stokes(const FlowProblem& pb,
                                            const Vector& mu) {
  if (!pb.in_box(mu)) throw ConfigError("solve_stokes: mu outside box");
  const SparseMatrix D = assemble_diffusion(pb.velocity_space,
                                            pb.viscosity(mu));
  const SparseMatrix G = constraint_matrix(pb.velocity_space,
                                           pb.pressure_space);
  ++solve_counters().stokes_systems;
  return detail::linear_flow_solve(pb, D, G, pb.load_vector(mu),
                                   pb.dirichlet_at(mu));
}

// Oseen solve: the convective field w is frozen, so only the convected
// block C1(w) enters and the problem is linear.  Boundary data is taken at
// mu_eff.
inline detail::LinearFlowSolve solve_oseen(const FlowProblem& pb,
                                           const Vector& mu_eff,
                                           const Vector& w) {
  if (!pb.in_box(mu_eff)) throw ConfigError("solve_oseen: mu outside box");
  if (w.size() != pb.velocity_space.n_vector_dofs())
    throw DimensionMismatch("solve_oseen: convective field size mismatch");
  SparseMatrix A = assemble_diffusion(pb.velocity_space, pb.viscosity(mu_eff));
  A += assemble_convection_c1(pb.velocity_space, w);
  const SparseMatrix G = constraint_matrix(pb.velocity_space,
                                           pb.pressure_space);
  ++solve_counters().oseen_systems;
  return detail::linear_flow_solve(pb, A, G, pb.load_vector(mu_eff),
                                   pb.dirichlet_at(mu_eff));
}

struct FomSolution {
  Vector mu;
  Vector velocity;
  Vector pressure;
  std::vector<Real> residual_history;  // relative increment per iteration
  bool converged = false;

  int iterations() const { return static_cast<int>(residual_history.size()); }
};

namespace detail {

inline FomSolution newton_iterate(const FlowProblem& pb, const Vector& mu,
                                  Real nu, Vector u, Vector p, Real tol,
                                  int max_iter) {
  const Index nup = pb.velocity_space.n_vector_dofs();
  const Index np = pb.pressure_space.ndof;
  const SparseMatrix D = assemble_diffusion(pb.velocity_space, nu);
  const SparseMatrix G = constraint_matrix(pb.velocity_space,
                                           pb.pressure_space);
  const Vector f = pb.load_vector(mu);
  const DirichletBC bc0 = pb.dirichlet_at(mu).homogeneous();
  const auto mask = constrained_mask(pb, bc0);
  const bool pin = pb.pin_pressure();

  FomSolution sol;
  sol.mu = mu;
  for (int k = 0; k < max_iter; ++k) {
    const SparseMatrix C1 = assemble_convection_c1(pb.velocity_space, u);
    const SparseMatrix C2 = assemble_convection_c2(pb.velocity_space, u);

    Vector ru = f - D * u - C1 * u - G.transpose() * p;
    for (Index d = 0; d < nup; ++d)
      if (mask[d]) ru[d] = 0.0;
    Vector rp = -(G * u);
    if (pin) rp[0] = 0.0;

    SparseMatrix A = D + C1 + C2;
    const SparseMatrix S = assemble_saddle(A, G, mask, pin);
    Vector rhs(nup + np);
    rhs.head(nup) = ru;
    rhs.tail(np) = rp;
    ++solve_counters().newton_systems;
    const Vector delta = sparse_solve(S, rhs);

    u += delta.head(nup);
    p += delta.tail(np);
    const Real scale_u = std::max(u.norm(), 1e-14);
    const Real scale_p = std::max({p.norm(), 1e-2 * u.norm(), 1e-14});
    const Real rel = std::max(delta.head(nup).norm() / scale_u,
                              delta.tail(np).norm() / scale_p);
    sol.residual_history.push_back(rel);
    if (rel <= tol) {
      sol.converged = true;
      break;
    }
  }
  sol.velocity = std::move(u);
  sol.pressure = std::move(p);
  return sol;
}

}  // namespace detail

// Newton-Raphson on the steady Navier-Stokes system.  The iteration starts
// from the Stokes solution at mu and stops when the relative increment of
// both fields drops below tol.  Non-convergence is reported through the
// flag, with the increment history attached.
inline FomSolution newton_solve(const FlowProblem& pb, const Vector& mu,
                                Real tol = 1e-8, int max_iter = 25) {
  if (!pb.in_box(mu)) throw ConfigError("newton_solve: mu outside box");
  auto init = solve_stokes(pb, mu);
  return detail::newton_iterate(pb, mu, pb.viscosity(mu),
                                std::move(init.velocity),
                                std::move(init.pressure), tol, max_iter);
}

// Plain Newton with a viscosity-continuation fallback for stiff cases
// (high-Re cavity).  Each leg warm-starts from the previous one; the final
// leg iterates at the target viscosity.
inline FomSolution solve_fom(const FlowProblem& pb, const Vector& mu,
                             Real tol = 1e-8, int max_iter = 25) {
  FomSolution sol = newton_solve(pb, mu, tol, max_iter);
  if (sol.converged) return sol;
  const Real nu_target = pb.viscosity(mu);
  auto state = solve_stokes(pb, Vector(mu));
  Vector u = state.velocity, p = state.pressure;
  for (const Real factor : {16.0, 8.0, 4.0, 2.0, 1.0}) {
    FomSolution leg = detail::newton_iterate(pb, mu, factor * nu_target, u, p,
                                             tol, max_iter);
    u = leg.velocity;
    p = leg.pressure;
    if (factor == 1.0) {
      leg.mu = mu;
      return leg;
    }
  }
  return sol;
}

using FacetSampler =
    std::function<Real(Index facet, const Vec2& x, const Vec2& n)>;

// Scalar Neumann-Poisson solve: -lap(psi) = rhs with grad(psi).n = flux on
// the whole boundary, pinned at one node for uniqueness.  The data must be
// compatible: int rhs + int flux = 0.
inline Vector solve_poisson_neumann(const FeSpace& s, const CellSampler1& rhs,
                                    const FacetSampler& flux, Index pin_node) {
  const Mesh& mesh = *s.mesh;
  if (pin_node < 0 || pin_node >= s.ndof)
    throw DimensionMismatch("solve_poisson_neumann: pin node out of range");
  const auto& rule = triangle_rule();
  Vector b = Vector::Zero(s.ndof);
  Real magnitude = 0;
  Real N[6];
  for (Index t = 0; t < mesh.n_triangles(); ++t) {
    const CellGeom g = cell_geometry(mesh, t);
    for (int q = 0; q < rule.size(); ++q) {
      const Vec2 x = g.point(rule.points[q], mesh);
      const Real val = rhs(t, q, x);
      const Real wgt = rule.weights[q] * g.abs_det;
      magnitude += wgt * std::abs(val);
      shape_values(s.degree, rule.points[q], N);
      for (int i = 0; i < s.dofs_per_cell(); ++i)
        b[s.cell_dofs[t][i]] += wgt * val * N[i];
    }
  }
  const auto& erule = edge_rule();
  for (Index f = 0; f < mesh.n_facets(); ++f) {
    const auto& fc = mesh.boundary_facets[f];
    const Vec2 pa = mesh.nodes[fc.nodes[0]], pb = mesh.nodes[fc.nodes[1]];
    const Real len = (pb - pa).norm();
    const Vec2 n = mesh.facet_normal(f);
    const Index cell = mesh.facet_cell[f];
    const CellGeom g = cell_geometry(mesh, cell);
    for (int q = 0; q < erule.size(); ++q) {
      const Vec2 x = (1 - erule.points[q]) * pa + erule.points[q] * pb;
      const Real val = flux(f, x, n);
      const Real wgt = erule.weights[q] * len;
      magnitude += wgt * std::abs(val);
      shape_values(s.degree, g.barycentric(x), N);
      for (int i = 0; i < s.dofs_per_cell(); ++i)
        b[s.cell_dofs[cell][i]] += wgt * val * N[i];
    }
  }
  const Real total = b.sum();  // = int rhs + int flux by partition of unity
  if (std::abs(total) > 1e-6 * std::max(magnitude, 1e-30))
    throw IncompatibleData("solve_poisson_neumann: incompatible data");

  SparseMatrix K = assemble_scalar_laplacian(s);
  DirichletBC pin;
  pin.constrained_dofs = {pin_node};
  pin.values = {0.0};
  apply_dirichlet(K, b, pin);
  ++solve_counters().poisson_systems;
  return sparse_solve(K, b);
}

}  // namespace podns
