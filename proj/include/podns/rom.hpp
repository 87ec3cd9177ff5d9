#pragma once

#include <algorithm>
#include <numeric>
#include <vector>

#include "podns/fom.hpp"
#include "podns/pod.hpp"
#include "podns/problem.hpp"

namespace podns {

struct RomSolution {
  Vector mu;
  Vector z_u;
  Vector z_p;
  Vector velocity;            // mean_u + U*_u z_u
  Vector pressure;            // mean_p + U*_p z_p
  Vector recovered_pressure;  // momentum-consistent post-process
  int iterations = 0;
  bool converged = false;
  DenseMatrix reduced_matrix;       // last assembled reduced saddle system
  Real reduced_residual = 0.0;      // projected momentum residual at exit
  Real reduced_rhs_scale = 0.0;
};

// Momentum-split pressure recovery: restricting the discrete momentum
// equation to unconstrained velocity rows and pre-multiplying by the
// constraint matrix yields the SPD system (G_F G_F^T) p = G_F (f - K(u) u).
inline Vector recover_pressure(const FlowProblem& pb, const Vector& mu,
                               const Vector& u) {
  const Index nu = pb.velocity_space.n_vector_dofs();
  if (u.size() != nu)
    throw DimensionMismatch("recover_pressure: velocity size mismatch");
  const SparseMatrix D = assemble_diffusion(pb.velocity_space,
                                            pb.viscosity(mu));
  const SparseMatrix C1 = assemble_convection_c1(pb.velocity_space, u);
  const SparseMatrix G = constraint_matrix(pb.velocity_space,
                                           pb.pressure_space);
  const Vector f = pb.load_vector(mu);
  const auto mask = constrained_mask(pb, pb.dirichlet_at(mu));

  Vector r = f - D * u - C1 * u;  // = G^T p on the free rows
  for (Index d = 0; d < nu; ++d)
    if (mask[d]) r[d] = 0.0;

  std::vector<Triplet> trips;
  trips.reserve(G.nonZeros());
  for (int k = 0; k < G.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(G, k); it; ++it)
      if (!mask[it.col()]) trips.emplace_back(it.row(), it.col(), it.value());
  SparseMatrix Gf(G.rows(), G.cols());
  Gf.setFromTriplets(trips.begin(), trips.end());

  SparseMatrix S = SparseMatrix(Gf * SparseMatrix(Gf.transpose()));
  Vector rhs = Gf * r;
  if (pb.pin_pressure()) {
    DirichletBC pin;
    pin.constrained_dofs = {0};
    pin.values = {0.0};
    apply_dirichlet(S, rhs, pin);
  }
  ++solve_counters().recovery_systems;
  return sparse_solve(S, rhs);
}

// Indices of the k training points nearest to mu; every parameter axis is
// normalized to [0,1] by the problem box before measuring distances.
inline std::vector<Index> select_local_snapshots(
    const std::vector<Vector>& training_params, const Vector& mu, Index k,
    const std::vector<std::array<Real, 2>>& box) {
  const Index ns = static_cast<Index>(training_params.size());
  if (k > ns) throw ConfigError("select_local_snapshots: k exceeds set size");
  auto normalized = [&](const Vector& p) {
    Vector q(p.size());
    for (Index d = 0; d < p.size(); ++d) {
      const Real width = box[d][1] - box[d][0];
      q[d] = width > 0 ? (p[d] - box[d][0]) / width : 0.0;
    }
    return q;
  };
  const Vector mq = normalized(mu);
  std::vector<std::pair<Real, Index>> dist(ns);
  for (Index i = 0; i < ns; ++i)
    dist[i] = {(normalized(training_params[i]) - mq).norm(), i};
  std::stable_sort(dist.begin(), dist.end());
  std::vector<Index> out(k);
  for (Index i = 0; i < k; ++i) out[i] = dist[i].second;
  return out;
}

// Galerkin-projected Newton iteration on the reduced saddle-point system.
// Full-order blocks are assembled at the current reconstructed velocity and
// projected.  Dirichlet handling mirrors the full-order convention: the
// constrained dofs carry the exact boundary values at every iterate, the
// reduced increments act on the free dofs only (homogeneous directions),
// and the momentum equations at constrained dofs are dropped.  The initial
// reduced state is the projection of the Stokes solution at mu.
inline RomSolution rom_solve(const FlowProblem& pb, const Vector& mu,
                             const ReducedBasis& basis_u,
                             const ReducedBasis& basis_p, Real tol = 1e-8,
                             int max_iter = 50) {
  if (!pb.in_box(mu)) throw ConfigError("rom_solve: mu outside box");
  const Index nu = pb.velocity_space.n_vector_dofs();
  const Index np = pb.pressure_space.ndof;
  if (basis_u.mean.size() != nu || basis_p.mean.size() != np)
    throw DimensionMismatch("rom_solve: basis does not match spaces");
  const Index ru = basis_u.n_modes(), rp = basis_p.n_modes();

  const SparseMatrix D = assemble_diffusion(pb.velocity_space,
                                            pb.viscosity(mu));
  const SparseMatrix G = constraint_matrix(pb.velocity_space,
                                           pb.pressure_space);
  const Vector f = pb.load_vector(mu);
  const DirichletBC bc = pb.dirichlet_at(mu);
  const auto mask = constrained_mask(pb, bc);

  // Projection blocks that stay fixed across iterations.  The trial and
  // test modes are masked to the free dofs.
  DenseMatrix Uu_m = basis_u.modes;
  for (Index d = 0; d < nu; ++d)
    if (mask[d]) Uu_m.row(d).setZero();
  const DenseMatrix W = basis_p.modes.transpose() * (G * Uu_m);  // rp x ru
  const DenseMatrix V = G.transpose() * basis_p.modes;           // nu x rp
  const DenseMatrix G12 = Uu_m.transpose() * V;                  // ru x rp
  const Vector gtp_mean = G.transpose() * basis_p.mean;

  auto reconstruct = [&](const Vector& z) {
    Vector u = basis_u.reconstruct(z);
    for (std::size_t k = 0; k < bc.size(); ++k)
      u[bc.constrained_dofs[k]] = bc.values[k];
    return u;
  };

  auto init = solve_stokes(pb, mu);
  RomSolution sol;
  sol.mu = mu;
  sol.z_u = basis_u.project(init.velocity);
  sol.z_p = basis_p.project(init.pressure);

  for (int k = 0; k < max_iter; ++k) {
    const Vector u = reconstruct(sol.z_u);
    const SparseMatrix C1 = assemble_convection_c1(pb.velocity_space, u);
    const SparseMatrix C2 = assemble_convection_c2(pb.velocity_space, u);

    Vector r = f - D * u - C1 * u - gtp_mean - V * sol.z_p;
    for (Index d = 0; d < nu; ++d)
      if (mask[d]) r[d] = 0.0;
    const Vector f1 = Uu_m.transpose() * r;
    const Vector f2 = -(basis_p.modes.transpose() * (G * u));

    const SparseMatrix A = D + C1 + C2;
    const DenseMatrix K = Uu_m.transpose() * (A * Uu_m);

    DenseMatrix M = DenseMatrix::Zero(ru + rp, ru + rp);
    M.topLeftCorner(ru, ru) = K;
    M.topRightCorner(ru, rp) = G12;
    M.bottomLeftCorner(rp, ru) = W;
    sol.reduced_matrix = M;

    Vector rhs(ru + rp);
    rhs.head(ru) = f1;
    rhs.tail(rp) = f2;
    sol.reduced_residual = f1.norm();
    sol.reduced_rhs_scale =
        std::max({sol.reduced_rhs_scale, rhs.norm(),
                  K.norm() * std::max(sol.z_u.norm(), Real(1))});

    // Rank-revealing dense solve of the saddle system.  With exactly
    // divergence-free modes the constraint block is pure roundoff and the
    // system is numerically rank deficient; the minimum-norm solution
    // leaves the pressure coordinates alone instead of amplifying noise.
    Eigen::CompleteOrthogonalDecomposition<DenseMatrix> cod;
    cod.setThreshold(1e-6);
    cod.compute(M);
    const Vector delta = cod.solve(rhs);
    // momentum rows must be solvable; constraint rows beyond the modes'
    // divergence resolution are truncated by the minimum-norm solve
    const Real defect = (M * delta - rhs).head(ru).norm();
    if (defect > 1e-6 * (M.norm() * delta.norm() + rhs.norm()) + 1e-14)
      throw SingularReducedSystem(
          "rom_solve: reduced momentum block is rank deficient");
    sol.z_u += delta.head(ru);
    sol.z_p += delta.tail(rp);
    ++sol.iterations;
    const Real rel = delta.head(ru).norm() / std::max(sol.z_u.norm(), 1e-14);
    if (rel <= tol) {
      sol.converged = true;
      break;
    }
  }
  if (!sol.converged)
    throw NonConvergence("rom_solve: no convergence in " +
                         std::to_string(max_iter) + " iterations");

  sol.velocity = reconstruct(sol.z_u);
  sol.pressure = basis_p.reconstruct(sol.z_p);
  sol.recovered_pressure = recover_pressure(pb, mu, sol.velocity);
  return sol;
}

// Drag and lift on the problem's force tags.  ROM solutions use the
// recovered pressure.
inline Vec2 qoi(const FlowProblem& pb, const Vector& mu, const Vector& u,
                const Vector& p) {
  return boundary_force(pb.velocity_space, pb.pressure_space, u, p,
                        pb.force_tags, pb.viscosity(mu));
}

inline Vec2 qoi(const FlowProblem& pb, const FomSolution& sol) {
  return qoi(pb, sol.mu, sol.velocity, sol.pressure);
}

inline Vec2 qoi(const FlowProblem& pb, const RomSolution& sol) {
  return qoi(pb, sol.mu, sol.velocity, sol.recovered_pressure);
}

}  // namespace podns
