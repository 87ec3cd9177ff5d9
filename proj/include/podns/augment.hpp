#pragma once

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "podns/fom.hpp"
#include "podns/pod.hpp"
#include "podns/problem.hpp"

namespace podns {

struct PairList {
  std::vector<std::pair<Index, Index>> pairs;  // i < j, deduplicated

  std::size_t size() const { return pairs.size(); }
};

enum class AugmentStrategy { none, solenoidal, solenoidal_oseen, linear_oseen };

struct AugmentConfig {
  AugmentStrategy strategy = AugmentStrategy::solenoidal_oseen;
  std::vector<Real> alphas;        // strictly inside (0,1), no duplicates
  Real positivity_shift_floor = 1.0;

  void validate() const {
    std::set<Real> seen;
    for (const Real a : alphas) {
      if (!(a > 0.0 && a < 1.0))
        throw ConfigError("alpha weights must lie strictly inside (0,1)");
      if (!seen.insert(a).second)
        throw ConfigError("duplicate alpha weight");
    }
  }
};

inline std::vector<Real> default_alphas() {
  return {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
}

// Pairs every snapshot with its nearest neighbor along each direction of
// the parametric space.  Along an axis the nearest candidate among points
// that differ only in that coordinate is taken; when no axis-aligned
// candidate exists, the nearest (normalized Euclidean) point differing in
// that coordinate is used instead, preferring candidates that are still
// unpaired and skipping partners already assigned to this point.
inline PairList pair_snapshots(const std::vector<Vector>& params,
                               const std::vector<std::array<Real, 2>>& box) {
  const Index ns = static_cast<Index>(params.size());
  if (ns < 2) throw DegenerateSet("pair_snapshots: need at least 2 points");
  const Index dim = params[0].size();

  std::vector<Vector> q(ns);
  for (Index i = 0; i < ns; ++i) {
    q[i].resize(dim);
    for (Index d = 0; d < dim; ++d) {
      const Real width = box[d][1] - box[d][0];
      q[i][d] = width > 0 ? (params[i][d] - box[d][0]) / width : 0.0;
    }
  }

  bool all_identical = true;
  for (Index i = 1; i < ns && all_identical; ++i)
    if ((q[i] - q[0]).norm() > 0) all_identical = false;
  if (all_identical)
    throw DegenerateSet("pair_snapshots: all parameter points identical");

  const Real tol = 1e-12;
  std::set<std::pair<Index, Index>> pairs;
  std::vector<char> paired(ns, 0);
  auto add_pair = [&](Index i, Index j) {
    pairs.insert(i < j ? std::pair{i, j} : std::pair{j, i});
    paired[i] = paired[j] = 1;
  };

  for (Index i = 0; i < ns; ++i) {
    std::set<Index> own_partners;  // neighbors taken along earlier axes
    for (Index d = 0; d < dim; ++d) {
      Index best = -1;
      Real best_dist = 0;
      bool best_unpaired = false;
      // axis-aligned candidates (same remaining coordinates)
      for (Index j = 0; j < ns; ++j) {
        if (j == i || std::abs(q[j][d] - q[i][d]) <= tol) continue;
        bool aligned = true;
        for (Index e = 0; e < dim && aligned; ++e)
          if (e != d && std::abs(q[j][e] - q[i][e]) > tol) aligned = false;
        if (!aligned) continue;
        const Real dist = std::abs(q[j][d] - q[i][d]);
        if (best < 0 || dist < best_dist - tol ||
            (std::abs(dist - best_dist) <= tol && !best_unpaired &&
             !paired[j])) {
          best = j;
          best_dist = dist;
          best_unpaired = !paired[j];
        }
      }
      if (best < 0) {
        // fall back to any point differing in this coordinate, skipping
        // neighbors this point already took along another axis
        for (Index j = 0; j < ns; ++j) {
          if (j == i || std::abs(q[j][d] - q[i][d]) <= tol) continue;
          if (own_partners.count(j)) continue;
          const Real dist = (q[j] - q[i]).norm();
          if (best < 0 || dist < best_dist - tol ||
              (std::abs(dist - best_dist) <= tol && !best_unpaired &&
               !paired[j])) {
            best = j;
            best_dist = dist;
            best_unpaired = !paired[j];
          }
        }
      }
      if (best >= 0) {
        add_pair(i, best);
        own_partners.insert(best);
      }
    }
  }

  PairList out;
  out.pairs.assign(pairs.begin(), pairs.end());
  return out;
}

inline Index default_stream_pin_node(const Mesh& mesh) {
  Index pin = mesh.n_nodes();
  for (const auto& f : mesh.boundary_facets)
    pin = std::min({pin, f.nodes[0], f.nodes[1]});
  return pin;
}

// Stream function of a weakly divergence-free velocity field: solves the
// Neumann-Poisson problem with rhs = curl(u) and flux = (-u_y, u_x).n,
// pinned to zero at the lowest-index boundary node.
inline Vector stream_function(const FlowProblem& pb, const Vector& u) {
  const FeSpace& v = pb.velocity_space;
  const SparseMatrix G = constraint_matrix(v, pb.pressure_space);
  if (weak_divergence(G, u) > 1e-6)
    throw IncompatibleData("stream_function: field is not divergence free");
  const Mesh& mesh = *v.mesh;
  std::vector<CellGeom> geom(mesh.n_triangles());
  for (Index t = 0; t < mesh.n_triangles(); ++t)
    geom[t] = cell_geometry(mesh, t);
  auto curl = [&](Index cell, int q, const Vec2&) {
    const Mat2 grad =
        eval_vector_gradient(v, geom[cell], u, cell,
                             triangle_rule().points[q]);
    return grad(1, 0) - grad(0, 1);
  };
  auto flux = [&](Index f, const Vec2& x, const Vec2& n) {
    const Index cell = mesh.facet_cell[f];
    const Vec2 uq = eval_vector(v, u, cell, geom[cell].barycentric(x));
    return Vec2(-uq.y(), uq.x()).dot(n);
  };
  return solve_poisson_neumann(v, curl, flux, default_stream_pin_node(mesh));
}

// Nodal-wise geometric average psi_i^alpha * psi_j^(1-alpha).  Inputs with
// values below the floor are translated up so their minimum sits at the
// floor; inputs already above it are left untouched.
inline Vector geometric_average(const Vector& psi_i, const Vector& psi_j,
                                Real alpha, Real floor = 1.0) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw ConfigError("geometric_average: alpha must lie in (0,1)");
  if (psi_i.size() != psi_j.size())
    throw DimensionMismatch("geometric_average: size mismatch");
  const Real si = std::max(0.0, floor - psi_i.minCoeff());
  const Real sj = std::max(0.0, floor - psi_j.minCoeff());
  Vector out(psi_i.size());
  for (Index k = 0; k < psi_i.size(); ++k)
    out[k] = std::pow(psi_i[k] + si, alpha) * std::pow(psi_j[k] + sj,
                                                       1.0 - alpha);
  return out;
}

// Velocity from a stream function: the rotated gradient (dpsi/dy, -dpsi/dx)
// is evaluated at quadrature points and L2-projected into the continuous
// velocity space.
inline Vector velocity_from_stream(const FlowProblem& pb, const Vector& psi) {
  const FeSpace& v = pb.velocity_space;
  const Mesh& mesh = *v.mesh;
  std::vector<CellGeom> geom(mesh.n_triangles());
  for (Index t = 0; t < mesh.n_triangles(); ++t)
    geom[t] = cell_geometry(mesh, t);
  auto rot = [&](Index cell, int q, const Vec2&) {
    const Vec2 g = eval_scalar_gradient(v, geom[cell], psi, cell,
                                        triangle_rule().points[q]);
    return Vec2(g.y(), -g.x());
  };
  ++solve_counters().projection_systems;
  return l2_project_vector(v, rot);
}

inline Vector linear_combination(const Vector& u_i, const Vector& u_j,
                                 Real alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw ConfigError("linear_combination: alpha must lie in (0,1)");
  if (u_i.size() != u_j.size())
    throw DimensionMismatch("linear_combination: size mismatch");
  return alpha * u_i + (1.0 - alpha) * u_j;
}

// Momentum enhancement: the artificial field u_star drives an Oseen solve
// with boundary data at the interpolated parameter point.  The pressure is
// discarded; only velocity snapshots are augmented.
inline Vector oseen_enhance(const FlowProblem& pb, const Vector& u_star,
                            const Vector& mu_i, const Vector& mu_j,
                            Real alpha) {
  const Vector mu_eff = alpha * mu_i + (1.0 - alpha) * mu_j;
  return solve_oseen(pb, mu_eff, u_star).velocity;
}

// Builds the enriched velocity training set: one artificial snapshot per
// (pair, alpha), appended with origin=artificial and the interpolated
// parameter point.  Stream functions are recovered per pair, two Poisson
// solves each.
inline SnapshotSet augment_dataset(const SnapshotSet& set,
                                   const FlowProblem& pb,
                                   const AugmentConfig& config) {
  if (set.field_kind != FieldKind::velocity)
    throw ConfigError("augment_dataset: velocity sets only");
  config.validate();
  SnapshotSet out = set;
  if (config.strategy == AugmentStrategy::none || config.alphas.empty())
    return out;
  std::vector<Index> full;
  for (Index j = 0; j < set.n_snapshots(); ++j)
    if (set.origin[j] == SnapshotOrigin::fullorder) full.push_back(j);
  if (full.size() < 2)
    throw DegenerateSet("augment_dataset: need at least 2 full-order columns");

  std::vector<Vector> params;
  for (const Index j : full) params.push_back(set.parameters[j]);
  const PairList pairs = pair_snapshots(params, pb.parameter_box);

  for (const auto& [a, b] : pairs.pairs) {
    const Index i = full[a], j = full[b];
    const Vector& u_i = set.data.col(i);
    const Vector& u_j = set.data.col(j);
    Vector psi_i, psi_j;
    if (config.strategy != AugmentStrategy::linear_oseen) {
      psi_i = stream_function(pb, u_i);
      psi_j = stream_function(pb, u_j);
    }
    for (const Real alpha : config.alphas) {
      Vector u_star;
      if (config.strategy == AugmentStrategy::linear_oseen) {
        u_star = linear_combination(u_i, u_j, alpha);
      } else {
        const Vector psi = geometric_average(psi_i, psi_j, alpha,
                                             config.positivity_shift_floor);
        u_star = velocity_from_stream(pb, psi);
      }
      Vector snapshot =
          config.strategy == AugmentStrategy::solenoidal
              ? u_star
              : oseen_enhance(pb, u_star, set.parameters[i],
                              set.parameters[j], alpha);
      const Vector mu_eff =
          alpha * set.parameters[i] + (1.0 - alpha) * set.parameters[j];
      out.append(snapshot, mu_eff, SnapshotOrigin::artificial);
    }
  }
  return out;
}

}  // namespace podns
