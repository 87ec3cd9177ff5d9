#include <catch2/catch_amalgamated.hpp>

#include <numbers>
#include <random>

#include "podns/augment.hpp"
#include "podns/fom.hpp"
#include "podns/rom.hpp"
#include "test_problems.hpp"

using namespace podns;
using namespace podns::testing;

namespace {

Vector mu1(Real v) { return Vector::Constant(1, v); }

SnapshotSet velocity_set(const FlowProblem& pb,
                         const std::vector<Real>& mus) {
  SnapshotSet set;
  set.field_kind = FieldKind::velocity;
  for (const Real m : mus) {
    const FomSolution sol = newton_solve(pb, mu1(m));
    REQUIRE(sol.converged);
    set.append(sol.velocity, mu1(m), SnapshotOrigin::fullorder);
  }
  return set;
}

}  // namespace

TEST_CASE("stokes solve reproduces trivial and exact cases", "[fom]") {
  SECTION("zero data gives the zero state") {
    FlowProblem pb = make_square_lid_problem(4, 1.0, 0.0);
    const auto sol = solve_stokes(pb, mu1(0.5));
    REQUIRE(sol.velocity.cwiseAbs().maxCoeff() <= 1e-13);
    REQUIRE(sol.pressure.cwiseAbs().maxCoeff() <= 1e-13);
  }
  SECTION("plane Couette is exact in P2") {
    FlowProblem pb = make_couette_problem(4);
    const auto sol = solve_stokes(pb, mu1(0.5));
    const Vector exact = interpolate_vector(
        pb.velocity_space, [](const Vec2& x) { return Vec2(x.y(), 0.0); });
    REQUIRE((sol.velocity - exact).cwiseAbs().maxCoeff() <= 1e-10);
    REQUIRE(sol.pressure.cwiseAbs().maxCoeff() <= 1e-10);
  }
  SECTION("lid cavity solve is weakly divergence free") {
    FlowProblem pb = make_square_lid_problem(8, 0.05);
    const auto sol = solve_stokes(pb, mu1(1.0));
    const SparseMatrix G =
        constraint_matrix(pb.velocity_space, pb.pressure_space);
    REQUIRE(weak_divergence(G, sol.velocity) <= 1e-10);
  }
}

TEST_CASE("newton solve", "[fom]") {
  SECTION("zero problem converges in one iteration") {
    FlowProblem pb = make_square_lid_problem(4, 1.0, 0.0);
    const FomSolution sol = newton_solve(pb, mu1(0.5));
    REQUIRE(sol.converged);
    REQUIRE(sol.iterations() == 1);
    REQUIRE(sol.velocity.cwiseAbs().maxCoeff() <= 1e-13);
  }
  SECTION("vanishing convection matches Stokes") {
    FlowProblem pb = make_square_lid_problem(6, 1e8);
    const auto stokes = solve_stokes(pb, mu1(1.0));
    const FomSolution ns = newton_solve(pb, mu1(1.0));
    REQUIRE(ns.converged);
    REQUIRE((ns.velocity - stokes.velocity).norm() <=
            1e-8 * stokes.velocity.norm());
  }
  SECTION("converged states are weakly divergence free") {
    FlowProblem pb = make_square_lid_problem(8, 0.02);
    const FomSolution sol = newton_solve(pb, mu1(1.0));
    REQUIRE(sol.converged);
    const SparseMatrix G =
        constraint_matrix(pb.velocity_space, pb.pressure_space);
    REQUIRE(weak_divergence(G, sol.velocity) <= 1e-8);
  }
  SECTION("manufactured solution converges at third order") {
    std::vector<Real> errors;
    for (const Index n : {8, 16}) {
      const ManufacturedCase mc = make_manufactured_case(n);
      const FomSolution sol = newton_solve(mc.problem, mu1(0.5));
      REQUIRE(sol.converged);
      errors.push_back(
          l2_error_vector(mc.problem.velocity_space, sol.velocity,
                          mc.exact_velocity));
    }
    const Real order = std::log2(errors[0] / errors[1]);
    REQUIRE(order > 2.5);
    REQUIRE(order < 3.5);
  }
}

TEST_CASE("oseen solve", "[fom]") {
  SECTION("zero convective field equals Stokes") {
    FlowProblem pb = make_couette_problem(4);
    const auto stokes = solve_stokes(pb, mu1(0.5));
    const auto oseen =
        solve_oseen(pb, mu1(0.5), Vector::Zero(pb.velocity_space.n_vector_dofs()));
    REQUIRE((oseen.velocity - stokes.velocity).cwiseAbs().maxCoeff() <= 1e-11);
  }
  SECTION("the converged Navier-Stokes state is a fixed point") {
    FlowProblem pb = make_square_lid_problem(6, 0.05);
    const FomSolution ns = newton_solve(pb, mu1(1.0));
    REQUIRE(ns.converged);
    const auto oseen = solve_oseen(pb, mu1(1.0), ns.velocity);
    REQUIRE((oseen.velocity - ns.velocity).norm() <=
            1e-8 * ns.velocity.norm());
    const SparseMatrix G =
        constraint_matrix(pb.velocity_space, pb.pressure_space);
    REQUIRE(weak_divergence(G, oseen.velocity) <= 1e-10);
  }
  SECTION("output is additive in the Neumann data") {
    // zero Dirichlet top/bottom, parameter-independent tractions
    FlowProblem pb = base_square_problem(5, 0.3);
    auto zero = [](const Vector&, const Vec2&) { return Vec2::Zero().eval(); };
    pb.dirichlet_spec[tags::square_bottom] = zero;
    pb.dirichlet_spec[tags::square_top] = zero;
    pb.neumann_spec[tags::square_left] = zero;
    pb.neumann_spec[tags::square_right] = zero;
    pb.validate();
    const Vector w = interpolate_vector(
        pb.velocity_space,
        [](const Vec2& x) { return Vec2(x.y() * x.y(), x.x()); });

    auto with_traction = [&](auto t_left, auto t_right) {
      FlowProblem q = pb;
      q.neumann_spec[tags::square_left] = t_left;
      q.neumann_spec[tags::square_right] = t_right;
      return solve_oseen(q, mu1(0.5), w).velocity;
    };
    auto t1 = [](const Vector&, const Vec2& x) {
      return Vec2(0.1 * x.y(), 0.0);
    };
    auto t2 = [](const Vector&, const Vec2& x) {
      return Vec2(0.0, 0.2 * (1 - x.y()));
    };
    auto zero_t = [](const Vector&, const Vec2&) {
      return Vec2::Zero().eval();
    };
    auto sum_t1 = [t1, t2](const Vector& mu, const Vec2& x) {
      return (t1(mu, x) + t2(mu, x)).eval();
    };
    const Vector ua = with_traction(t1, zero_t);
    const Vector ub = with_traction(t2, zero_t);
    const Vector uab = with_traction(sum_t1, zero_t);
    REQUIRE((uab - ua - ub).norm() <= 1e-10 * (ua.norm() + ub.norm()));
  }
}

TEST_CASE("scalar Neumann-Poisson solve", "[fom]") {
  FlowProblem pb = make_couette_problem(6);
  const FeSpace& v = pb.velocity_space;

  SECTION("zero data gives the zero solution") {
    const Vector psi = solve_poisson_neumann(
        v, [](Index, int, const Vec2&) { return 0.0; },
        [](Index, const Vec2&, const Vec2&) { return 0.0; }, 0);
    REQUIRE(psi.cwiseAbs().maxCoeff() <= 1e-13);
  }
  SECTION("uniform flow has the linear stream function") {
    const Vector u =
        interpolate_vector(v, [](const Vec2&) { return Vec2(1.0, 0.0); });
    const Vector psi = stream_function(pb, u);
    const Index pin = default_stream_pin_node(*pb.mesh);
    const Real y0 = v.dof_coords[pin].y();
    for (Index i = 0; i < v.ndof; ++i)
      REQUIRE(psi[i] ==
              Catch::Approx(v.dof_coords[i].y() - y0).margin(1e-10));
  }
  SECTION("rigid rotation has the quadratic stream function") {
    // u = (dpsi/dy, -dpsi/dx): the clockwise rotation (y, -x) carries
    // psi = (x^2 + y^2)/2, its mirror (-y, x) the negative.
    const Vector u = interpolate_vector(
        v, [](const Vec2& x) { return Vec2(x.y(), -x.x()); });
    const Vector psi = stream_function(pb, u);
    const Index pin = default_stream_pin_node(*pb.mesh);
    const Vec2 x0 = v.dof_coords[pin];
    const Real c0 = 0.5 * x0.squaredNorm();
    for (Index i = 0; i < v.ndof; ++i)
      REQUIRE(psi[i] == Catch::Approx(0.5 * v.dof_coords[i].squaredNorm() -
                                      c0)
                            .margin(1e-9));
    const Vector u_ccw = interpolate_vector(
        v, [](const Vec2& x) { return Vec2(-x.y(), x.x()); });
    const Vector psi_ccw = stream_function(pb, u_ccw);
    REQUIRE((psi_ccw + psi).cwiseAbs().maxCoeff() <= 1e-9);
  }
  SECTION("incompatible data is rejected") {
    REQUIRE_THROWS_AS(
        solve_poisson_neumann(
            v, [](Index, int, const Vec2&) { return 1.0; },
            [](Index, const Vec2&, const Vec2&) { return 0.0; }, 0),
        IncompatibleData);
  }
  SECTION("stream function round trip error decreases under refinement") {
    std::vector<Real> errors;
    for (const Index n : {8, 16}) {
      FlowProblem lid = make_square_lid_problem(n, 0.1);
      const FomSolution sol = newton_solve(lid, mu1(1.0));
      REQUIRE(sol.converged);
      const Vector psi = stream_function(lid, sol.velocity);
      const Vector back = velocity_from_stream(lid, psi);
      errors.push_back((back - sol.velocity).norm() / sol.velocity.norm());
    }
    REQUIRE(errors[1] < errors[0]);
    REQUIRE(errors[1] <= 5e-2);
  }
}

TEST_CASE("pressure recovery", "[rom]") {
  SECTION("reproduces the full-order pressure") {
    FlowProblem pb = make_square_lid_problem(8, 0.05);
    const FomSolution sol = newton_solve(pb, mu1(1.0));
    REQUIRE(sol.converged);
    const Vector rec = recover_pressure(pb, mu1(1.0), sol.velocity);
    REQUIRE((rec - sol.pressure).norm() <= 1e-6 * sol.pressure.norm());
    // recovery is independent of any pressure guess and idempotent
    const Vector rec2 = recover_pressure(pb, mu1(1.0), sol.velocity);
    REQUIRE((rec - rec2).norm() == 0.0);
  }
  SECTION("Couette flow has zero pressure") {
    FlowProblem pb = make_couette_problem(4);
    const auto sol = solve_stokes(pb, mu1(0.5));
    const Vector rec = recover_pressure(pb, mu1(0.5), sol.velocity);
    REQUIRE(rec.cwiseAbs().maxCoeff() <= 1e-8 * sol.velocity.norm());
  }
}

TEST_CASE("rom with a complete basis reproduces the full order solve",
          "[rom]") {
  FlowProblem pb = make_square_lid_problem(2, 0.1);
  const Index nu = pb.velocity_space.n_vector_dofs();
  const Index np = pb.pressure_space.ndof;
  ReducedBasis bu, bp;
  bu.mean = Vector::Zero(nu);
  bu.modes = DenseMatrix::Identity(nu, nu);
  bu.singular_values = Vector::Ones(nu);
  bp.mean = Vector::Zero(np);
  bp.modes = DenseMatrix::Identity(np, np);
  bp.singular_values = Vector::Ones(np);

  const FomSolution fom = newton_solve(pb, mu1(1.0));
  REQUIRE(fom.converged);
  const RomSolution rom = rom_solve(pb, mu1(1.0), bu, bp);
  REQUIRE(rom.converged);
  REQUIRE((rom.velocity - fom.velocity).norm() <=
          1e-8 * std::max(fom.velocity.norm(), 1.0));
}

TEST_CASE("rom reproduces training points within the truncation error",
          "[rom]") {
  FlowProblem pb = make_square_lid_problem(6, 0.05);
  SnapshotSet vel = velocity_set(pb, {0.2, 1.0});
  SnapshotSet pre;
  pre.field_kind = FieldKind::pressure;
  for (const Real m : {0.2, 1.0}) {
    const FomSolution sol = newton_solve(pb, mu1(m));
    pre.append(sol.pressure, mu1(m), SnapshotOrigin::fullorder);
  }
  const Real eps_u = 1e-3;
  const ReducedBasis bu = build_basis(vel, eps_u);
  const ReducedBasis bp = build_basis(pre, 0.25);

  const RomSolution rom = rom_solve(pb, mu1(0.2), bu, bp);
  REQUIRE(rom.converged);
  const Vector ref = vel.data.col(0);
  REQUIRE((rom.velocity - ref).norm() <= 10 * eps_u * ref.norm());

  // reduced saddle structure: exact zero block, B* of size rp x ru
  const Index ru = bu.n_modes(), rp = bp.n_modes();
  REQUIRE(rom.reduced_matrix.rows() == ru + rp);
  REQUIRE(rom.reduced_matrix.bottomRightCorner(rp, rp).norm() == 0.0);
  // Galerkin property: projected momentum residual vanishes at convergence
  REQUIRE(rom.reduced_residual <= 10 * 1e-8 * rom.reduced_rhs_scale +
                                      1e-12);
}

TEST_CASE("local snapshot selection", "[rom]") {
  std::vector<std::array<Real, 2>> box = {{5.0, 30.0}, {0.0, 4.0}};
  std::vector<Vector> params;
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 5; ++j) {
      Vector p(2);
      p << 5.0 + 5.0 * i, 1.0 * j;
      params.push_back(p);
    }
  Vector query(2);
  query << 17.5, 1.5;

  const auto all = select_local_snapshots(params, query, params.size(), box);
  REQUIRE(all.size() == params.size());

  const auto first = select_local_snapshots(params, params[7], 3, box);
  REQUIRE(first[0] == 7);

  // brute-force nearest-k oracle
  const auto got = select_local_snapshots(params, query, 5, box);
  std::vector<std::pair<Real, Index>> dist;
  for (std::size_t i = 0; i < params.size(); ++i) {
    const Real dx = (params[i][0] - query[0]) / 25.0;
    const Real dy = (params[i][1] - query[1]) / 4.0;
    dist.push_back({std::sqrt(dx * dx + dy * dy), static_cast<Index>(i)});
  }
  std::stable_sort(dist.begin(), dist.end());
  for (int k = 0; k < 5; ++k) REQUIRE(got[k] == dist[k].second);

  REQUIRE_THROWS_AS(select_local_snapshots(params, query, 31, box),
                    ConfigError);
}

TEST_CASE("snapshot pairing", "[augment]") {
  const std::vector<std::array<Real, 2>> box1 = {{0.0, 1.0}};
  SECTION("three uniform points chain into two pairs") {
    std::vector<Vector> pts = {mu1(0.0), mu1(0.5), mu1(1.0)};
    const PairList pl = pair_snapshots(pts, box1);
    REQUIRE(pl.pairs == std::vector<std::pair<Index, Index>>{{0, 1}, {1, 2}});
  }
  SECTION("two points give a single pair") {
    std::vector<Vector> pts = {mu1(0.1), mu1(0.9)};
    REQUIRE(pair_snapshots(pts, box1).size() == 1);
  }
  SECTION("uniform 1D grids chain with n-1 pairs") {
    for (int n = 2; n <= 9; ++n) {
      std::vector<Vector> pts;
      for (int i = 0; i < n; ++i)
        pts.push_back(mu1(static_cast<Real>(i) / (n - 1)));
      const PairList pl = pair_snapshots(pts, box1);
      REQUIRE(pl.size() == static_cast<std::size_t>(n - 1));
      for (int i = 0; i + 1 < n; ++i)
        REQUIRE(std::find(pl.pairs.begin(), pl.pairs.end(),
                          std::pair<Index, Index>{i, i + 1}) !=
                pl.pairs.end());
    }
  }
  SECTION("four corners plus center give six pairs") {
    const std::vector<std::array<Real, 2>> box2 = {{0.0, 1.0}, {0.0, 1.0}};
    std::vector<Vector> pts(5, Vector(2));
    pts[0] << 0, 0;
    pts[1] << 1, 0;
    pts[2] << 0, 1;
    pts[3] << 1, 1;
    pts[4] << 0.5, 0.5;
    const PairList pl = pair_snapshots(pts, box2);
    REQUIRE(pl.size() == 6);
    // the four cell edges are paired along each axis
    for (auto [a, b] : {std::pair<Index, Index>{0, 1}, {0, 2}, {1, 3}, {2, 3}})
      REQUIRE(std::find(pl.pairs.begin(), pl.pairs.end(),
                        std::pair<Index, Index>{a, b}) != pl.pairs.end());
    // the center is paired twice, with two distinct corners
    int center_pairs = 0;
    for (const auto& [a, b] : pl.pairs)
      if (b == 4 || a == 4) ++center_pairs;
    REQUIRE(center_pairs == 2);
  }
  SECTION("pairing is invariant under relabeling") {
    std::mt19937 rng(13);
    const std::vector<std::array<Real, 2>> box2 = {{0.0, 1.0}, {0.0, 1.0}};
    std::vector<Vector> pts(6, Vector(2));
    for (auto& p : pts) {
      p[0] = std::uniform_real_distribution<Real>(0, 1)(rng);
      p[1] = std::uniform_real_distribution<Real>(0, 1)(rng);
    }
    const PairList base = pair_snapshots(pts, box2);
    std::vector<Index> perm = {3, 5, 0, 2, 4, 1};
    std::vector<Vector> shuffled(6);
    for (Index i = 0; i < 6; ++i) shuffled[perm[i]] = pts[i];
    const PairList relabeled = pair_snapshots(shuffled, box2);
    std::set<std::pair<Index, Index>> mapped;
    for (const auto& [a, b] : relabeled.pairs) {
      Index ia = 0, ib = 0;
      for (Index i = 0; i < 6; ++i) {
        if (perm[i] == a) ia = i;
        if (perm[i] == b) ib = i;
      }
      mapped.insert(ia < ib ? std::pair{ia, ib} : std::pair{ib, ia});
    }
    const std::set<std::pair<Index, Index>> expect(base.pairs.begin(),
                                                   base.pairs.end());
    REQUIRE(mapped == expect);
  }
  SECTION("identical points are rejected") {
    std::vector<Vector> pts = {mu1(0.5), mu1(0.5), mu1(0.5)};
    REQUIRE_THROWS_AS(pair_snapshots(pts, box1), DegenerateSet);
  }
}

TEST_CASE("geometric average of stream functions", "[augment]") {
  SECTION("idempotent on fields above the floor") {
    Vector psi(4);
    psi << 1.0, 2.5, 3.0, 7.0;
    const Vector avg = geometric_average(psi, psi, 0.3);
    REQUIRE((avg - psi).cwiseAbs().maxCoeff() <= 1e-12);
  }
  SECTION("constant fields give the scalar geometric mean") {
    const Vector a = Vector::Constant(5, 4.0);
    const Vector b = Vector::Constant(5, 1.0);
    const Vector avg = geometric_average(a, b, 0.5);
    REQUIRE(avg[0] == Catch::Approx(2.0).margin(1e-13));
  }
  SECTION("logarithmic identity for positive fields") {
    std::mt19937 rng(19);
    Vector a(20), b(20);
    for (Index i = 0; i < 20; ++i) {
      a[i] = std::uniform_real_distribution<Real>(1.0, 5.0)(rng);
      b[i] = std::uniform_real_distribution<Real>(1.0, 5.0)(rng);
    }
    const Real alpha = 0.35;
    const Vector avg = geometric_average(a, b, alpha);
    for (Index i = 0; i < 20; ++i)
      REQUIRE(std::log(avg[i]) ==
              Catch::Approx(alpha * std::log(a[i]) +
                            (1 - alpha) * std::log(b[i]))
                  .margin(1e-12));
  }
  SECTION("alpha outside (0,1) is rejected") {
    const Vector a = Vector::Ones(3);
    REQUIRE_THROWS_AS(geometric_average(a, a, 0.0), ConfigError);
    REQUIRE_THROWS_AS(geometric_average(a, a, 1.0), ConfigError);
  }
}

TEST_CASE("velocity from stream function", "[augment]") {
  FlowProblem pb = make_couette_problem(5);
  const FeSpace& v = pb.velocity_space;
  SECTION("psi = y gives the unit horizontal flow") {
    const Vector psi =
        interpolate_scalar(v, [](const Vec2& x) { return x.y(); });
    const Vector u = velocity_from_stream(pb, psi);
    for (Index i = 0; i < v.ndof; ++i) {
      REQUIRE(u[2 * i] == Catch::Approx(1.0).margin(1e-10));
      REQUIRE(u[2 * i + 1] == Catch::Approx(0.0).margin(1e-10));
    }
  }
  SECTION("quadratic psi gives the rigid rotation, weakly solenoidal") {
    const Vector psi = interpolate_scalar(
        v, [](const Vec2& x) { return 0.5 * x.squaredNorm(); });
    const Vector u = velocity_from_stream(pb, psi);
    const Vector exact = interpolate_vector(
        v, [](const Vec2& x) { return Vec2(x.y(), -x.x()); });
    REQUIRE((u - exact).cwiseAbs().maxCoeff() <= 1e-10);
    const SparseMatrix G = constraint_matrix(v, pb.pressure_space);
    REQUIRE((G * u).norm() <= 1e-10);
  }
  SECTION("adding a constant to psi leaves the velocity unchanged") {
    const Vector psi = interpolate_scalar(
        v, [](const Vec2& x) { return x.x() * x.y() + 0.2 * x.y(); });
    const Vector u1 = velocity_from_stream(pb, psi);
    const Vector u2 = velocity_from_stream(
        pb, psi + Vector::Constant(psi.size(), 42.0));
    REQUIRE((u1 - u2).cwiseAbs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("linear combination", "[augment]") {
  // constant fields (2,0) and (0,2) in interleaved layout
  Vector a = Vector::Zero(4), b = Vector::Zero(4);
  a[0] = a[2] = 2.0;
  b[1] = b[3] = 2.0;
  const Vector mix = linear_combination(a, b, 0.5);
  REQUIRE(mix[0] == Catch::Approx(1.0));
  REQUIRE(mix[1] == Catch::Approx(1.0));
  const Vector same = linear_combination(a, a, 0.25);
  REQUIRE((same - a).norm() == 0.0);
}

TEST_CASE("combination of solenoidal snapshots stays solenoidal",
          "[augment]") {
  FlowProblem pb = make_square_lid_problem(6, 0.05);
  SnapshotSet vel = velocity_set(pb, {0.4, 1.0});
  const SparseMatrix G = constraint_matrix(pb.velocity_space,
                                           pb.pressure_space);
  const Real d0 = weak_divergence(G, vel.data.col(0));
  const Real d1 = weak_divergence(G, vel.data.col(1));
  const Vector mix = linear_combination(vel.data.col(0), vel.data.col(1),
                                        0.3);
  REQUIRE(weak_divergence(G, mix) <= std::max(d0, d1) + 1e-12);
}

TEST_CASE("oseen enhancement", "[augment]") {
  FlowProblem pb = make_square_lid_problem(6, 0.05);
  const FomSolution ns = newton_solve(pb, mu1(1.0));
  REQUIRE(ns.converged);
  SECTION("alpha near one recovers the generating snapshot") {
    const Vector u = oseen_enhance(pb, ns.velocity, mu1(1.0), mu1(0.2),
                                   1.0 - 1e-9);
    REQUIRE((u - ns.velocity).norm() <= 1e-6 * ns.velocity.norm());
  }
  SECTION("zero field with zero boundary data stays zero") {
    FlowProblem quiet = make_square_lid_problem(4, 1.0, 0.0);
    const Vector zero = Vector::Zero(quiet.velocity_space.n_vector_dofs());
    const Vector u = oseen_enhance(quiet, zero, mu1(0.3), mu1(0.7), 0.5);
    REQUIRE(u.cwiseAbs().maxCoeff() <= 1e-13);
  }
}

TEST_CASE("augment_dataset counts, determinism, solenoidality", "[augment]") {
  FlowProblem pb = make_square_lid_problem(6, 0.05);
  SnapshotSet vel = velocity_set(pb, {0.2, 1.0});

  AugmentConfig cfg;
  cfg.strategy = AugmentStrategy::linear_oseen;
  cfg.alphas = default_alphas();

  SECTION("two snapshots and nine alphas give eleven columns") {
    const SnapshotSet out = augment_dataset(vel, pb, cfg);
    REQUIRE(out.n_snapshots() == 11);
    REQUIRE(out.origin[0] == SnapshotOrigin::fullorder);
    for (Index j = 2; j < 11; ++j)
      REQUIRE(out.origin[j] == SnapshotOrigin::artificial);
  }
  SECTION("empty alpha list leaves the set unchanged") {
    cfg.alphas.clear();
    const SnapshotSet out = augment_dataset(vel, pb, cfg);
    REQUIRE(out.n_snapshots() == 2);
  }
  SECTION("repeated runs are bitwise identical") {
    cfg.alphas = {0.25, 0.5, 0.75};
    const SnapshotSet a = augment_dataset(vel, pb, cfg);
    const SnapshotSet b = augment_dataset(vel, pb, cfg);
    REQUIRE(std::memcmp(a.data.data(), b.data.data(),
                        sizeof(Real) * a.data.size()) == 0);
  }
  SECTION("oseen strategies produce weakly solenoidal snapshots that enrich "
          "the span") {
    cfg.alphas = {0.3, 0.6};
    for (const auto strategy : {AugmentStrategy::solenoidal_oseen,
                                AugmentStrategy::linear_oseen}) {
      cfg.strategy = strategy;
      const SnapshotSet out = augment_dataset(vel, pb, cfg);
      const SparseMatrix G = constraint_matrix(pb.velocity_space,
                                               pb.pressure_space);
      for (Index j = 2; j < out.n_snapshots(); ++j) {
        REQUIRE(weak_divergence(G, out.data.col(j)) <= 1e-8);
        DenseMatrix span(out.data.rows(), 3);
        span.col(0) = out.data.col(0);
        span.col(1) = out.data.col(1);
        span.col(2) = out.data.col(j);
        const SvdResult svd = thin_svd(span);
        REQUIRE(svd.singular_values[2] > 1e-8 * svd.singular_values[0]);
      }
    }
  }
  SECTION("solenoidal strategy keeps the projected divergence small") {
    cfg.strategy = AugmentStrategy::solenoidal;
    cfg.alphas = {0.5};
    const SnapshotSet out = augment_dataset(vel, pb, cfg);
    const SparseMatrix G = constraint_matrix(pb.velocity_space,
                                             pb.pressure_space);
    REQUIRE(weak_divergence(G, out.data.col(2)) <= 5e-2);
  }
  SECTION("alpha validation") {
    cfg.alphas = {0.5, 0.5};
    REQUIRE_THROWS_AS(augment_dataset(vel, pb, cfg), ConfigError);
    cfg.alphas = {1.5};
    REQUIRE_THROWS_AS(augment_dataset(vel, pb, cfg), ConfigError);
  }
}
