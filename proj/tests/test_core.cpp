#include <catch2/catch_amalgamated.hpp>

#include <cstring>
#include <filesystem>
#include <random>

#include "podns/linalg.hpp"
#include "podns/pod.hpp"

using namespace podns;

namespace {

SparseMatrix sparse_from_dense(const DenseMatrix& A) {
  std::vector<Triplet> trips;
  for (Index i = 0; i < A.rows(); ++i)
    for (Index j = 0; j < A.cols(); ++j)
      if (A(i, j) != 0.0) trips.emplace_back(i, j, A(i, j));
  SparseMatrix S(A.rows(), A.cols());
  S.setFromTriplets(trips.begin(), trips.end());
  return S;
}

DenseMatrix random_diag_dominant(Index n, std::mt19937& rng) {
  std::uniform_real_distribution<Real> dist(-1.0, 1.0);
  DenseMatrix A(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) A(i, j) = dist(rng);
  for (Index i = 0; i < n; ++i)
    A(i, i) = A.row(i).cwiseAbs().sum() + 1.0;
  return A;
}

Vector random_vector(Index n, std::mt19937& rng) {
  std::uniform_real_distribution<Real> dist(-1.0, 1.0);
  Vector b(n);
  for (Index i = 0; i < n; ++i) b[i] = dist(rng);
  return b;
}

}  // namespace

TEST_CASE("sparse_solve identity and diagonal", "[linalg]") {
  SparseMatrix I3 = sparse_from_dense(DenseMatrix::Identity(3, 3));
  Vector b(3);
  b << 1, 2, 3;
  REQUIRE((sparse_solve(I3, b) - b).norm() == 0.0);

  DenseMatrix D = DenseMatrix::Zero(2, 2);
  D(0, 0) = 2;
  D(1, 1) = 4;
  Vector b2(2);
  b2 << 2, 4;
  const Vector x = sparse_solve(sparse_from_dense(D), b2);
  REQUIRE(x[0] == Catch::Approx(1.0));
  REQUIRE(x[1] == Catch::Approx(1.0));
}

TEST_CASE("sparse_solve residual oracle on random system", "[linalg]") {
  std::mt19937 rng(42);
  const DenseMatrix A = random_diag_dominant(50, rng);
  const Vector b = random_vector(50, rng);
  const SparseMatrix S = sparse_from_dense(A);
  const Vector x = sparse_solve(S, b);
  REQUIRE((A * x - b).norm() <= 1e-10 * b.norm());
}

TEST_CASE("sparse_solve edge cases", "[linalg]") {
  SparseMatrix Z(3, 3);
  Z.setZero();
  Vector b = Vector::Ones(3);
  REQUIRE_THROWS_AS(sparse_solve(Z, b), SingularMatrix);
  SparseMatrix I3 = sparse_from_dense(DenseMatrix::Identity(3, 3));
  REQUIRE(sparse_solve(I3, Vector::Zero(3)).norm() == 0.0);
  REQUIRE_THROWS_AS(sparse_solve(I3, Vector::Ones(2)), DimensionMismatch);
}

TEST_CASE("dense_solve basics", "[linalg]") {
  Vector b(2);
  b << 5, 7;
  REQUIRE((dense_solve(DenseMatrix::Identity(2, 2), b) - b).norm() == 0.0);

  DenseMatrix P(2, 2);
  P << 0, 1, 1, 0;
  Vector b2(2);
  b2 << 1, 2;
  const Vector x = dense_solve(P, b2);
  REQUIRE(x[0] == Catch::Approx(2.0));
  REQUIRE(x[1] == Catch::Approx(1.0));

  std::mt19937 rng(7);
  const DenseMatrix A = random_diag_dominant(20, rng);
  const Vector rhs = random_vector(20, rng);
  const Vector y = dense_solve(A, rhs);
  REQUIRE((A * y - rhs).norm() <= 1e-12 * rhs.norm());

  DenseMatrix singular = DenseMatrix::Ones(3, 3);
  REQUIRE_THROWS_AS(dense_solve(singular, Vector::Ones(3)), SingularMatrix);
}

TEST_CASE("thin_svd diagonal and rank-1", "[linalg]") {
  DenseMatrix X = DenseMatrix::Zero(2, 2);
  X(0, 0) = 3;
  X(1, 1) = 1;
  const SvdResult svd = thin_svd(X);
  REQUIRE(svd.singular_values[0] == Catch::Approx(3.0));
  REQUIRE(svd.singular_values[1] == Catch::Approx(1.0));
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      REQUIRE(std::abs(svd.U(i, j)) == Catch::Approx(i == j ? 1.0 : 0.0));
      REQUIRE(std::abs(svd.V(i, j)) == Catch::Approx(i == j ? 1.0 : 0.0));
    }

  Vector a(4), b(3);
  a << 0.5, 0.5, 0.5, 0.5;
  b << 1, 0, 0;
  const DenseMatrix R = 5.0 * a * b.transpose();
  const SvdResult rank1 = thin_svd(R);
  REQUIRE(rank1.singular_values[0] == Catch::Approx(5.0));
  for (Index k = 1; k < rank1.singular_values.size(); ++k)
    REQUIRE(rank1.singular_values[k] <= 1e-12 * 5.0);
}

TEST_CASE("thin_svd reconstruction and orthonormality oracle", "[linalg]") {
  std::mt19937 rng(3);
  DenseMatrix X(100, 6);
  for (Index i = 0; i < X.rows(); ++i)
    for (Index j = 0; j < X.cols(); ++j)
      X(i, j) = std::uniform_real_distribution<Real>(-2, 2)(rng);
  const SvdResult svd = thin_svd(X);
  const DenseMatrix R =
      svd.U * svd.singular_values.asDiagonal() * svd.V.transpose();
  REQUIRE((X - R).norm() <= 1e-10 * X.norm());
  const DenseMatrix I =
      DenseMatrix::Identity(svd.U.cols(), svd.U.cols());
  REQUIRE((svd.U.transpose() * svd.U - I).cwiseAbs().maxCoeff() <= 1e-12);
  for (Index k = 1; k < svd.singular_values.size(); ++k)
    REQUIRE(svd.singular_values[k - 1] >= svd.singular_values[k]);
  REQUIRE(svd.U.cols() == std::min(X.rows(), X.cols()));
}

TEST_CASE("thin_svd flags duplicated columns as rank deficient", "[linalg]") {
  std::mt19937 rng(11);
  DenseMatrix X(30, 4);
  for (Index i = 0; i < X.rows(); ++i)
    for (Index j = 0; j < 3; ++j)
      X(i, j) = std::uniform_real_distribution<Real>(-1, 1)(rng);
  X.col(3) = X.col(1);
  const SvdResult svd = thin_svd(X);
  REQUIRE(svd.singular_values[3] <= 1e-12 * svd.singular_values[0]);
}

TEST_CASE("center subtracts the column mean", "[pod]") {
  SnapshotSet set;
  set.data.resize(2, 2);
  set.data.col(0) << 1, 1;
  set.data.col(1) << 3, 3;
  set.parameters = {Vector::Zero(1), Vector::Ones(1)};
  set.origin.assign(2, SnapshotOrigin::fullorder);
  const auto [mean, centered] = center(set);
  REQUIRE(mean[0] == Catch::Approx(2.0));
  REQUIRE(mean[1] == Catch::Approx(2.0));
  REQUIRE(centered(0, 0) == Catch::Approx(-1.0));
  REQUIRE(centered(0, 1) == Catch::Approx(1.0));

  SnapshotSet same;
  same.data.resize(3, 2);
  same.data.col(0) << 4, 5, 6;
  same.data.col(1) << 4, 5, 6;
  same.parameters = {Vector::Zero(1), Vector::Ones(1)};
  same.origin.assign(2, SnapshotOrigin::fullorder);
  const auto [m2, c2] = center(same);
  REQUIRE((m2 - same.data.col(0)).norm() == 0.0);
  REQUIRE(c2.norm() == 0.0);

  std::mt19937 rng(5);
  SnapshotSet rnd;
  rnd.data.resize(10, 4);
  for (Index i = 0; i < 10; ++i)
    for (Index j = 0; j < 4; ++j)
      rnd.data(i, j) = std::uniform_real_distribution<Real>(-3, 3)(rng);
  rnd.parameters.assign(4, Vector::Zero(1));
  rnd.origin.assign(4, SnapshotOrigin::fullorder);
  const auto [m3, c3] = center(rnd);
  for (Index i = 0; i < 10; ++i) {
    Real sum = 0;
    for (Index j = 0; j < 4; ++j) sum += rnd.data(i, j);
    REQUIRE(m3[i] == Catch::Approx(sum / 4.0).margin(1e-14));
  }
  const Real scale = rnd.data.cwiseAbs().maxCoeff();
  REQUIRE(c3.rowwise().mean().cwiseAbs().maxCoeff() <= 1e-12 * scale);
}

TEST_CASE("scale per snapshot max", "[pod]") {
  SnapshotSet set;
  set.data.resize(3, 1);
  set.data.col(0) << 0, -4, 2;
  set.parameters = {Vector::Zero(1)};
  set.origin = {SnapshotOrigin::fullorder};

  const ScaledSet none = scale(set, ScaleMode::none);
  REQUIRE((none.set.data - set.data).norm() == 0.0);
  REQUIRE(none.factors[0] == 1.0);

  const ScaledSet scaled = scale(set, ScaleMode::per_snapshot_max);
  REQUIRE(scaled.factors[0] == Catch::Approx(4.0));
  REQUIRE(scaled.set.data(1, 0) == Catch::Approx(-1.0));
  REQUIRE(scaled.set.data(2, 0) == Catch::Approx(0.5));

  DenseMatrix unscaled = scaled.set.data;
  for (Index j = 0; j < unscaled.cols(); ++j)
    unscaled.col(j) *= scaled.factors[j];
  REQUIRE((unscaled - set.data).cwiseAbs().maxCoeff() <= 1e-15);

  SnapshotSet zero;
  zero.data = DenseMatrix::Zero(3, 1);
  zero.parameters = {Vector::Zero(1)};
  zero.origin = {SnapshotOrigin::fullorder};
  REQUIRE_THROWS_AS(scale(zero, ScaleMode::per_snapshot_max), ZeroSnapshot);
}

TEST_CASE("truncate picks the smallest admissible dimension", "[pod]") {
  Vector s(4);
  s << 4, 2, 1, 1;
  REQUIRE(truncate(s, 0.25) == 2);  // cumulative 6 >= 0.75 * 8

  Vector s2(3);
  s2 << 1, 0, 0;
  REQUIRE(truncate(s2, 0.5) == 1);
  REQUIRE(truncate(s2, 1e-6) == 1);

  REQUIRE_THROWS_AS(truncate(Vector::Zero(3), 0.1), AllZero);
  REQUIRE_THROWS_AS(truncate(s, 0.0), ConfigError);

  std::mt19937 rng(17);
  for (int rep = 0; rep < 200; ++rep) {
    const Index n = 1 + rng() % 12;
    Vector sv(n);
    for (Index i = 0; i < n; ++i)
      sv[i] = std::uniform_real_distribution<Real>(0, 1)(rng);
    std::sort(sv.data(), sv.data() + n, std::greater<Real>());
    const Real eps = std::uniform_real_distribution<Real>(0.01, 0.99)(rng);
    const Index got = truncate(sv, eps);
    // brute-force scan over all admissible n
    Index expect = n;
    const Real total = sv.sum();
    for (Index k = 1; k <= n; ++k) {
      if (sv.head(k).sum() >= (1 - eps) * total) {
        expect = k;
        break;
      }
    }
    REQUIRE(got == expect);
  }
}

TEST_CASE("build_basis orthonormality and projection identity", "[pod]") {
  std::mt19937 rng(23);
  SnapshotSet set;
  set.data.resize(40, 8);
  for (Index i = 0; i < 40; ++i)
    for (Index j = 0; j < 8; ++j)
      set.data(i, j) = std::uniform_real_distribution<Real>(-1, 1)(rng);
  set.parameters.assign(8, Vector::Zero(1));
  set.origin.assign(8, SnapshotOrigin::fullorder);

  const ReducedBasis basis = build_basis(set, 0.3);
  const Index n = basis.n_modes();
  REQUIRE(n >= 1);
  const DenseMatrix I = DenseMatrix::Identity(n, n);
  REQUIRE((basis.modes.transpose() * basis.modes - I).cwiseAbs().maxCoeff()
          <= 1e-10);

  const auto [mean, centered] = center(set);
  const DenseMatrix residual =
      centered - basis.modes * (basis.modes.transpose() * centered);
  Real discarded = 0;
  for (Index k = n; k < basis.singular_values.size(); ++k)
    discarded += basis.singular_values[k] * basis.singular_values[k];
  REQUIRE(residual.squaredNorm() ==
          Catch::Approx(discarded).epsilon(1e-8).margin(1e-12));
}

TEST_CASE("appending the mean column changes no singular value", "[pod]") {
  std::mt19937 rng(29);
  SnapshotSet set;
  set.data.resize(25, 5);
  for (Index i = 0; i < 25; ++i)
    for (Index j = 0; j < 5; ++j)
      set.data(i, j) = std::uniform_real_distribution<Real>(-1, 1)(rng);
  set.parameters.assign(5, Vector::Zero(1));
  set.origin.assign(5, SnapshotOrigin::fullorder);
  const ReducedBasis before = build_basis(set, 0.2);

  SnapshotSet extended = set;
  extended.append(set.data.rowwise().mean(), Vector::Zero(1),
                  SnapshotOrigin::artificial);
  const ReducedBasis after = build_basis(extended, 0.2);
  for (Index k = 0; k < before.singular_values.size(); ++k)
    REQUIRE(after.singular_values[k] ==
            Catch::Approx(before.singular_values[k]).margin(1e-10));
  REQUIRE(after.n_modes() == before.n_modes());
}

TEST_CASE("duplicating a snapshot preserves the numerical rank", "[pod]") {
  std::mt19937 rng(31);
  SnapshotSet set;
  set.data.resize(30, 4);
  for (Index i = 0; i < 30; ++i)
    for (Index j = 0; j < 4; ++j)
      set.data(i, j) = std::uniform_real_distribution<Real>(-1, 1)(rng);
  set.parameters.assign(4, Vector::Zero(1));
  set.origin.assign(4, SnapshotOrigin::fullorder);

  auto numerical_rank = [](const SnapshotSet& s) {
    const auto [mean, centered] = center(s);
    const SvdResult svd = thin_svd(centered);
    Index rank = 0;
    for (Index k = 0; k < svd.singular_values.size(); ++k)
      if (svd.singular_values[k] > 1e-10 * svd.singular_values[0]) ++rank;
    return rank;
  };

  const Index rank = numerical_rank(set);
  SnapshotSet dup = set;
  dup.append(set.data.col(2), set.parameters[2], SnapshotOrigin::fullorder);
  REQUIRE(numerical_rank(dup) == rank);
}

TEST_CASE("snapshot and basis files round-trip bitwise", "[pod][io]") {
  std::mt19937 rng(37);
  SnapshotSet set;
  set.field_kind = FieldKind::velocity;
  set.data.resize(12, 3);
  for (Index i = 0; i < 12; ++i)
    for (Index j = 0; j < 3; ++j)
      set.data(i, j) = std::uniform_real_distribution<Real>(-1, 1)(rng);
  set.parameters = {Vector::Constant(2, 0.25), Vector::Constant(2, 0.5),
                    Vector::Constant(2, 1.0)};
  set.origin.assign(3, SnapshotOrigin::fullorder);

  const auto dir = std::filesystem::temp_directory_path() / "podns_test_io";
  std::filesystem::create_directories(dir);
  const std::string snap = (dir / "set.snap").string();
  write_snapshots(set, snap);
  const SnapshotSet back = read_snapshots(snap);
  REQUIRE(back.data.rows() == set.data.rows());
  REQUIRE(back.data.cols() == set.data.cols());
  REQUIRE(std::memcmp(back.data.data(), set.data.data(),
                      sizeof(Real) * set.data.size()) == 0);
  for (Index j = 0; j < 3; ++j)
    REQUIRE(std::memcmp(back.parameters[j].data(), set.parameters[j].data(),
                        sizeof(Real) * 2) == 0);

  const ReducedBasis basis = build_basis(set, 0.1);
  const std::string bas = (dir / "basis.rbas").string();
  write_basis(basis, bas);
  const ReducedBasis rb = read_basis(bas);
  REQUIRE(rb.epsilon == basis.epsilon);
  REQUIRE(rb.n_modes() == basis.n_modes());
  REQUIRE(std::memcmp(rb.modes.data(), basis.modes.data(),
                      sizeof(Real) * basis.modes.size()) == 0);
  REQUIRE(std::memcmp(rb.mean.data(), basis.mean.data(),
                      sizeof(Real) * basis.mean.size()) == 0);

  REQUIRE_THROWS_AS(read_snapshots((dir / "missing.snap").string()), IoError);
}
