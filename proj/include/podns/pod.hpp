#pragma once

#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "podns/linalg.hpp"
#include "podns/types.hpp"

namespace podns {

enum class FieldKind { velocity, pressure };
enum class SnapshotOrigin { fullorder, artificial };

// Columns are nodal solution vectors, one per parameter point.
struct SnapshotSet {
  FieldKind field_kind = FieldKind::velocity;
  DenseMatrix data;                      // ndof x nS
  std::vector<Vector> parameters;        // length nS
  std::vector<SnapshotOrigin> origin;    // per column

  Index n_snapshots() const { return data.cols(); }
  Index ndof() const { return data.rows(); }

  void validate() const {
    if (parameters.size() != static_cast<std::size_t>(data.cols()) ||
        origin.size() != static_cast<std::size_t>(data.cols()))
      throw DimensionMismatch("SnapshotSet: metadata length mismatch");
  }

  void append(const Vector& column, const Vector& mu, SnapshotOrigin org) {
    if (data.cols() > 0 && column.size() != data.rows())
      throw DimensionMismatch("SnapshotSet: column length mismatch");
    data.conservativeResize(column.size(), data.cols() + 1);
    data.col(data.cols() - 1) = column;
    parameters.push_back(mu);
    origin.push_back(org);
  }
};

// Subtracts the column mean.
inline std::pair<Vector, DenseMatrix> center(const SnapshotSet& set) {
  if (set.n_snapshots() < 1) throw DimensionMismatch("center: empty set");
  const Vector mean = set.data.rowwise().mean();
  return {mean, set.data.colwise() - mean};
}

enum class ScaleMode { none, per_snapshot_max };

struct ScaledSet {
  SnapshotSet set;
  std::vector<Real> factors;
};

// Divides each column by its max-abs entry, recording the factors.
inline ScaledSet scale(const SnapshotSet& set, ScaleMode mode) {
  ScaledSet out{set, std::vector<Real>(set.n_snapshots(), 1.0)};
  if (mode == ScaleMode::none) return out;
  for (Index j = 0; j < set.n_snapshots(); ++j) {
    const Real m = set.data.col(j).cwiseAbs().maxCoeff();
    if (m == 0.0)
      throw ZeroSnapshot("scale: zero snapshot column " + std::to_string(j));
    out.set.data.col(j) /= m;
    out.factors[j] = m;
  }
  return out;
}

// Smallest n with sum_{i<=n} sigma_i >= (1 - eps) * sum_i sigma_i.
inline Index truncate(const Vector& singular_values, Real eps) {
  if (!(eps > 0.0 && eps < 1.0))
    throw ConfigError("truncate: epsilon must lie in (0,1)");
  const Real total = singular_values.sum();
  if (total <= 0.0) throw AllZero("truncate: all singular values are zero");
  const Real target = (1.0 - eps) * total;
  Real cumulative = 0.0;
  for (Index n = 0; n < singular_values.size(); ++n) {
    cumulative += singular_values[n];
    if (cumulative >= target) return n + 1;
  }
  return singular_values.size();
}

struct ReducedBasis {
  Vector mean;
  DenseMatrix modes;       // ndof x nPOD, orthonormal columns
  Vector singular_values;  // all values, pre-truncation
  Real epsilon = 0.0;

  Index n_modes() const { return modes.cols(); }

  Vector reconstruct(const Vector& coords) const {
    return mean + modes * coords;
  }
  Vector project(const Vector& full) const {
    return modes.transpose() * (full - mean);
  }
};

// center -> (optional per-snapshot scaling) -> thin SVD -> truncation.
inline ReducedBasis build_basis(const SnapshotSet& set, Real eps,
                                ScaleMode mode = ScaleMode::none) {
  auto [mean, centered] = center(set);
  if (mode == ScaleMode::per_snapshot_max) {
    for (Index j = 0; j < centered.cols(); ++j) {
      const Real m = centered.col(j).cwiseAbs().maxCoeff();
      if (m > 0.0) centered.col(j) /= m;
    }
  }
  const SvdResult svd = thin_svd(centered);
  const Index n = truncate(svd.singular_values, eps);
  ReducedBasis basis;
  basis.mean = std::move(mean);
  basis.modes = svd.U.leftCols(n);
  basis.singular_values = svd.singular_values;
  basis.epsilon = eps;
  return basis;
}

// ---------------------------------------------------------------------------
// Snapshot file format: magic "SNAP1", then int64 counts (ndof, nS, n_p),
// then nS parameter points (n_p doubles each), then the column-major payload
// (ndof * nS doubles).  Native little-endian byte order.

namespace detail {
template <typename T>
void write_pod(std::ostream& out, const T& value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}
template <typename T>
T read_pod(std::istream& in) {
  T value;
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) throw IoError("snapshot file truncated");
  return value;
}
}  // namespace detail

inline void write_snapshots(const SnapshotSet& set, const std::string& path) {
  set.validate();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out.write("SNAP1", 5);
  const std::int64_t ndof = set.data.rows(), ns = set.data.cols();
  const std::int64_t npar =
      ns > 0 ? static_cast<std::int64_t>(set.parameters[0].size()) : 0;
  detail::write_pod(out, ndof);
  detail::write_pod(out, ns);
  detail::write_pod(out, npar);
  for (const auto& mu : set.parameters) {
    if (mu.size() != npar)
      throw DimensionMismatch("write_snapshots: ragged parameter points");
    out.write(reinterpret_cast<const char*>(mu.data()),
              npar * sizeof(double));
  }
  out.write(reinterpret_cast<const char*>(set.data.data()),
            ndof * ns * sizeof(double));
  if (!out) throw IoError("write failed: " + path);
}

inline SnapshotSet read_snapshots(const std::string& path,
                                  FieldKind kind = FieldKind::velocity) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open snapshot file: " + path);
  char magic[5];
  in.read(magic, 5);
  if (!in || std::memcmp(magic, "SNAP1", 5) != 0)
    throw ParseError("bad snapshot magic in " + path);
  const auto ndof = detail::read_pod<std::int64_t>(in);
  const auto ns = detail::read_pod<std::int64_t>(in);
  const auto npar = detail::read_pod<std::int64_t>(in);
  if (ndof < 0 || ns < 0 || npar < 0)
    throw ParseError("bad snapshot counts in " + path);
  SnapshotSet set;
  set.field_kind = kind;
  set.parameters.resize(ns);
  for (auto& mu : set.parameters) {
    mu.resize(npar);
    in.read(reinterpret_cast<char*>(mu.data()), npar * sizeof(double));
  }
  set.data.resize(ndof, ns);
  in.read(reinterpret_cast<char*>(set.data.data()),
          ndof * ns * sizeof(double));
  if (!in) throw IoError("snapshot file truncated: " + path);
  set.origin.assign(ns, SnapshotOrigin::fullorder);
  return set;
}

// Reduced-basis file: magic "RBAS1", int64 (ndof, n_modes, n_sigma),
// epsilon, mean, singular values, column-major modes.
inline void write_basis(const ReducedBasis& basis, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out.write("RBAS1", 5);
  detail::write_pod(out, static_cast<std::int64_t>(basis.mean.size()));
  detail::write_pod(out, static_cast<std::int64_t>(basis.modes.cols()));
  detail::write_pod(out,
                    static_cast<std::int64_t>(basis.singular_values.size()));
  detail::write_pod(out, basis.epsilon);
  out.write(reinterpret_cast<const char*>(basis.mean.data()),
            basis.mean.size() * sizeof(double));
  out.write(reinterpret_cast<const char*>(basis.singular_values.data()),
            basis.singular_values.size() * sizeof(double));
  out.write(reinterpret_cast<const char*>(basis.modes.data()),
            basis.modes.size() * sizeof(double));
  if (!out) throw IoError("write failed: " + path);
}

inline ReducedBasis read_basis(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open basis file: " + path);
  char magic[5];
  in.read(magic, 5);
  if (!in || std::memcmp(magic, "RBAS1", 5) != 0)
    throw ParseError("bad basis magic in " + path);
  const auto ndof = detail::read_pod<std::int64_t>(in);
  const auto nmodes = detail::read_pod<std::int64_t>(in);
  const auto nsigma = detail::read_pod<std::int64_t>(in);
  ReducedBasis basis;
  basis.epsilon = detail::read_pod<double>(in);
  basis.mean.resize(ndof);
  in.read(reinterpret_cast<char*>(basis.mean.data()), ndof * sizeof(double));
  basis.singular_values.resize(nsigma);
  in.read(reinterpret_cast<char*>(basis.singular_values.data()),
          nsigma * sizeof(double));
  basis.modes.resize(ndof, nmodes);
  in.read(reinterpret_cast<char*>(basis.modes.data()),
          ndof * nmodes * sizeof(double));
  if (!in) throw IoError("basis file truncated: " + path);
  return basis;
}

}  // namespace podns
