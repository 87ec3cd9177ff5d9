#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "podns/augment.hpp"
#include "podns/bench.hpp"
#include "podns/config.hpp"
#include "podns/counters.hpp"
#include "podns/fom.hpp"
#include "podns/pod.hpp"
#include "podns/rom.hpp"
#include "podns/vtk.hpp"

namespace podns {

struct ErrorRecord {
  Vector mu;
  Real e_velocity = 0;
  Real e_pressure = 0;
  Real e_drag = 0;
  Real e_lift = 0;
  bool drag_absolute = false;  // reference drag was exactly zero
  bool lift_absolute = false;
  int rom_iterations = 0;
  Index npod_u = 0;
  Index npod_p = 0;
};

struct Report {
  std::string problem;
  std::string strategy;
  Index npod_u = 0;
  Index npod_p = 0;
  Index n_train = 0;
  Index n_pairs = 0;
  Index n_artificial = 0;
  std::vector<ErrorRecord> records;
  SolveCounters counters;           // whole run
  SolveCounters snapshot_counters;  // snapshot stage
  SolveCounters augment_counters;   // augmentation stage
  Real max_mode_boundary_trace = 0;
  Real max_artificial_divergence = 0;
  std::string force_tags_note = "cylinder drag/lift integrate the full "
                                "cylinder surface including the jet arcs";
};

// Relative Euclidean errors against the full-order reference; the ROM
// pressure error uses the recovered pressure.  A vanishing reference QoI
// switches that entry to an absolute error, flagged in the record.
inline ErrorRecord evaluate_errors(const FlowProblem& pb,
                                   const RomSolution& rom,
                                   const FomSolution& fom) {
  if (rom.velocity.size() != fom.velocity.size() ||
      rom.recovered_pressure.size() != fom.pressure.size())
    throw DimensionMismatch("evaluate_errors: space mismatch");
  ErrorRecord rec;
  rec.mu = rom.mu;
  rec.rom_iterations = rom.iterations;
  const Real un = fom.velocity.norm();
  const Real pn = fom.pressure.norm();
  rec.e_velocity = un > 0 ? (rom.velocity - fom.velocity).norm() / un
                          : (rom.velocity - fom.velocity).norm();
  rec.e_pressure = pn > 0
                       ? (rom.recovered_pressure - fom.pressure).norm() / pn
                       : (rom.recovered_pressure - fom.pressure).norm();
  const Vec2 q_fom = qoi(pb, fom);
  const Vec2 q_rom = qoi(pb, rom);
  if (q_fom.x() == 0.0) {
    rec.e_drag = std::abs(q_rom.x());
    rec.drag_absolute = true;
  } else {
    rec.e_drag = std::abs(q_rom.x() - q_fom.x()) / std::abs(q_fom.x());
  }
  if (q_fom.y() == 0.0) {
    rec.e_lift = std::abs(q_rom.y());
    rec.lift_absolute = true;
  } else {
    rec.e_lift = std::abs(q_rom.y() - q_fom.y()) / std::abs(q_fom.y());
  }
  return rec;
}

namespace detail {

inline std::string fmt(Real v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::vector<Vector> resolve_train_points(const RunConfig& cfg,
                                                const FlowProblem& pb) {
  std::vector<Vector> pts = cfg.train_params;
  if (pts.empty() && !cfg.train_grid.empty())
    pts = grid_points(cfg.train_grid, pb.parameter_box);
  if (pts.empty())
    throw ConfigError("no training parameters given");
  for (const auto& mu : pts)
    if (!pb.in_box(mu))
      throw ConfigError("training parameter outside the problem box");
  for (const auto& mu : cfg.test_params)
    if (!pb.in_box(mu))
      throw ConfigError("test parameter outside the problem box");
  return pts;
}

inline FomSolution solve_fom_checked(const FlowProblem& pb, const Vector& mu,
                                     const char* stage) {
  FomSolution sol = solve_fom(pb, mu);
  if (!sol.converged)
    throw StageError(std::string(stage) +
                     ": full-order Newton did not converge");
  return sol;
}

inline Real mode_boundary_trace(const FlowProblem& pb,
                                const ReducedBasis& basis,
                                const Vector& mu) {
  const auto mask = constrained_mask(pb, pb.dirichlet_at(mu));
  Real worst = 0;
  for (Index j = 0; j < basis.n_modes(); ++j) {
    Real on = 0;
    for (Index d = 0; d < basis.modes.rows(); ++d)
      if (mask[d]) on += basis.modes(d, j) * basis.modes(d, j);
    const Real nrm = basis.modes.col(j).norm();
    if (nrm > 0) worst = std::max(worst, std::sqrt(on) / nrm);
  }
  return worst;
}

}  // namespace detail

struct PipelinePaths {
  std::filesystem::path dir;
  explicit PipelinePaths(const std::string& out) : dir(out) {}
  std::string velocity() const { return (dir / "velocity.snap").string(); }
  std::string pressure() const { return (dir / "pressure.snap").string(); }
  std::string augmented() const { return (dir / "augmented.snap").string(); }
  std::string basis_u() const { return (dir / "basis_u.rbas").string(); }
  std::string basis_p() const { return (dir / "basis_p.rbas").string(); }
  std::string report() const { return (dir / "report.csv").string(); }
  std::string counters() const { return (dir / "counters.csv").string(); }
};

// Stage 1: full-order snapshots at the training points.
inline void stage_snapshots(const RunConfig& cfg) {
  const FlowProblem pb = make_problem(cfg.problem, cfg.mesh_level);
  const auto train = detail::resolve_train_points(cfg, pb);
  PipelinePaths paths(cfg.output_dir);
  std::filesystem::create_directories(paths.dir);
  SnapshotSet vel, pre;
  vel.field_kind = FieldKind::velocity;
  pre.field_kind = FieldKind::pressure;
  for (const auto& mu : train) {
    const FomSolution sol = detail::solve_fom_checked(pb, mu, "snapshots");
    vel.append(sol.velocity, mu, SnapshotOrigin::fullorder);
    pre.append(sol.pressure, mu, SnapshotOrigin::fullorder);
  }
  write_snapshots(vel, paths.velocity());
  write_snapshots(pre, paths.pressure());
}

// Stage 2: artificial snapshots for the velocity training set.
inline void stage_augment(const RunConfig& cfg) {
  const FlowProblem pb = make_problem(cfg.problem, cfg.mesh_level);
  PipelinePaths paths(cfg.output_dir);
  SnapshotSet vel = read_snapshots(paths.velocity(), FieldKind::velocity);
  const SnapshotSet enriched = augment_dataset(vel, pb, cfg.augment_config());
  write_snapshots(enriched, paths.augmented());
}

// Stage 3: reduced bases.  The velocity basis uses the enriched set, the
// pressure basis always comes from the original full-order snapshots.
inline void stage_basis(const RunConfig& cfg) {
  PipelinePaths paths(cfg.output_dir);
  const SnapshotSet enriched =
      read_snapshots(paths.augmented(), FieldKind::velocity);
  const SnapshotSet pre = read_snapshots(paths.pressure(),
                                         FieldKind::pressure);
  write_basis(build_basis(enriched, cfg.eps_u), paths.basis_u());
  write_basis(build_basis(pre, cfg.eps_p), paths.basis_p());
}

namespace detail {

inline SnapshotSet take_columns(const SnapshotSet& set,
                                const std::vector<Index>& cols) {
  SnapshotSet out;
  out.field_kind = set.field_kind;
  for (const Index j : cols)
    out.append(set.data.col(j), set.parameters[j], set.origin[j]);
  return out;
}

}  // namespace detail

// Stage 4+5: reduced solves at the test points, error measurement against
// fresh full-order references, CSV report.
inline Report stage_evaluate(const RunConfig& cfg) {
  const FlowProblem pb = make_problem(cfg.problem, cfg.mesh_level);
  PipelinePaths paths(cfg.output_dir);
  Report report;
  report.problem = cfg.problem;
  report.strategy = strategy_name(cfg.strategy);

  const SnapshotSet vel = read_snapshots(paths.velocity(),
                                         FieldKind::velocity);
  const SnapshotSet pre = read_snapshots(paths.pressure(),
                                         FieldKind::pressure);
  report.n_train = vel.n_snapshots();

  const SparseMatrix G = constraint_matrix(pb.velocity_space,
                                           pb.pressure_space);
  auto artificial_divergence = [&](const SnapshotSet& set) {
    Real worst = 0;
    for (Index j = 0; j < set.n_snapshots(); ++j)
      if (set.origin[j] == SnapshotOrigin::artificial)
        worst = std::max(worst, weak_divergence(G, set.data.col(j)));
    return worst;
  };

  ReducedBasis basis_u, basis_p;
  if (cfg.local_k == 0) {
    SnapshotSet enriched = read_snapshots(paths.augmented(),
                                          FieldKind::velocity);
    // columns appended by the augment stage are the artificial ones
    for (Index j = vel.n_snapshots(); j < enriched.n_snapshots(); ++j)
      enriched.origin[j] = SnapshotOrigin::artificial;
    report.n_artificial = enriched.n_snapshots() - vel.n_snapshots();
    report.max_artificial_divergence = artificial_divergence(enriched);
    basis_u = read_basis(paths.basis_u());
    basis_p = read_basis(paths.basis_p());
    report.npod_u = basis_u.n_modes();
    report.npod_p = basis_p.n_modes();
    if (!vel.parameters.empty())
      report.max_mode_boundary_trace =
          detail::mode_boundary_trace(pb, basis_u, vel.parameters.front());
  }
  if (vel.n_snapshots() >= 2) {
    std::vector<Vector> params(vel.parameters.begin(), vel.parameters.end());
    report.n_pairs =
        static_cast<Index>(pair_snapshots(params, pb.parameter_box).size());
  }

  for (const auto& mu : cfg.test_params) {
    ReducedBasis bu = basis_u, bp = basis_p;
    if (cfg.local_k > 0) {
      const auto sel = select_local_snapshots(vel.parameters, mu, cfg.local_k,
                                              pb.parameter_box);
      SnapshotSet local_v = detail::take_columns(vel, sel);
      SnapshotSet local_p = detail::take_columns(pre, sel);
      const SnapshotSet enriched =
          augment_dataset(local_v, pb, cfg.augment_config());
      report.max_artificial_divergence = std::max(
          report.max_artificial_divergence, artificial_divergence(enriched));
      bu = build_basis(enriched, cfg.eps_u);
      bp = build_basis(local_p, cfg.eps_p);
    }
    const FomSolution fom = detail::solve_fom_checked(pb, mu, "evaluate");
    const RomSolution rom = rom_solve(pb, mu, bu, bp);
    ErrorRecord rec = evaluate_errors(pb, rom, fom);
    rec.npod_u = bu.n_modes();
    rec.npod_p = bp.n_modes();
    report.records.push_back(rec);
  }
  return report;
}

inline void write_report_csv(const Report& report, const RunConfig& cfg) {
  PipelinePaths paths(cfg.output_dir);
  std::ofstream out(paths.report());
  if (!out) throw IoError("cannot open for writing: " + paths.report());
  out << "problem,strategy";
  const int np = report.records.empty()
                     ? 0
                     : static_cast<int>(report.records.front().mu.size());
  for (int d = 0; d < np; ++d) out << ",mu" << d;
  out << ",e_velocity,e_pressure,e_drag,e_lift,drag_absolute,lift_absolute,"
         "rom_iterations,npod_u,npod_p\n";
  for (const auto& rec : report.records) {
    out << report.problem << "," << report.strategy;
    for (int d = 0; d < np; ++d) out << "," << detail::fmt(rec.mu[d]);
    out << "," << detail::fmt(rec.e_velocity) << ","
        << detail::fmt(rec.e_pressure) << "," << detail::fmt(rec.e_drag)
        << "," << detail::fmt(rec.e_lift) << "," << (rec.drag_absolute ? 1 : 0)
        << "," << (rec.lift_absolute ? 1 : 0) << "," << rec.rom_iterations
        << "," << rec.npod_u << "," << rec.npod_p << "\n";
  }
  if (!out) throw IoError("write failed: " + paths.report());

  std::ofstream cnt(paths.counters());
  if (!cnt) throw IoError("cannot open for writing: " + paths.counters());
  cnt << "key,value\n";
  cnt << "npod_u," << report.npod_u << "\n";
  cnt << "npod_p," << report.npod_p << "\n";
  cnt << "n_train," << report.n_train << "\n";
  cnt << "n_pairs," << report.n_pairs << "\n";
  cnt << "n_artificial," << report.n_artificial << "\n";
  cnt << "stokes_systems," << report.counters.stokes_systems << "\n";
  cnt << "newton_systems," << report.counters.newton_systems << "\n";
  cnt << "oseen_systems," << report.counters.oseen_systems << "\n";
  cnt << "poisson_systems," << report.counters.poisson_systems << "\n";
  cnt << "projection_systems," << report.counters.projection_systems << "\n";
  cnt << "recovery_systems," << report.counters.recovery_systems << "\n";
  cnt << "snapshot_newton_systems," << report.snapshot_counters.newton_systems
      << "\n";
  cnt << "snapshot_stokes_systems," << report.snapshot_counters.stokes_systems
      << "\n";
  cnt << "augment_oseen_systems," << report.augment_counters.oseen_systems
      << "\n";
  cnt << "augment_poisson_systems," << report.augment_counters.poisson_systems
      << "\n";
  cnt << "max_mode_boundary_trace,"
      << detail::fmt(report.max_mode_boundary_trace) << "\n";
  cnt << "max_artificial_divergence,"
      << detail::fmt(report.max_artificial_divergence) << "\n";
  cnt << "force_tags_note," << report.force_tags_note << "\n";
  if (!cnt) throw IoError("write failed: " + paths.counters());
}

// Full offline/online pipeline; every stage persists its artifacts, so the
// CLI can re-run stages individually.
inline Report run_pipeline(const RunConfig& cfg) {
  reset_solve_counters();
  SolveCounters before = solve_counters();
  stage_snapshots(cfg);
  SolveCounters after_snap = solve_counters();
  stage_augment(cfg);
  SolveCounters after_aug = solve_counters();
  stage_basis(cfg);
  Report report = stage_evaluate(cfg);
  report.counters = solve_counters();
  report.snapshot_counters = after_snap;
  report.snapshot_counters -= before;
  report.augment_counters = after_aug;
  report.augment_counters -= after_snap;
  write_report_csv(report, cfg);
  return report;
}

}  // namespace podns
