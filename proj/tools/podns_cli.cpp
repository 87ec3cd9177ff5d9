// Command-line driver for the snapshot/augment/basis/evaluate pipeline.
//
// Exit codes: 0 success, 1 configuration or I/O error, 2 numerical failure.

#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "podns/podns.hpp"

namespace {

using namespace podns;

void print_report(const Report& report) {
  std::cout << "problem=" << report.problem
            << " strategy=" << report.strategy
            << " n_train=" << report.n_train
            << " n_pairs=" << report.n_pairs
            << " n_artificial=" << report.n_artificial << "\n";
  if (report.npod_u > 0)
    std::cout << "npod_u=" << report.npod_u << " npod_p=" << report.npod_p
              << "\n";
  for (const auto& rec : report.records) {
    std::cout << "mu=(";
    for (int d = 0; d < rec.mu.size(); ++d)
      std::cout << (d ? "," : "") << rec.mu[d];
    std::cout << ") e_u=" << rec.e_velocity << " e_p=" << rec.e_pressure
              << " e_drag=" << rec.e_drag << " e_lift=" << rec.e_lift
              << " iters=" << rec.rom_iterations << "\n";
  }
}

void export_run(const RunConfig& cfg) {
  const FlowProblem pb = make_problem(cfg.problem, cfg.mesh_level);
  PipelinePaths paths(cfg.output_dir);
  std::filesystem::create_directories(paths.dir);
  write_mesh(*pb.mesh, (paths.dir / "mesh.txt").string());

  std::vector<VtkField> fields;
  SnapshotSet vel, pre;
  if (std::filesystem::exists(paths.velocity()) &&
      std::filesystem::exists(paths.pressure())) {
    vel = read_snapshots(paths.velocity(), FieldKind::velocity);
    pre = read_snapshots(paths.pressure(), FieldKind::pressure);
    for (Index j = 0; j < vel.n_snapshots(); ++j) {
      fields.push_back({"velocity_" + std::to_string(j), vel.data.col(j), 2,
                        &pb.velocity_space});
      fields.push_back({"pressure_" + std::to_string(j), pre.data.col(j), 1,
                        &pb.pressure_space});
    }
  }
  const std::string out = (paths.dir / "fields.vtk").string();
  export_vtk(*pb.mesh, fields, out, /*refine=*/true);
  std::cout << "wrote " << out << " with " << fields.size() << " fields\n";
}

int dispatch(const std::string& verb, const RunConfig& cfg, bool stage_only) {
  if (verb == "pipeline") {
    print_report(run_pipeline(cfg));
    return 0;
  }
  if (verb == "export") {
    export_run(cfg);
    return 0;
  }
  PipelinePaths paths(cfg.output_dir);
  const bool have_snapshots = std::filesystem::exists(paths.velocity());
  const bool have_augmented = std::filesystem::exists(paths.augmented());
  const bool have_basis = std::filesystem::exists(paths.basis_u());
  auto require = [&](bool present, const std::string& what) {
    if (!present)
      throw ConfigError(what + " missing in " + cfg.output_dir +
                        (stage_only ? " (run the earlier stages first)"
                                    : ""));
  };
  if (verb == "snapshots") {
    stage_snapshots(cfg);
  } else if (verb == "augment") {
    if (!have_snapshots && !stage_only) stage_snapshots(cfg);
    require(std::filesystem::exists(paths.velocity()), "snapshots");
    stage_augment(cfg);
  } else if (verb == "basis") {
    if (!have_snapshots && !stage_only) stage_snapshots(cfg);
    if (!have_augmented && !stage_only) stage_augment(cfg);
    require(std::filesystem::exists(paths.augmented()), "augmented set");
    stage_basis(cfg);
  } else if (verb == "evaluate") {
    if (!have_snapshots && !stage_only) stage_snapshots(cfg);
    if (!have_augmented && !stage_only) stage_augment(cfg);
    if (!have_basis && !stage_only) stage_basis(cfg);
    if (cfg.local_k == 0)
      require(std::filesystem::exists(paths.basis_u()), "reduced basis");
    Report report = stage_evaluate(cfg);
    report.counters = solve_counters();
    write_report_csv(report, cfg);
    print_report(report);
  } else {
    throw ConfigError("unknown verb: " + verb);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"POD reduced-basis pipeline for steady incompressible flow"};
  app.require_subcommand(1);

  std::string config_path;
  std::string output_override;
  bool stage_only = false;

  std::vector<std::string> verbs = {"snapshots", "augment", "basis",
                                    "evaluate", "pipeline", "export"};
  for (const auto& verb : verbs) {
    auto* sub = app.add_subcommand(verb);
    sub->add_option("--config", config_path, "run configuration file")
        ->required();
    sub->add_option("--output", output_override,
                    "override the configured output directory");
    sub->add_flag("--stage-only", stage_only,
                  "do not compute missing prerequisite stages");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    RunConfig cfg = podns::parse_config_file(config_path);
    if (!output_override.empty()) cfg.output_dir = output_override;
    podns::reset_solve_counters();
    return dispatch(app.get_subcommands().front()->get_name(), cfg,
                    stage_only);
  } catch (const podns::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const podns::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 1;
  } catch (const podns::IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 1;
  } catch (const podns::Error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
