#include "stfem/cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "stfem/io.hpp"
#include "stfem/study.hpp"

namespace stfem::cli {

namespace fs = std::filesystem;

SolverOptions RunConfig::solver_options() const {
  SolverOptions opts;
  opts.tol = tol;
  opts.restart = restart;
  opts.max_iterations = maxiter;
  opts.precond = preconditioner_from_string(precond);
  opts.method = method_from_string(method);
  return opts;
}

namespace {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void validate(const RunConfig& cfg, const ProblemSpec& prob, bool needs_levels) {
  if (cfg.n0 < 1) throw ConfigError("n0 must be >= 1");
  if (cfg.levels < 1) throw ConfigError("levels must be >= 1");
  if (needs_levels && cfg.levels < 2) throw ConfigError("study needs >= 2 levels");
  if (!std::isnan(cfg.varrho) && !(cfg.varrho > 0.0))
    throw ConfigError("varrho must be positive");
  if (cfg.dim != 0 && cfg.dim != prob.dim)
    throw ConfigError("problem " + prob.name + " is fixed to dim=" + std::to_string(prob.dim));
  if (!cfg.regularization.empty() && cfg.regularization != "energy" && cfg.regularization != "l2")
    throw ConfigError("regularization must be 'energy' or 'l2'");

  std::error_code ec;
  fs::create_directories(cfg.out_dir, ec);
  std::ofstream probe(fs::path(cfg.out_dir) / ".stfem_write_probe");
  if (!probe) throw ConfigError("output directory not writable: " + cfg.out_dir);
  probe.close();
  fs::remove(fs::path(cfg.out_dir) / ".stfem_write_probe", ec);
}

StudyOptions study_options(const RunConfig& cfg) {
  StudyOptions opts;
  opts.n0 = cfg.n0;
  opts.levels = cfg.levels;
  opts.solver = cfg.solver_options();
  if (!std::isnan(cfg.varrho)) opts.varrho_override = cfg.varrho;
  if (cfg.regularization == "energy") opts.reg_override = Regularization::Energy;
  if (cfg.regularization == "l2") opts.reg_override = Regularization::L2;
  opts.verbose = true;
  return opts;
}

std::string csv_path(const RunConfig& cfg, const std::string& stem) {
  if (!cfg.csv_path.empty()) return cfg.csv_path;
  return (fs::path(cfg.out_dir) / (stem + ".csv")).string();
}

void export_solution_vtk(const RunConfig& cfg, const SolveArtifacts& art,
                         const std::string& stem) {
  const fs::path dir(cfg.out_dir);
  if (art.mesh->dim <= 3) {
    if (art.u.space) write_vtk_point_field(art.u, "u", (dir / (stem + "_u.vtk")).string());
    if (art.p.space) write_vtk_point_field(art.p, "p", (dir / (stem + "_p.vtk")).string());
    if (art.z.space) write_vtk_cell_field(art.z, "z", (dir / (stem + "_z.vtk")).string());
  } else {
    // 4D solutions: export time slices on a raster instead of volume cells.
    const int m = 2 * art.mesh->n;
    if (art.u.space)
      write_vtk_slice(art.u, art.mesh->dim - 1, 1.0, m, "u", (dir / (stem + "_u_T.vtk")).string());
    if (art.p.space)
      write_vtk_slice(art.p, art.mesh->dim - 1, 0.0, m, "p", (dir / (stem + "_p_0.vtk")).string());
  }
}

int cmd_solve(const RunConfig& cfg) {
  const ProblemSpec prob = problem_by_name(cfg.problem);
  validate(cfg, prob, false);
  StudyOptions opts = study_options(cfg);

  SolveArtifacts art = solve_level(prob, cfg.n0, opts);
  StudyReport report;
  report.problem = prob.name;
  report.varrho = opts.varrho_override.value_or(prob.varrho);
  report.regularization = opts.reg_override.value_or(prob.regularization);
  report.rows.push_back(art.record);
  print_table(report, std::cout);
  std::printf("solver: %s/%s iterations=%d relres=%.3e (%.3fs)\n",
              art.record.solver.method.c_str(), art.record.solver.preconditioner.c_str(),
              art.record.solver.iterations, art.record.solver.relative_residual,
              art.record.solver.seconds);
  if (!std::isnan(art.record.control_support))
    std::printf("control support fraction (|z| > 1%% max): %.4f\n", art.record.control_support);

  if (!cfg.csv_path.empty()) write_csv(report, csv_path(cfg, prob.name + "_solve"));
  if (cfg.vtk) export_solution_vtk(cfg, art, prob.name);
  if (cfg.matrix) {
    const double varrho = opts.varrho_override.value_or(prob.varrho);
    const Regularization reg = opts.reg_override.value_or(prob.regularization);
    BlockSystem sys = build_block_system(*art.mesh, varrho, as_cell_fn(prob.u_d), reg);
    const fs::path dir(cfg.out_dir);
    write_matrix_market(sys.upper_left, (dir / (prob.name + "_block11.mtx")).string());
    write_matrix_market(sys.B, (dir / (prob.name + "_block12.mtx")).string());
    write_matrix_market(sys.C, (dir / (prob.name + "_block22.mtx")).string());
  }
  return kExitOk;
}

int cmd_study(const RunConfig& cfg) {
  const ProblemSpec prob = problem_by_name(cfg.problem);
  validate(cfg, prob, true);
  StudyOptions opts = study_options(cfg);

  const std::string path = csv_path(cfg, prob.name + "_study");
  try {
    StudyReport report = run_study(prob, opts);
    print_table(report, std::cout);
    write_csv(report, path);
    std::printf("csv written: %s\n", path.c_str());
  } catch (const StudySolveError& err) {
    std::fprintf(stderr, "error: %s\n", err.what());
    if (!err.partial.rows.empty()) {
      write_csv(err.partial, path);
      std::fprintf(stderr, "partial csv retained: %s\n", path.c_str());
    }
    return kExitSolver;
  }
  return kExitOk;
}

int cmd_compare_reg(const RunConfig& cfg) {
  const ProblemSpec prob = problem_by_name(cfg.problem);
  validate(cfg, prob, false);
  StudyOptions opts = study_options(cfg);
  opts.reg_override.reset();

  RegComparison cmp = compare_regularizations(prob, cfg.n0, opts);
  std::printf("problem %s at n=%d, varrho=%.3e\n", prob.name.c_str(), cfg.n0,
              opts.varrho_override.value_or(prob.varrho));
  std::printf("control support fraction (|z| > 1%% max): energy %.4f, l2 %.4f\n",
              cmp.support_energy, cmp.support_l2);
  if (cfg.vtk && prob.dim <= 3) {
    const fs::path dir(cfg.out_dir);
    write_vtk_cell_field(cmp.energy.z, "z", (dir / (prob.name + "_z_energy.vtk")).string());
    write_vtk_cell_field(cmp.l2.z, "z", (dir / (prob.name + "_z_l2.vtk")).string());
    write_vtk_point_field(cmp.energy.u, "u", (dir / (prob.name + "_u_energy.vtk")).string());
    write_vtk_point_field(cmp.l2.u, "u", (dir / (prob.name + "_u_l2.vtk")).string());
  }
  return kExitOk;
}

int cmd_export(const RunConfig& cfg) {
  // Mesh-only export works without a problem; matrices need one.
  ProblemSpec prob;
  bool have_problem = !cfg.problem.empty();
  if (have_problem) prob = problem_by_name(cfg.problem);
  const int dim = have_problem ? prob.dim : (cfg.dim == 0 ? 3 : cfg.dim);
  if (have_problem) validate(cfg, prob, false);
  if (dim < 2 || dim > 4) throw ConfigError("dim must be in {2,3,4}");

  const SimplicialMesh mesh = kuhn_grid(dim, cfg.n0, 1.0);
  const fs::path dir(cfg.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (dim <= 3) {
    write_vtk_mesh(mesh, (dir / "mesh.vtk").string());
    write_vtk_boundary(mesh, (dir / "mesh_boundary.vtk").string());
    std::printf("mesh.vtk and mesh_boundary.vtk written to %s\n", cfg.out_dir.c_str());
  } else {
    std::printf("dim=4 mesh has no VTK volume export; %d vertices, %d cells generated\n",
                mesh.n_vertices(), mesh.n_cells());
  }
  if (have_problem) {
    const double varrho = std::isnan(cfg.varrho) ? prob.varrho : cfg.varrho;
    const Regularization reg = cfg.regularization == "l2" ? Regularization::L2
                                                          : Regularization::Energy;
    BlockSystem sys = build_block_system(mesh, varrho, as_cell_fn(prob.u_d), reg);
    write_matrix_market(sys.upper_left, (dir / "block11.mtx").string());
    write_matrix_market(sys.B, (dir / "block12.mtx").string());
    write_matrix_market(sys.C, (dir / "block22.mtx").string());
    std::printf("block11/block12/block22.mtx written to %s\n", cfg.out_dir.c_str());
  }
  return kExitOk;
}

void add_common_options(CLI::App* cmd, RunConfig& cfg, bool with_levels) {
  cmd->add_option("--problem,-p", cfg.problem, "problem name")
      ->check(CLI::IsMember(problem_names()));
  cmd->add_option("--dim", cfg.dim, "space-time dimension (must match the problem)");
  cmd->add_option("--n0", cfg.n0, "subdivisions per axis at the coarsest level");
  if (with_levels) cmd->add_option("--levels", cfg.levels, "number of refinement levels");
  cmd->add_option("--varrho", cfg.varrho, "regularization parameter override");
  cmd->add_option("--reg", cfg.regularization, "regularization: energy or l2")
      ->check(CLI::IsMember({"energy", "l2"}));
  cmd->add_option("--tol", cfg.tol, "solver relative residual tolerance");
  cmd->add_option("--restart", cfg.restart, "GMRES restart length");
  cmd->add_option("--maxiter", cfg.maxiter, "iteration cap");
  cmd->add_option("--precond", cfg.precond, "preconditioner")
      ->check(CLI::IsMember({"none", "jacobi", "block_diag_ilu0"}));
  cmd->add_option("--method", cfg.method, "solver method")
      ->check(CLI::IsMember({"gmres", "direct", "auto"}));
  cmd->add_option("--out", cfg.out_dir, "output directory");
  cmd->add_flag("--vtk", cfg.vtk, "write VTK exports");
  cmd->add_option("--csv", cfg.csv_path, "CSV output path");
  cmd->add_flag("--matrix", cfg.matrix, "export assembled blocks (MatrixMarket)");
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{
      "Space-time finite element solver for parabolic optimal control with "
      "energy regularization. Thread count: STFEM_THREADS environment variable."};
  app.require_subcommand(1);
  app.set_config("--config", "", "key = value config file; command-line flags win");

  RunConfig cfg_solve, cfg_study, cfg_cmp, cfg_export;
  cfg_study.levels = 4;

  CLI::App* solve = app.add_subcommand("solve", "single solve at one level");
  add_common_options(solve, cfg_solve, false);
  CLI::App* study = app.add_subcommand("study", "uniform-refinement convergence study");
  add_common_options(study, cfg_study, true);
  CLI::App* cmp = app.add_subcommand("compare-reg", "energy vs l2 regularization on one mesh");
  add_common_options(cmp, cfg_cmp, false);
  CLI::App* exp = app.add_subcommand("export", "mesh and matrix exports");
  add_common_options(exp, cfg_export, false);
  for (CLI::App* sub : {solve, study, cmp, exp}) sub->configurable();

  solve->get_option("--problem")->required();
  study->get_option("--problem")->required();
  cmp->get_option("--problem")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (solve->parsed()) return cmd_solve(cfg_solve);
    if (study->parsed()) return cmd_study(cfg_study);
    if (cmp->parsed()) return cmd_compare_reg(cfg_cmp);
    if (exp->parsed()) return cmd_export(cfg_export);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const StudySolveError& e) {
    std::fprintf(stderr, "solver error: %s\n", e.what());
    return kExitSolver;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitSolver;
  }
  return kExitConfig;
}

}  // namespace stfem::cli
