#include "stfem/study.hpp"

#include <cstdio>

namespace stfem {

namespace {

LevelRecord base_record(const SimplicialMesh& mesh, const FunctionSpace& X0h,
                        const FunctionSpace& Yh) {
  LevelRecord rec;
  rec.level = mesh.level;
  rec.n = mesh.n;
  rec.h_label = mesh.spacing();
  rec.n_vertices = mesh.n_vertices();
  rec.dofs_vertex_convention = 2LL * mesh.n_vertices();
  rec.n_free_x = X0h.n_free;
  rec.n_free_y = Yh.n_free;
  return rec;
}

SolveArtifacts solve_forward_level(const ProblemSpec& prob,
                                   std::shared_ptr<SimplicialMesh> mesh,
                                   const StudyOptions& opts) {
  SolveArtifacts out;
  out.mesh = std::move(mesh);
  const ForwardSystem sys =
      assemble_forward(*out.mesh, as_cell_fn(prob.forward_source), opts.quad_degree);
  Eigen::VectorXd x;
  SolveReport report = solve_forward(sys, x, opts.solver);
  if (!report.success)
    throw StudySolveError("forward solve failed at n=" + std::to_string(out.mesh->n), {});

  out.X0h = std::make_shared<FunctionSpace>(sys.X0h);
  out.Yh = std::make_shared<FunctionSpace>(
      make_space(*out.mesh, SpaceKind::P1, EssentialBC::SigmaOnly));
  out.record = base_record(*out.mesh, *out.X0h, *out.Yh);
  // The forward system has a single field; the vertex-convention count is per
  // field here.
  out.record.dofs_vertex_convention = out.mesh->n_vertices();

  out.u = FEFunction(*out.X0h, FieldRole::State);
  out.u.coeffs = x;
  if (prob.exact_u) {
    out.record.err_u_Y = error_norm(out.u, *prob.exact_u, ErrorNorm::Y, opts.quad_degree);
    out.record.err_u_L2 = error_norm(out.u, *prob.exact_u, ErrorNorm::L2, opts.quad_degree);
  }
  out.record.solver = report;
  return out;
}

}  // namespace

SolveArtifacts solve_level(const ProblemSpec& prob, int n, const StudyOptions& opts) {
  auto mesh = std::make_shared<SimplicialMesh>(kuhn_grid(prob.dim, n, 1.0));
  if (prob.forward_only) return solve_forward_level(prob, std::move(mesh), opts);

  SolveArtifacts out;
  out.mesh = std::move(mesh);
  const double varrho = opts.varrho_override.value_or(prob.varrho);
  const Regularization reg = opts.reg_override.value_or(prob.regularization);
  const CellScalarFn u_d = as_cell_fn(prob.u_d);

  BlockSystem sys = build_block_system(*out.mesh, varrho, u_d, reg, opts.quad_degree);
  Eigen::VectorXd x;
  SolveReport report = solve_block_system(sys, x, opts.solver);
  if (!report.success)
    throw StudySolveError("block solve failed at n=" + std::to_string(out.mesh->n), {});

  out.X0h = std::make_shared<FunctionSpace>(sys.X0h);
  out.Yh = std::make_shared<FunctionSpace>(sys.Yh);
  out.record = base_record(*out.mesh, *out.X0h, *out.Yh);
  out.record.solver = report;

  out.u = FEFunction(*out.X0h, FieldRole::State);
  out.u.coeffs = sys.state_part(x);
  out.p = FEFunction(*out.Yh, FieldRole::Adjoint);
  out.p.coeffs = sys.adjoint_part(x);

  if (prob.has_exact()) {
    out.record.err_u_Y = error_norm(out.u, *prob.exact_u, ErrorNorm::Y, opts.quad_degree);
    out.record.err_u_L2 = error_norm(out.u, *prob.exact_u, ErrorNorm::L2, opts.quad_degree);
    out.record.err_p_Y = error_norm(out.p, *prob.exact_p, ErrorNorm::Y, opts.quad_degree);
    out.record.err_p_L2 = error_norm(out.p, *prob.exact_p, ErrorNorm::L2, opts.quad_degree);
    if (opts.compute_xh_norm) {
      const XhNormEvaluator xh(*out.Yh, sys.A);
      out.record.err_u_Xh = xh.error_norm(out.u, *prob.exact_u, opts.quad_degree);
    }
  }

  out.record.J_h = objective(out.u, out.p.coeffs, u_d, sys, opts.quad_degree);
  if (!std::isnan(prob.J_exact)) out.record.err_J = std::abs(out.record.J_h - prob.J_exact);

  if (opts.compute_control) {
    out.P0 = std::make_shared<FunctionSpace>(
        make_space(*out.mesh, SpaceKind::P0, EssentialBC::None));
    out.z = recover_control(out.u, out.p, u_d, varrho, reg, *out.P0, opts.quad_degree);
    out.record.control_support = support_fraction(out.z, opts.support_threshold);
  }
  return out;
}

StudyReport run_study(const ProblemSpec& prob, const StudyOptions& opts) {
  StudyReport report;
  report.problem = prob.name;
  report.varrho = opts.varrho_override.value_or(prob.varrho);
  report.regularization = opts.reg_override.value_or(prob.regularization);

  int n = opts.n0;
  for (int lvl = 0; lvl < opts.levels; ++lvl, n *= 2) {
    if (opts.verbose)
      std::fprintf(stderr, "[study] %s level %d (n=%d)...\n", prob.name.c_str(), lvl, n);
    try {
      SolveArtifacts art = solve_level(prob, n, opts);
      art.record.level = lvl;
      report.rows.push_back(art.record);
    } catch (const StudySolveError& err) {
      throw StudySolveError(err.what(), std::move(report));
    }
    if (opts.verbose) {
      const auto& r = report.rows.back();
      std::fprintf(stderr, "[study]   solver %s/%s iters=%d relres=%.2e (%.2fs)\n",
                   r.solver.method.c_str(), r.solver.preconditioner.c_str(),
                   r.solver.iterations, r.solver.relative_residual, r.solver.seconds);
    }
  }
  return report;
}

RegComparison compare_regularizations(const ProblemSpec& prob, int n, const StudyOptions& opts) {
  RegComparison cmp;
  StudyOptions o = opts;
  o.compute_control = true;
  o.reg_override = Regularization::Energy;
  cmp.energy = solve_level(prob, n, o);
  o.reg_override = Regularization::L2;
  cmp.l2 = solve_level(prob, n, o);
  cmp.support_energy = cmp.energy.record.control_support;
  cmp.support_l2 = cmp.l2.record.control_support;
  return cmp;
}

}  // namespace stfem
