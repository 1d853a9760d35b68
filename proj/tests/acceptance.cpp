// Acceptance suite: one test case and one printed PASS/FAIL line per
// criterion. Shared expensive studies are computed once and cached.

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <random>
#include <vector>

#include "stfem/io.hpp"
#include "stfem/linsolve.hpp"
#include "stfem/postprocess.hpp"
#include "stfem/problems.hpp"
#include "stfem/refelem.hpp"
#include "stfem/study.hpp"
#include "oracles.hpp"

using namespace stfem;

namespace {

struct CriterionLog {
  bool ok = true;
  std::vector<std::string> failures;

  bool require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      failures.push_back(what);
    }
    return cond;
  }

  void finish(int number, const std::string& title) const {
    std::printf("[%s] criterion %d: %s\n", ok ? "PASS" : "FAIL", number, title.c_str());
    for (const auto& f : failures) std::printf("        failed: %s\n", f.c_str());
    std::fflush(stdout);
    CHECK_MESSAGE(ok, "criterion ", number, " (", title, ")");
  }
};

std::string fmt(const char* pattern, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, pattern, a, b);
  return buf;
}

const StudyReport& example1_study() {
  static const StudyReport report = [] {
    StudyOptions opts;
    opts.n0 = 4;
    opts.levels = 4;  // h = 1/4 ... 1/32
    opts.compute_xh_norm = false;
    opts.compute_control = false;
    opts.verbose = true;
    return run_study(example1(), opts);
  }();
  return report;
}

bool within(double value, double reference, double rel_tol) {
  return std::abs(value - reference) <= rel_tol * std::abs(reference);
}

}  // namespace

TEST_CASE("criterion 1: Y-norm error benchmark") {
  CriterionLog log;
  const StudyReport& report = example1_study();
  REQUIRE(report.rows.size() == 4);

  const std::vector<double> ref_u = {4.611, 2.303, 1.129, 0.5572};
  const std::vector<double> ref_p = {4.651e-2, 2.313e-2, 1.134e-2, 5.601e-3};
  const auto err_u = report.column(&LevelRecord::err_u_Y);
  const auto err_p = report.column(&LevelRecord::err_p_Y);
  for (std::size_t k = 0; k < 4; ++k) {
    log.require(within(err_u[k], ref_u[k], 0.20),
                fmt("err_u_Y level %.0f: %.4e vs reference", static_cast<double>(k), err_u[k]));
    log.require(within(err_p[k], ref_p[k], 0.20),
                fmt("err_p_Y level %.0f: %.4e vs reference", static_cast<double>(k), err_p[k]));
  }
  for (const auto& column : {err_u, err_p}) {
    const auto rates = eoc(column);
    for (std::size_t k = 1; k < rates.size(); ++k)
      log.require(rates[k] >= 0.9 && rates[k] <= 1.1, fmt("Y-norm eoc %.0f: %.3f", double(k), rates[k]));
  }
  log.finish(1, "example1 Y-norm errors and eoc within reference bounds");
}

TEST_CASE("criterion 2: L2-norm error benchmark") {
  CriterionLog log;
  const StudyReport& report = example1_study();
  const std::vector<double> ref_u = {2.365e-1, 5.685e-2, 1.410e-2, 3.642e-3};
  const auto err_u = report.column(&LevelRecord::err_u_L2);
  const auto err_p = report.column(&LevelRecord::err_p_L2);
  for (std::size_t k = 0; k < 4; ++k)
    log.require(within(err_u[k], ref_u[k], 0.20),
                fmt("err_u_L2 level %.0f: %.4e vs reference", static_cast<double>(k), err_u[k]));
  const auto rates_u = eoc(err_u);
  for (std::size_t k = 1; k < rates_u.size(); ++k)
    log.require(rates_u[k] >= 1.8, fmt("u L2 eoc %.0f: %.3f", double(k), rates_u[k]));
  const auto rates_p = eoc(err_p);
  for (std::size_t k = 1; k < rates_p.size(); ++k)
    log.require(rates_p[k] >= 1.6, fmt("p L2 eoc %.0f: %.3f", double(k), rates_p[k]));
  log.finish(2, "example1 L2-norm errors and eoc within reference bounds");
}

TEST_CASE("criterion 3: objective convergence benchmark") {
  CriterionLog log;
  const StudyReport& report = example1_study();
  const auto err_J = report.column(&LevelRecord::err_J);
  // h = 1/16 is the third row of the sweep.
  log.require(within(err_J[2], 6.3890e-3, 0.30),
              fmt("|J_h - J| at h=1/16: %.4e vs %.4e", err_J[2], 6.3890e-3));
  const auto rates = eoc(err_J);
  // Exclude the finest level's step from the tolerance check.
  for (std::size_t k = 1; k + 1 < rates.size(); ++k)
    log.require(rates[k] >= 1.8 && rates[k] <= 2.4, fmt("objective eoc %.0f: %.3f", double(k), rates[k]));
  log.finish(3, "example1 objective error and eoc within reference bounds");
}

TEST_CASE("criterion 4: discrete inf-sup bound varrho/16") {
  CriterionLog log;
  struct Case {
    int dim, n;
  };
  for (const Case mc : {Case{2, 2}, Case{2, 4}, Case{2, 8}, Case{3, 2}, Case{3, 4}}) {
    const SimplicialMesh mesh = kuhn_grid(mc.dim, mc.n, 1.0);
    const FunctionSpace Yh = make_space(mesh, SpaceKind::P1, EssentialBC::SigmaOnly);
    const FunctionSpace X0h = make_space(mesh, SpaceKind::P1, EssentialBC::SigmaAndInitial);
    REQUIRE(Yh.n_free + X0h.n_free <= 200);

    const Eigen::MatrixXd A = assemble_a(Yh).to_dense();
    const Eigen::MatrixXd Bt = assemble_bt(X0h, Yh).to_dense();
    const Eigen::MatrixXd Kx = assemble_stiffness(X0h).to_dense();
    const Eigen::MatrixXd N_X = Kx + Bt.transpose() * A.llt().solve(Bt);

    for (double varrho : {1.0, 0.1, 0.01}) {
      const BlockSystem sys = build_block_system(
          mesh, varrho, as_cell_fn(ScalarFn([](const Point&) { return 0.0; })),
          Regularization::Energy);
      const int ny = sys.n_y();
      const int nx = sys.n_x();
      Eigen::MatrixXd N = Eigen::MatrixXd::Zero(ny + nx, ny + nx);
      N.topLeftCorner(ny, ny) = A;
      N.bottomRightCorner(nx, nx) = N_X;
      const double sigma =
          oracle::gen_min_singular_value(sys.monolithic().to_dense(), N, N);
      log.require(sigma >= varrho / 16.0,
                  fmt("sigma_min %.4e vs bound %.4e", sigma, varrho / 16.0));
    }
  }
  log.finish(4, "generalized min singular value >= varrho/16 on small meshes");
}

TEST_CASE("criterion 5: forward heat solve converges at first order") {
  CriterionLog log;
  const ProblemSpec heat = forward_heat(3);
  StudyOptions opts;
  opts.n0 = 4;
  opts.levels = 4;
  opts.verbose = true;
  const StudyReport report = run_study(heat, opts);
  const auto rates = eoc(report.column(&LevelRecord::err_u_Y));
  for (std::size_t k = 1; k < rates.size(); ++k)
    log.require(rates[k] >= 0.9 && rates[k] <= 1.1,
                fmt("forward Y eoc %.0f: %.3f", double(k), rates[k]));
  log.finish(5, "manufactured dim=3 heat solve: Y-norm eoc in [0.9, 1.1]");
}

TEST_CASE("criterion 6: GMRES/direct oracle equivalence and element matrices") {
  CriterionLog log;

  // Every control system in the suite with <= 2000 unknowns, both
  // regularizations, solved by GMRES and by dense LU.
  struct Sys {
    std::string tag;
    BlockSystem sys;
  };
  std::vector<Sys> systems;
  for (int n : {2, 4, 8}) {
    const ProblemSpec prob = example1();
    const SimplicialMesh mesh = kuhn_grid(3, n, 1.0);
    for (Regularization reg : {Regularization::Energy, Regularization::L2})
      systems.push_back({"example1 n=" + std::to_string(n),
                         build_block_system(mesh, prob.varrho, as_cell_fn(prob.u_d), reg)});
  }
  {
    const ProblemSpec prob = example2();
    const SimplicialMesh mesh = kuhn_grid(3, 8, 1.0);
    for (Regularization reg : {Regularization::Energy, Regularization::L2})
      systems.push_back({"example2 n=8",
                         build_block_system(mesh, prob.varrho, as_cell_fn(prob.u_d), reg)});
  }
  for (int n : {2, 4}) {
    const ProblemSpec prob = example3();
    const SimplicialMesh mesh = kuhn_grid(4, n, 1.0);
    systems.push_back(
        {"example3 n=" + std::to_string(n),
         build_block_system(mesh, prob.varrho, as_cell_fn(prob.u_d), Regularization::Energy)});
  }
  for (const auto& [tag, sys] : systems) {
    REQUIRE(sys.size() <= 2000);
    SolverOptions opts;
    opts.method = SolveMethod::Gmres;
    Eigen::VectorXd x_g;
    const SolveReport rep = gmres(sys, x_g, opts);
    const Eigen::VectorXd x_d = solve_direct_dense(sys.monolithic(), sys.rhs);
    const double rel = (x_g - x_d).norm() / x_d.norm();
    log.require(rep.success && rel < 1e-6, tag + fmt(": gmres-direct gap %.2e (%.0f)", rel, 0.0));
  }

  // Element matrices against the independent quadrature oracle.
  std::mt19937 rng(17);
  for (int dim = 2; dim <= 4; ++dim) {
    const SimplicialMesh mesh = kuhn_grid(dim, 2, 1.0);
    std::uniform_int_distribution<int> pick(0, mesh.n_cells() - 1);
    for (int trial = 0; trial < 8; ++trial) {
      const int c = pick(rng);
      const AffineMap map(mesh, c);
      const ElementMatrices em = p1_element_matrices(map, mesh.cell_diameter(c));
      const Eigen::MatrixXd g = oracle::p1_gradients(mesh, c);
      const int nb = dim + 1;
      double worst = 0.0;
      for (int i = 0; i < nb; ++i)
        for (int j = 0; j < nb; ++j) {
          const double mass_o = oracle::integrate_cell(
              mesh, c, 3, [&](const Point& x) {
                const auto loc = mesh.locate(x);
                double pi = 0.0, pj = 0.0;
                for (int k = 0; k <= dim; ++k) {
                  if (loc.vertex_ids[k] == mesh.cells[c][i]) pi = loc.barycentric[k];
                  if (loc.vertex_ids[k] == mesh.cells[c][j]) pj = loc.barycentric[k];
                }
                return pi * pj;
              });
          double sx = 0.0;
          for (int k = 0; k < dim - 1; ++k) sx += g(k, i) * g(k, j);
          const double vol = mesh.cell_volume(c);
          worst = std::max(worst, std::abs(em.mass(i, j) - mass_o));
          worst = std::max(worst, std::abs(em.stiffness_x(i, j) - vol * sx));
          worst = std::max(worst, std::abs(em.timederiv(i, j) - vol / nb * g(dim - 1, j)));
        }
      log.require(worst < 1e-12, fmt("element matrix gap %.2e (dim %.0f)", worst, double(dim)));
    }
  }
  log.finish(6, "small-system solver oracle equivalence and element-matrix oracles");
}

TEST_CASE("criterion 7: energy regularization localizes the control") {
  CriterionLog log;
  StudyOptions opts;
  opts.verbose = true;
  const RegComparison cmp = compare_regularizations(example2(), 16, opts);
  log.require(cmp.support_energy < cmp.support_l2,
              fmt("support fractions: energy %.4f vs l2 %.4f", cmp.support_energy,
                  cmp.support_l2));
  log.finish(7, "example2 control support strictly smaller under energy regularization");
}

TEST_CASE("criterion 8: example3 coarse sweep trends") {
  CriterionLog log;
  StudyOptions opts;
  opts.n0 = 2;
  opts.levels = 3;  // n = 2, 4, 8
  opts.compute_xh_norm = false;
  opts.compute_control = false;
  opts.verbose = true;
  const StudyReport report = run_study(example3(), opts);
  const auto rates_y = eoc(report.column(&LevelRecord::err_u_Y));
  for (std::size_t k = 1; k < rates_y.size(); ++k)
    log.require(rates_y[k] > 0.0, fmt("4d Y eoc %.0f: %.3f", double(k), rates_y[k]));
  const auto rates_l2 = eoc(report.column(&LevelRecord::err_u_L2));
  for (std::size_t k = 1; k < rates_l2.size(); ++k)
    log.require(rates_l2[k] >= 1.5, fmt("4d L2 eoc %.0f: %.3f", double(k), rates_l2[k]));
  log.finish(8, "example3 n=2,4,8: positive Y-norm trend, L2 eoc >= 1.5");
}

TEST_CASE("criterion 9: invariant suites") {
  CriterionLog log;

  // Mesh volume and conformity across dimensions and levels.
  for (int dim = 2; dim <= 4; ++dim) {
    SimplicialMesh mesh = kuhn_grid(dim, 2, 1.0);
    for (int lvl = 0; lvl < (dim == 4 ? 1 : 2); ++lvl) {
      log.require(std::abs(mesh.total_volume() - 1.0) < 1e-12, "cell volumes fill the cylinder");
      const auto hist = oracle::facet_incidence(mesh);
      for (const auto& [incidence, count] : hist)
        log.require(incidence == 1 || incidence == 2, "facet incidence in {1,2}");
      log.require(hist.at(1) == static_cast<int>(mesh.boundary_facets.size()),
                  "boundary facet count matches incidence-1 facets");
      mesh = refine_uniform(mesh);
    }
  }

  // Block system skew/SPD structure.
  {
    const ProblemSpec prob = example1();
    const SimplicialMesh mesh = kuhn_grid(3, 4, 1.0);
    const BlockSystem sys =
        build_block_system(mesh, prob.varrho, as_cell_fn(prob.u_d), Regularization::Energy);
    const Eigen::MatrixXd K = sys.monolithic().to_dense();
    const int ny = sys.n_y();
    const int nx = sys.n_x();
    log.require((K.block(0, ny, ny, nx) + K.block(ny, 0, nx, ny).transpose())
                        .cwiseAbs()
                        .maxCoeff() == 0.0,
                "exact skew coupling");
    log.require(oracle::min_symmetric_eigenvalue(K) > 0.0, "positive definite symmetric part");
    log.require(sys.A.asymmetry() == 0.0, "A symmetric");
    log.require(sys.C.asymmetry() == 0.0, "C symmetric");

    // Galerkin residual of both solve routes.
    for (SolveMethod method : {SolveMethod::Direct, SolveMethod::Gmres}) {
      SolverOptions opts;
      opts.method = method;
      opts.tol = 1e-8;
      Eigen::VectorXd x;
      const SolveReport rep = solve_block_system(sys, x, opts);
      Eigen::VectorXd resid;
      sys.apply(x, resid);
      resid -= sys.rhs;
      log.require(rep.success && resid.norm() <= 1e-8 * sys.rhs.norm(),
                  "Galerkin residual at solver tolerance");
    }
  }

  // Consistency residuals of the manufactured triples at 1000 random points.
  std::mt19937 rng(123);
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  for (const auto& prob : {example1(), example3()}) {
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
      Point p = zero_point();
      for (int k = 0; k < prob.dim; ++k) p[k] = dist(rng);
      const auto res = prob.consistency_residuals(p);
      for (double r : res) worst = std::max(worst, std::abs(r));
    }
    log.require(worst < 1e-10, prob.name + fmt(": consistency residual %.2e (%.0f)", worst, 0.0));
  }

  log.finish(9, "mesh, block-structure, Galerkin, and consistency invariants");
}
