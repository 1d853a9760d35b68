#ifndef STFEM_STUDY_HPP
#define STFEM_STUDY_HPP

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>

#include "stfem/linsolve.hpp"
#include "stfem/postprocess.hpp"
#include "stfem/problems.hpp"

namespace stfem {

struct StudyOptions {
  int n0 = 4;       // coarsest subdivisions per axis
  int levels = 1;   // number of refinement levels to run
  std::optional<double> varrho_override;
  std::optional<Regularization> reg_override;
  SolverOptions solver;
  bool compute_xh_norm = true;   // discrete X-norm errors (extra SPD solves)
  bool compute_control = true;   // recover P0 control, record support fraction
  int quad_degree = 4;
  double support_threshold = 0.01;
  bool verbose = false;          // per-level progress on stderr
};

/// Thrown when a level's linear solve fails; carries the completed rows.
struct StudySolveError : std::runtime_error {
  StudyReport partial;
  StudySolveError(const std::string& what, StudyReport report)
      : std::runtime_error(what), partial(std::move(report)) {}
};

/// Per-level artifacts of a single solve (for exports). Mesh and spaces are
/// heap-held so the FEFunction back-pointers stay valid across moves.
struct SolveArtifacts {
  std::shared_ptr<SimplicialMesh> mesh;
  std::shared_ptr<FunctionSpace> X0h, Yh, P0;
  FEFunction u;  // state (X_{0,h}); for forward problems, the heat solution
  FEFunction p;  // adjoint (Y_h); empty for forward problems
  FEFunction z;  // recovered control (P0); empty for forward problems
  LevelRecord record;
};

/// Run one level at the given subdivision count.
SolveArtifacts solve_level(const ProblemSpec& prob, int n, const StudyOptions& opts);

/// Uniform-refinement convergence study; rows in coarse-to-fine order.
StudyReport run_study(const ProblemSpec& prob, const StudyOptions& opts);

/// Energy-vs-L2 comparison on one mesh: both regularizations solved with the
/// same target, controls recovered, support fractions recorded.
struct RegComparison {
  SolveArtifacts energy;
  SolveArtifacts l2;
  double support_energy = 0.0;
  double support_l2 = 0.0;
};

RegComparison compare_regularizations(const ProblemSpec& prob, int n, const StudyOptions& opts);

}  // namespace stfem

#endif
