#ifndef STFEM_POSTPROCESS_HPP
#define STFEM_POSTPROCESS_HPP

#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "stfem/assembly.hpp"
#include "stfem/field.hpp"
#include "stfem/linsolve.hpp"
#include "stfem/spaces.hpp"

namespace stfem {

enum class ErrorNorm { Y, L2 };

/// || u - u_h || in the chosen norm, by per-cell quadrature against the
/// analytic solution (spatial gradients analytic for the Y norm).
double error_norm(const FEFunction& u_h, const ExactScalar& exact, ErrorNorm which,
                  int quad_degree = 4);

/// || f || of an analytic field alone (u_h = 0 case of the above).
double field_norm(const SimplicialMesh& mesh, const ExactScalar& f, ErrorNorm which,
                  int quad_degree = 4);

/// x^T K x for a coefficient vector (norm evaluations through assembled
/// operators).
double quadratic_form(const SparseMatrix& K, const Eigen::VectorXd& x);

/// Discrete X_{0,h}-norm machinery: || v ||_{X_{0,h}}^2 = ||w||_Y^2 + ||v||_Y^2
/// where w in Y_h solves the auxiliary problem A w = (dt v, tests in Y_h).
class XhNormEvaluator {
 public:
  XhNormEvaluator(const FunctionSpace& Yh, const SparseMatrix& A);

  /// Norm of a discrete function on X_{0,h}.
  double norm(const FEFunction& u, const SparseMatrix& Bt, const SparseMatrix& Kx) const;

  /// Norm of the error u_exact - u_h (time derivative and gradient of the
  /// exact part analytic).
  double error_norm(const FEFunction& u_h, const ExactScalar& exact, int quad_degree = 4) const;

 private:
  const FunctionSpace* Yh_;
  const SparseMatrix* A_;
};

/// Cost functional evaluated from the discrete pair: the control norm enters
/// through the adjoint (energy: ||p||_Y^2 / varrho^2, L2: ||p||^2 / varrho^2).
double objective(const FEFunction& u_h, const Eigen::VectorXd& p_coeffs, const CellScalarFn& u_d,
                 const BlockSystem& system, int quad_degree = 4);

/// Cross-check route: energy-regularization control norm computed by solving
/// the auxiliary Poisson problem for w_z from a recovered P0 control.
double control_h1dual_norm_squared(const FEFunction& z_p0, const FunctionSpace& Yh,
                                   const SparseMatrix& A);

/// Element-wise constant control recovered by L2 projection:
/// z|_tau = -(1/varrho) avg_tau(dt p_h + u_h - u_d) for energy
/// regularization, z|_tau = -(1/varrho) avg_tau(p_h) for L2.
FEFunction recover_control(const FEFunction& u_h, const FEFunction& p_h, const CellScalarFn& u_d,
                           double varrho, Regularization reg, const FunctionSpace& P0,
                           int quad_degree = 4);

/// Fraction of cells with |z| above rel_threshold * max|z|.
double support_fraction(const FEFunction& z_p0, double rel_threshold);

/// Estimated orders of convergence for a halving-h error sequence:
/// eoc[k] = log2(e[k-1]/e[k]); eoc[0] is NaN. Throws on nonpositive errors.
std::vector<double> eoc(const std::vector<double>& errors);

/// One refinement level of a convergence study. Missing quantities are NaN.
struct LevelRecord {
  int level = 0;
  int n = 0;
  double h_label = 0.0;           // grid pitch 1/n, the table mesh size
  long long n_vertices = 0;
  long long dofs_vertex_convention = 0;  // both coupled fields over all vertices
  int n_free_x = 0;
  int n_free_y = 0;
  double err_u_Y, err_p_Y, err_u_L2, err_p_L2, err_u_Xh;
  double J_h, err_J;
  double control_support = std::numeric_limits<double>::quiet_NaN();
  SolveReport solver;

  LevelRecord();
};

struct StudyReport {
  std::string problem;
  Regularization regularization = Regularization::Energy;
  double varrho = 0.0;
  std::vector<LevelRecord> rows;

  std::vector<double> column(double LevelRecord::*field) const;
};

/// Fixed CSV schema (documented in the README); floats as %.5e, NaN as empty.
/// Wall-clock time is intentionally not part of the CSV.
void write_csv(const StudyReport& report, std::ostream& out);
void write_csv(const StudyReport& report, const std::string& path);

/// Formatted study table on a stream.
void print_table(const StudyReport& report, std::ostream& out);

}  // namespace stfem

#endif
