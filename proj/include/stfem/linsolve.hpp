#ifndef STFEM_LINSOLVE_HPP
#define STFEM_LINSOLVE_HPP

#include <functional>
#include <string>

#include "stfem/assembly.hpp"
#include "stfem/sparse.hpp"

namespace stfem {

enum class Preconditioner { None, Jacobi, BlockDiagIlu0 };
enum class SolveMethod { Gmres, Direct, Auto };

Preconditioner preconditioner_from_string(const std::string& s);
SolveMethod method_from_string(const std::string& s);

struct SolveReport {
  bool success = false;
  int iterations = 0;
  double relative_residual = 0.0;  // true residual ||b - Ax|| / ||b||
  double seconds = 0.0;
  std::string method;
  std::string preconditioner;
};

struct SolverOptions {
  double tol = 1e-8;
  int restart = 200;
  int max_iterations = 20000;
  Preconditioner precond = Preconditioner::BlockDiagIlu0;
  SolveMethod method = SolveMethod::Auto;
  int direct_threshold = 150000;  // Auto picks direct up to this many unknowns
};

using LinearOperator = std::function<void(const Eigen::VectorXd&, Eigen::VectorXd&)>;

/// Restarted GMRES with right preconditioning. The reported residual is the
/// true relative residual of the returned iterate.
SolveReport gmres(const LinearOperator& op, const Eigen::VectorXd& rhs, Eigen::VectorXd& x,
                  int n, double tol, int restart, int max_iterations,
                  const LinearOperator& precond = nullptr);

/// GMRES on the block optimality system with the named preconditioner.
SolveReport gmres(const BlockSystem& system, Eigen::VectorXd& x, const SolverOptions& opts);

/// Jacobi-preconditioned conjugate gradients for SPD matrices; throws on
/// non-convergence.
Eigen::VectorXd solve_spd(const SparseMatrix& K, const Eigen::VectorXd& rhs, double tol = 1e-10);

/// Sparse LU factorization (monolithic matrix).
Eigen::VectorXd solve_direct_sparse(const SparseMatrix& K, const Eigen::VectorXd& rhs);

/// Dense LU solve; the oracle route for small systems.
Eigen::VectorXd solve_direct_dense(const SparseMatrix& K, const Eigen::VectorXd& rhs);

/// Dispatch per options: GMRES, sparse direct, or size-based auto choice.
SolveReport solve_block_system(const BlockSystem& system, Eigen::VectorXd& x,
                               const SolverOptions& opts);

/// Solve the (nonsymmetric) forward heat system.
SolveReport solve_forward(const ForwardSystem& system, Eigen::VectorXd& x,
                          const SolverOptions& opts);

/// Zero-fill ILU(0) factorization stored in CSR layout split into L (unit
/// diagonal, implicit) and U parts.
class Ilu0 {
 public:
  explicit Ilu0(const SparseMatrix& K);
  void apply(const Eigen::VectorXd& r, Eigen::VectorXd& z) const;

 private:
  int n_;
  std::vector<int> row_ptr_, col_idx_, diag_ptr_;
  std::vector<double> values_;
};

}  // namespace stfem

#endif
