#ifndef STFEM_ASSEMBLY_HPP
#define STFEM_ASSEMBLY_HPP

#include <functional>

#include "stfem/field.hpp"
#include "stfem/sparse.hpp"
#include "stfem/spaces.hpp"

namespace stfem {

enum class Regularization { Energy, L2 };

const char* to_string(Regularization reg);

/// Cell-aware scalar callback used for targets and controls: the cell index
/// lets piecewise-constant data be evaluated without point location.
using CellScalarFn = std::function<double(int cell, const Point&)>;

CellScalarFn as_cell_fn(const ScalarFn& f);
CellScalarFn as_cell_fn(const FEFunction& f);

// Global operators on free dofs. Rows always belong to the test space.

/// A: int_Q grad_x p . grad_x v on (Y_h, Y_h). Symmetric positive definite.
SparseMatrix assemble_a(const FunctionSpace& Yh);

/// B: int_Q [dt u v + grad_x u . grad_x v], trial u in X_{0,h} (columns),
/// test v in Y_h (rows).
SparseMatrix assemble_b(const FunctionSpace& X0h, const FunctionSpace& Yh);

/// Time-derivative part of B only: int_Q dt u v.
SparseMatrix assemble_bt(const FunctionSpace& X0h, const FunctionSpace& Yh);

/// C: int_Q u q mass on (X_{0,h}, X_{0,h}). Symmetric positive definite.
SparseMatrix assemble_c(const FunctionSpace& X0h);

/// Mass matrix on an arbitrary P1 space.
SparseMatrix assemble_mass(const FunctionSpace& space);

/// Spatial stiffness on an arbitrary P1 space (used for the discrete X-norm).
SparseMatrix assemble_stiffness(const FunctionSpace& space);

/// Load vector f_i = int_Q f phi_i over the free dofs of the space.
Eigen::VectorXd assemble_rhs(const FunctionSpace& space, const CellScalarFn& f, int quad_degree);
Eigen::VectorXd assemble_rhs(const FunctionSpace& space, const ScalarFn& f, int quad_degree);

/// Coupled first-order optimality operator
///   [ (1/varrho) A   B ] [p]   [0]
///   [    -B^T        C ] [u] = [f],
/// with p over Y_h free dofs followed by u over X_{0,h} free dofs. For the
/// L2-regularization variant the upper-left block is (1/varrho) times the
/// Y_h mass matrix instead of A.
struct BlockSystem {
  FunctionSpace Yh;
  FunctionSpace X0h;
  SparseMatrix upper_left;  // (1/varrho) A  or  (1/varrho) M_Y
  SparseMatrix A;           // unscaled stiffness on Y_h (norms, objective)
  SparseMatrix B;
  SparseMatrix C;
  Eigen::VectorXd rhs;  // [0; f]
  double varrho = 0.0;
  Regularization regularization = Regularization::Energy;

  int n_y() const { return Yh.n_free; }
  int n_x() const { return X0h.n_free; }
  int size() const { return n_y() + n_x(); }

  void apply(const Eigen::VectorXd& x, Eigen::VectorXd& y) const;
  Eigen::VectorXd diagonal() const;
  /// Assembled monolithic operator (for factorizations and export).
  SparseMatrix monolithic() const;

  Eigen::VectorXd adjoint_part(const Eigen::VectorXd& solution) const;  // first n_y entries
  Eigen::VectorXd state_part(const Eigen::VectorXd& solution) const;    // last n_x entries
};

/// Assemble the block optimality system for the given target. Throws for
/// varrho <= 0; warns (once per call) when varrho > 1, where the stability
/// constant of the analysis no longer applies.
BlockSystem build_block_system(const SimplicialMesh& mesh, double varrho, const CellScalarFn& u_d,
                               Regularization reg, int rhs_quad_degree = 4);

/// Forward heat problem: square Galerkin system b(u_h, v_h) = <z, v_h> with
/// trial and test space X_{0,h}. Returns the matrix and load vector.
struct ForwardSystem {
  FunctionSpace X0h;
  SparseMatrix B;
  Eigen::VectorXd rhs;
};

ForwardSystem assemble_forward(const SimplicialMesh& mesh, const CellScalarFn& z,
                               int rhs_quad_degree = 4);

}  // namespace stfem

#endif
