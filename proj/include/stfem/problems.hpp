#ifndef STFEM_PROBLEMS_HPP
#define STFEM_PROBLEMS_HPP

#include <array>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "stfem/assembly.hpp"
#include "stfem/field.hpp"

namespace stfem {

/// A built-in benchmark: target, regularization parameter, and (when known)
/// the exact optimality triple with the derivatives needed for error norms
/// and consistency checks.
struct ProblemSpec {
  std::string name;
  int dim = 3;  // d+1
  double varrho = 0.01;
  Regularization regularization = Regularization::Energy;

  ScalarFn u_d;
  std::optional<ExactScalar> exact_u;
  std::optional<ExactScalar> exact_p;
  std::optional<ExactScalar> exact_z;
  double J_exact = std::numeric_limits<double>::quiet_NaN();

  // Manufactured forward heat solve (no control): source term and exact state.
  bool forward_only = false;
  ScalarFn forward_source;

  bool has_exact() const { return exact_u.has_value(); }

  /// Pointwise residuals of the optimality system at a sample point:
  /// primal dt u - lap u - z, adjoint -dt p - lap p - (u - u_d), and the
  /// gradient equation in Poisson form lap p - varrho z. All vanish
  /// analytically when the triple is consistent.
  std::array<double, 3> consistency_residuals(const Point& x) const;
};

/// Manufactured smooth optimal control problem in two space dimensions with
/// sinusoidal spatial shape and quadratic-in-time factors.
ProblemSpec example1();

/// Discontinuous target: indicator of the radius-1/4 ball centered at
/// (1/2, 1/2, 1/2) in space-time, varrho = 1e-4.
ProblemSpec example2();

/// Three space dimensions analogue of example1.
ProblemSpec example3();

/// Manufactured forward heat solve u = prod sin(pi x_k) * t in the given
/// space-time dimension.
ProblemSpec forward_heat(int dim);

/// Lookup by CLI name (example1, example2, example3, forward2..forward4).
ProblemSpec problem_by_name(const std::string& name);
std::vector<std::string> problem_names();

}  // namespace stfem

#endif
