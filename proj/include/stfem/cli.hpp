#ifndef STFEM_CLI_HPP
#define STFEM_CLI_HPP

#include <limits>
#include <optional>
#include <string>

#include "stfem/linsolve.hpp"

namespace stfem::cli {

/// Exit codes: 0 success, 2 configuration error, 3 solver failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitSolver = 3;

struct RunConfig {
  std::string problem;
  int dim = 0;  // 0: take the problem's dimension
  int n0 = 4;
  int levels = 1;
  double varrho = std::numeric_limits<double>::quiet_NaN();  // NaN: problem default
  std::string regularization;  // "", "energy", "l2"
  std::string out_dir = ".";
  bool vtk = false;
  std::string csv_path;  // empty: default name under out_dir
  bool matrix = false;

  double tol = 1e-8;
  int restart = 200;
  int maxiter = 20000;
  std::string precond = "block_diag_ilu0";
  std::string method = "auto";

  SolverOptions solver_options() const;
};

int run(int argc, const char* const* argv);

}  // namespace stfem::cli

#endif
