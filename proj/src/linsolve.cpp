#include "stfem/linsolve.hpp"

#include <chrono>
#include <cmath>
#include <memory>
#include <stdexcept>

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>

namespace stfem {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_seconds(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

Eigen::SparseMatrix<double> to_eigen(const SparseMatrix& m) {
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(m.nnz());
  for (int r = 0; r < m.rows; ++r)
    for (int k = m.row_ptr[r]; k < m.row_ptr[r + 1]; ++k)
      trip.emplace_back(r, m.col_idx[k], m.values[k]);
  Eigen::SparseMatrix<double> s(m.rows, m.cols);
  s.setFromTriplets(trip.begin(), trip.end());
  return s;
}

}  // namespace

Preconditioner preconditioner_from_string(const std::string& s) {
  if (s == "none") return Preconditioner::None;
  if (s == "jacobi") return Preconditioner::Jacobi;
  if (s == "block_diag_ilu0" || s == "ilu0") return Preconditioner::BlockDiagIlu0;
  throw std::invalid_argument("unknown preconditioner: " + s);
}

SolveMethod method_from_string(const std::string& s) {
  if (s == "gmres") return SolveMethod::Gmres;
  if (s == "direct") return SolveMethod::Direct;
  if (s == "auto") return SolveMethod::Auto;
  throw std::invalid_argument("unknown solve method: " + s);
}

Ilu0::Ilu0(const SparseMatrix& K) : n_(K.rows) {
  if (K.rows != K.cols) throw std::invalid_argument("Ilu0: square matrix required");
  row_ptr_ = K.row_ptr;
  col_idx_ = K.col_idx;
  values_ = K.values;
  diag_ptr_.assign(n_, -1);

  // Column indices per row are sorted (CSR built from sorted triplets).
  for (int r = 0; r < n_; ++r)
    for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
      if (col_idx_[k] == r) diag_ptr_[r] = k;
  for (int r = 0; r < n_; ++r)
    if (diag_ptr_[r] < 0) throw std::invalid_argument("Ilu0: structurally zero diagonal");

  // Standard IKJ variant restricted to the existing sparsity pattern.
  std::vector<int> marker(n_, -1);
  for (int i = 0; i < n_; ++i) {
    for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) marker[col_idx_[k]] = k;
    for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      const int j = col_idx_[k];
      if (j >= i) break;
      const double pivot = values_[diag_ptr_[j]];
      if (pivot == 0.0) throw std::runtime_error("Ilu0: zero pivot");
      const double lij = values_[k] / pivot;
      values_[k] = lij;
      for (int kk = diag_ptr_[j] + 1; kk < row_ptr_[j + 1]; ++kk) {
        const int pos = marker[col_idx_[kk]];
        if (pos >= 0) values_[pos] -= lij * values_[kk];
      }
    }
    for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) marker[col_idx_[k]] = -1;
  }
}

void Ilu0::apply(const Eigen::VectorXd& r, Eigen::VectorXd& z) const {
  z = r;
  // Forward solve with unit-diagonal L.
  for (int i = 0; i < n_; ++i) {
    double s = z[i];
    for (int k = row_ptr_[i]; k < diag_ptr_[i]; ++k) s -= values_[k] * z[col_idx_[k]];
    z[i] = s;
  }
  // Backward solve with U.
  for (int i = n_ - 1; i >= 0; --i) {
    double s = z[i];
    for (int k = diag_ptr_[i] + 1; k < row_ptr_[i + 1]; ++k) s -= values_[k] * z[col_idx_[k]];
    z[i] = s / values_[diag_ptr_[i]];
  }
}

SolveReport gmres(const LinearOperator& op, const Eigen::VectorXd& rhs, Eigen::VectorXd& x,
                  int n, double tol, int restart, int max_iterations,
                  const LinearOperator& precond) {
  const auto start = Clock::now();
  SolveReport report;
  report.method = "gmres";

  x = Eigen::VectorXd::Zero(n);
  const double rhs_norm = rhs.norm();
  if (rhs_norm == 0.0) {
    report.success = true;
    report.seconds = elapsed_seconds(start);
    return report;
  }

  auto apply_precond = [&](const Eigen::VectorXd& v, Eigen::VectorXd& out) {
    if (precond)
      precond(v, out);
    else
      out = v;
  };

  const int m = std::max(1, restart);
  std::vector<Eigen::VectorXd> basis(m + 1);
  Eigen::MatrixXd hess = Eigen::MatrixXd::Zero(m + 1, m);
  Eigen::VectorXd cs(m), sn(m), g(m + 1);
  Eigen::VectorXd tmp(n), w(n);

  int total_iters = 0;
  double residual = rhs_norm;

  while (total_iters < max_iterations) {
    op(x, w);
    Eigen::VectorXd r = rhs - w;
    residual = r.norm();
    if (residual / rhs_norm <= tol) break;

    g.setZero();
    g[0] = residual;
    basis[0] = r / residual;

    int k = 0;
    for (; k < m && total_iters < max_iterations; ++k, ++total_iters) {
      apply_precond(basis[k], tmp);
      op(tmp, w);
      // Modified Gram-Schmidt.
      for (int i = 0; i <= k; ++i) {
        hess(i, k) = basis[i].dot(w);
        w -= hess(i, k) * basis[i];
      }
      hess(k + 1, k) = w.norm();
      if (hess(k + 1, k) > 0.0) basis[k + 1] = w / hess(k + 1, k);

      // Apply accumulated Givens rotations, then compute the new one.
      for (int i = 0; i < k; ++i) {
        const double t = cs[i] * hess(i, k) + sn[i] * hess(i + 1, k);
        hess(i + 1, k) = -sn[i] * hess(i, k) + cs[i] * hess(i + 1, k);
        hess(i, k) = t;
      }
      const double denom = std::hypot(hess(k, k), hess(k + 1, k));
      if (denom == 0.0) {  // exact breakdown; solution already spanned
        ++k;
        break;
      }
      cs[k] = hess(k, k) / denom;
      sn[k] = hess(k + 1, k) / denom;
      hess(k, k) = denom;
      hess(k + 1, k) = 0.0;
      g[k + 1] = -sn[k] * g[k];
      g[k] = cs[k] * g[k];

      if (std::abs(g[k + 1]) / rhs_norm <= tol) {
        ++k;
        break;
      }
    }

    if (k > 0) {
      // Back substitution for the small least-squares problem.
      Eigen::VectorXd y(k);
      for (int i = k - 1; i >= 0; --i) {
        double s = g[i];
        for (int j = i + 1; j < k; ++j) s -= hess(i, j) * y[j];
        y[i] = s / hess(i, i);
      }
      Eigen::VectorXd update = Eigen::VectorXd::Zero(n);
      for (int i = 0; i < k; ++i) update += y[i] * basis[i];
      apply_precond(update, tmp);
      x += tmp;
    } else {
      break;  // no progress possible
    }
  }

  op(x, w);
  residual = (rhs - w).norm();
  report.iterations = total_iters;
  report.relative_residual = residual / rhs_norm;
  report.success = report.relative_residual <= tol;
  report.seconds = elapsed_seconds(start);
  return report;
}

SolveReport gmres(const BlockSystem& system, Eigen::VectorXd& x, const SolverOptions& opts) {
  LinearOperator op = [&system](const Eigen::VectorXd& v, Eigen::VectorXd& out) {
    system.apply(v, out);
  };

  LinearOperator precond = nullptr;
  std::string precond_name = "none";
  Eigen::VectorXd inv_diag;
  std::shared_ptr<Ilu0> ilu_y, ilu_x;

  switch (opts.precond) {
    case Preconditioner::None:
      break;
    case Preconditioner::Jacobi: {
      precond_name = "jacobi";
      inv_diag = system.diagonal().cwiseInverse();
      precond = [inv_diag](const Eigen::VectorXd& v, Eigen::VectorXd& out) {
        out = inv_diag.cwiseProduct(v);
      };
      break;
    }
    case Preconditioner::BlockDiagIlu0: {
      precond_name = "block_diag_ilu0";
      ilu_y = std::make_shared<Ilu0>(system.upper_left);
      ilu_x = std::make_shared<Ilu0>(system.C);
      const int ny = system.n_y();
      const int nx = system.n_x();
      precond = [ilu_y, ilu_x, ny, nx](const Eigen::VectorXd& v, Eigen::VectorXd& out) {
        out.resize(ny + nx);
        Eigen::VectorXd part;
        ilu_y->apply(v.head(ny), part);
        out.head(ny) = part;
        ilu_x->apply(v.tail(nx), part);
        out.tail(nx) = part;
      };
      break;
    }
  }

  SolveReport report = gmres(op, system.rhs, x, system.size(), opts.tol, opts.restart,
                             opts.max_iterations, precond);
  report.preconditioner = precond_name;
  return report;
}

Eigen::VectorXd solve_spd(const SparseMatrix& K, const Eigen::VectorXd& rhs, double tol) {
  const int n = K.rows;
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  const double rhs_norm = rhs.norm();
  if (rhs_norm == 0.0) return x;

  const Eigen::VectorXd inv_diag = K.diagonal().cwiseInverse();
  Eigen::VectorXd r = rhs;
  Eigen::VectorXd z = inv_diag.cwiseProduct(r);
  Eigen::VectorXd p = z;
  Eigen::VectorXd Kp(n);
  double rz = r.dot(z);

  const int max_iter = std::max(2000, 10 * n);
  for (int it = 0; it < max_iter; ++it) {
    K.multiply(p, Kp);
    const double alpha = rz / p.dot(Kp);
    x += alpha * p;
    r -= alpha * Kp;
    if (r.norm() / rhs_norm <= tol) {
      // Confirm with the true residual; recurrence drift is possible.
      K.multiply(x, Kp);
      if ((rhs - Kp).norm() / rhs_norm <= 10 * tol) return x;
    }
    z = inv_diag.cwiseProduct(r);
    const double rz_new = r.dot(z);
    p = z + (rz_new / rz) * p;
    rz = rz_new;
  }
  throw std::runtime_error("solve_spd: conjugate gradients did not converge");
}

Eigen::VectorXd solve_direct_sparse(const SparseMatrix& K, const Eigen::VectorXd& rhs) {
  Eigen::SparseMatrix<double> A = to_eigen(K);
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.analyzePattern(A);
  lu.factorize(A);
  if (lu.info() != Eigen::Success)
    throw std::runtime_error("solve_direct_sparse: factorization failed");
  return lu.solve(rhs);
}

Eigen::VectorXd solve_direct_dense(const SparseMatrix& K, const Eigen::VectorXd& rhs) {
  return K.to_dense().partialPivLu().solve(rhs);
}

namespace {

SolveReport direct_solve_with_report(const SparseMatrix& K, const Eigen::VectorXd& rhs,
                                     Eigen::VectorXd& x) {
  const auto start = Clock::now();
  SolveReport report;
  report.method = "direct";
  report.preconditioner = "-";
  x = solve_direct_sparse(K, rhs);
  const double rhs_norm = rhs.norm();
  report.relative_residual = rhs_norm == 0.0 ? 0.0 : (rhs - K * x).norm() / rhs_norm;
  report.success = std::isfinite(report.relative_residual);
  report.seconds = elapsed_seconds(start);
  return report;
}

}  // namespace

SolveReport solve_block_system(const BlockSystem& system, Eigen::VectorXd& x,
                               const SolverOptions& opts) {
  SolveMethod method = opts.method;
  if (method == SolveMethod::Auto)
    method = system.size() <= opts.direct_threshold ? SolveMethod::Direct : SolveMethod::Gmres;
  if (method == SolveMethod::Direct)
    return direct_solve_with_report(system.monolithic(), system.rhs, x);
  return gmres(system, x, opts);
}

SolveReport solve_forward(const ForwardSystem& system, Eigen::VectorXd& x,
                          const SolverOptions& opts) {
  SolveMethod method = opts.method;
  const int n = system.X0h.n_free;
  if (method == SolveMethod::Auto)
    method = n <= opts.direct_threshold ? SolveMethod::Direct : SolveMethod::Gmres;
  if (method == SolveMethod::Direct)
    return direct_solve_with_report(system.B, system.rhs, x);

  LinearOperator op = [&system](const Eigen::VectorXd& v, Eigen::VectorXd& out) {
    system.B.multiply(v, out);
  };
  LinearOperator precond = nullptr;
  std::string precond_name = "none";
  if (opts.precond != Preconditioner::None) {
    precond_name = "ilu0";
    auto ilu = std::make_shared<Ilu0>(system.B);
    precond = [ilu](const Eigen::VectorXd& v, Eigen::VectorXd& out) { ilu->apply(v, out); };
  }
  SolveReport report =
      gmres(op, system.rhs, x, n, opts.tol, opts.restart, opts.max_iterations, precond);
  report.preconditioner = precond_name;
  return report;
}

}  // namespace stfem
