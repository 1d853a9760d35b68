#include "stfem/postprocess.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "stfem/refelem.hpp"
#include "parallel.hpp"

namespace stfem {

namespace {

struct CellP1 {
  std::array<double, kMaxDim + 1> nodal{};
  SmallVec grad;      // full space-time gradient, constant on the cell
  double dt = 0.0;    // time-derivative component

  CellP1(const FEFunction& f, const AffineMap& map, int cell) {
    const SimplicialMesh& mesh = *f.space->mesh;
    const int nb = mesh.dim + 1;
    grad = SmallVec::Zero(mesh.dim);
    for (int i = 0; i < nb; ++i) {
      nodal[i] = f.entity_value(mesh.cells[cell][i]);
      grad += nodal[i] * map.shape_gradients().col(i);
    }
    dt = grad[mesh.dim - 1];
  }

  double value(const double* shape, int nb) const {
    double v = 0.0;
    for (int i = 0; i < nb; ++i) v += shape[i] * nodal[i];
    return v;
  }
};

// Ordered-reduction quadrature of a per-cell integrand over the whole mesh.
template <class CellIntegrand>
double integrate_cells(const SimplicialMesh& mesh, const CellIntegrand& fn) {
  std::vector<double> partial(detail::n_chunks(mesh.n_cells()), 0.0);
  detail::for_each_chunk(mesh.n_cells(), [&](int chunk_id, int begin, int end) {
    double s = 0.0;
    for (int c = begin; c < end; ++c) s += fn(c);
    partial[chunk_id] = s;
  });
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

}  // namespace

double error_norm(const FEFunction& u_h, const ExactScalar& exact, ErrorNorm which,
                  int quad_degree) {
  const SimplicialMesh& mesh = *u_h.space->mesh;
  const int nb = mesh.dim + 1;
  const QuadratureRule rule = quadrature(mesh.dim, quad_degree);
  std::vector<double> shape(static_cast<std::size_t>(rule.size()) * nb);
  for (int q = 0; q < rule.size(); ++q)
    p1_shape_values(mesh.dim, rule.points[q], shape.data() + q * nb);

  const double sq = integrate_cells(mesh, [&](int c) {
    const AffineMap map(mesh, c);
    const CellP1 fe(u_h, map, c);
    double s = 0.0;
    for (int q = 0; q < rule.size(); ++q) {
      const Point x = map.map(rule.points[q]);
      double contrib = 0.0;
      if (which == ErrorNorm::L2) {
        const double d = exact.value(x) - fe.value(shape.data() + q * nb, nb);
        contrib = d * d;
      } else {
        const SpatialGrad ge = exact.grad_x(x);
        for (int k = 0; k < mesh.dim - 1; ++k) {
          const double d = ge[k] - fe.grad[k];
          contrib += d * d;
        }
      }
      s += rule.weights[q] * contrib;
    }
    return map.det() * s;
  });
  return std::sqrt(sq);
}

double field_norm(const SimplicialMesh& mesh, const ExactScalar& f, ErrorNorm which,
                  int quad_degree) {
  const QuadratureRule rule = quadrature(mesh.dim, quad_degree);
  const double sq = integrate_cells(mesh, [&](int c) {
    const AffineMap map(mesh, c);
    double s = 0.0;
    for (int q = 0; q < rule.size(); ++q) {
      const Point x = map.map(rule.points[q]);
      double contrib = 0.0;
      if (which == ErrorNorm::L2) {
        const double v = f.value(x);
        contrib = v * v;
      } else {
        const SpatialGrad g = f.grad_x(x);
        for (int k = 0; k < mesh.dim - 1; ++k) contrib += g[k] * g[k];
      }
      s += rule.weights[q] * contrib;
    }
    return map.det() * s;
  });
  return std::sqrt(sq);
}

double quadratic_form(const SparseMatrix& K, const Eigen::VectorXd& x) {
  return x.dot(K * x);
}

XhNormEvaluator::XhNormEvaluator(const FunctionSpace& Yh, const SparseMatrix& A)
    : Yh_(&Yh), A_(&A) {}

double XhNormEvaluator::norm(const FEFunction& u, const SparseMatrix& Bt,
                             const SparseMatrix& Kx) const {
  const Eigen::VectorXd rhs = Bt * u.coeffs;
  const Eigen::VectorXd w = solve_spd(*A_, rhs);
  return std::sqrt(rhs.dot(w) + quadratic_form(Kx, u.coeffs));
}

double XhNormEvaluator::error_norm(const FEFunction& u_h, const ExactScalar& exact,
                                   int quad_degree) const {
  const SimplicialMesh& mesh = *Yh_->mesh;
  const int nb = mesh.dim + 1;
  const QuadratureRule rule = quadrature(mesh.dim, quad_degree);
  std::vector<double> shape(static_cast<std::size_t>(rule.size()) * nb);
  for (int q = 0; q < rule.size(); ++q)
    p1_shape_values(mesh.dim, rule.points[q], shape.data() + q * nb);

  // rhs_i = int dt(u - u_h) phi_i over Y_h tests, and the Y-seminorm of the
  // error, in one sweep.
  std::vector<Eigen::VectorXd> partial_rhs(detail::n_chunks(mesh.n_cells()));
  std::vector<double> partial_y(detail::n_chunks(mesh.n_cells()), 0.0);
  detail::for_each_chunk(mesh.n_cells(), [&](int chunk_id, int begin, int end) {
    Eigen::VectorXd local = Eigen::VectorXd::Zero(Yh_->n_free);
    double ysq = 0.0;
    for (int c = begin; c < end; ++c) {
      const AffineMap map(mesh, c);
      const CellP1 fe(u_h, map, c);
      for (int q = 0; q < rule.size(); ++q) {
        const Point x = map.map(rule.points[q]);
        const double ddt = exact.dt(x) - fe.dt;
        const double wq = map.det() * rule.weights[q];
        for (int i = 0; i < nb; ++i) {
          const int row = Yh_->free_index[mesh.cells[c][i]];
          if (row >= 0) local[row] += wq * ddt * shape[q * nb + i];
        }
        const SpatialGrad ge = exact.grad_x(x);
        for (int k = 0; k < mesh.dim - 1; ++k) {
          const double d = ge[k] - fe.grad[k];
          ysq += wq * d * d;
        }
      }
    }
    partial_rhs[chunk_id] = std::move(local);
    partial_y[chunk_id] = ysq;
  });
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(Yh_->n_free);
  double ysq = 0.0;
  for (std::size_t k = 0; k < partial_rhs.size(); ++k) {
    rhs += partial_rhs[k];
    ysq += partial_y[k];
  }

  const Eigen::VectorXd w = solve_spd(*A_, rhs);
  return std::sqrt(rhs.dot(w) + ysq);
}

double objective(const FEFunction& u_h, const Eigen::VectorXd& p_coeffs, const CellScalarFn& u_d,
                 const BlockSystem& system, int quad_degree) {
  const SimplicialMesh& mesh = *u_h.space->mesh;
  const int nb = mesh.dim + 1;
  const QuadratureRule rule = quadrature(mesh.dim, quad_degree);
  std::vector<double> shape(static_cast<std::size_t>(rule.size()) * nb);
  for (int q = 0; q < rule.size(); ++q)
    p1_shape_values(mesh.dim, rule.points[q], shape.data() + q * nb);

  const double tracking = integrate_cells(mesh, [&](int c) {
    const AffineMap map(mesh, c);
    const CellP1 fe(u_h, map, c);
    double s = 0.0;
    for (int q = 0; q < rule.size(); ++q) {
      const Point x = map.map(rule.points[q]);
      const double d = fe.value(shape.data() + q * nb, nb) - u_d(c, x);
      s += rule.weights[q] * d * d;
    }
    return map.det() * s;
  });

  double control_sq;
  if (system.regularization == Regularization::Energy)
    control_sq = quadratic_form(system.A, p_coeffs);  // ||p||_Y^2
  else
    control_sq = quadratic_form(system.upper_left, p_coeffs) * system.varrho;  // ||p||_L2^2
  return 0.5 * tracking + control_sq / (2.0 * system.varrho);
}

double control_h1dual_norm_squared(const FEFunction& z_p0, const FunctionSpace& Yh,
                                   const SparseMatrix& A) {
  const SimplicialMesh& mesh = *Yh.mesh;
  const int nb = mesh.dim + 1;
  // <z, phi_i> with z constant per cell: z_tau * vol/(dim+1) per vertex.
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(Yh.n_free);
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const double w = z_p0.entity_value(c) * mesh.cell_volume(c) / nb;
    for (int i = 0; i < nb; ++i) {
      const int row = Yh.free_index[mesh.cells[c][i]];
      if (row >= 0) rhs[row] += w;
    }
  }
  const Eigen::VectorXd w_z = solve_spd(A, rhs);
  return rhs.dot(w_z);
}

FEFunction recover_control(const FEFunction& u_h, const FEFunction& p_h, const CellScalarFn& u_d,
                           double varrho, Regularization reg, const FunctionSpace& P0,
                           int quad_degree) {
  if (P0.kind != SpaceKind::P0)
    throw std::invalid_argument("recover_control: P0 space required");
  const SimplicialMesh& mesh = *P0.mesh;
  const int nb = mesh.dim + 1;
  const QuadratureRule rule = quadrature(mesh.dim, quad_degree);

  FEFunction z(P0, FieldRole::Control);
  detail::for_each_chunk(mesh.n_cells(), [&](int, int begin, int end) {
    for (int c = begin; c < end; ++c) {
      const AffineMap map(mesh, c);
      if (reg == Regularization::L2) {
        double mean_p = 0.0;
        for (int i = 0; i < nb; ++i) mean_p += p_h.entity_value(mesh.cells[c][i]) / nb;
        z.coeffs[c] = -mean_p / varrho;
        continue;
      }
      const CellP1 p(p_h, map, c);
      double mean_u = 0.0;
      for (int i = 0; i < nb; ++i) mean_u += u_h.entity_value(mesh.cells[c][i]) / nb;
      double int_ud = 0.0;
      for (int q = 0; q < rule.size(); ++q)
        int_ud += rule.weights[q] * u_d(c, map.map(rule.points[q]));
      const double mean_ud = map.det() * int_ud / map.volume();
      z.coeffs[c] = -(p.dt + mean_u - mean_ud) / varrho;
    }
  });
  return z;
}

double support_fraction(const FEFunction& z_p0, double rel_threshold) {
  const double zmax = z_p0.coeffs.cwiseAbs().maxCoeff();
  if (zmax == 0.0) return 0.0;
  const double cut = rel_threshold * zmax;
  int count = 0;
  for (int c = 0; c < z_p0.coeffs.size(); ++c)
    if (std::abs(z_p0.coeffs[c]) > cut) ++count;
  return static_cast<double>(count) / static_cast<double>(z_p0.coeffs.size());
}

std::vector<double> eoc(const std::vector<double>& errors) {
  if (errors.size() < 2) throw std::invalid_argument("eoc: need at least 2 levels");
  for (double e : errors)
    if (!(e > 0.0)) throw std::invalid_argument("eoc: errors must be positive");
  std::vector<double> rates(errors.size(), std::numeric_limits<double>::quiet_NaN());
  for (std::size_t k = 1; k < errors.size(); ++k)
    rates[k] = std::log2(errors[k - 1] / errors[k]);
  return rates;
}

LevelRecord::LevelRecord() {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  err_u_Y = err_p_Y = err_u_L2 = err_p_L2 = err_u_Xh = nan;
  J_h = err_J = nan;
}

std::vector<double> StudyReport::column(double LevelRecord::*field) const {
  std::vector<double> v;
  v.reserve(rows.size());
  for (const auto& r : rows) v.push_back(r.*field);
  return v;
}

namespace {

std::string fmt_float(double v) {
  if (std::isnan(v)) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.5e", v);
  return buf;
}

std::string fmt_eoc(double v) {
  if (std::isnan(v)) return "-";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

std::vector<double> safe_eoc(const std::vector<double>& errors) {
  // eoc over the valid prefix/suffix; NaN where undefined.
  std::vector<double> rates(errors.size(), std::numeric_limits<double>::quiet_NaN());
  for (std::size_t k = 1; k < errors.size(); ++k)
    if (errors[k - 1] > 0.0 && errors[k] > 0.0)
      rates[k] = std::log2(errors[k - 1] / errors[k]);
  return rates;
}

}  // namespace

void write_csv(const StudyReport& report, std::ostream& out) {
  out << "level,n,h,n_vertices,dofs_vertex_convention,free_dofs_X,free_dofs_Y,free_dofs_total,"
         "err_u_Y,eoc_u_Y,err_p_Y,eoc_p_Y,err_u_L2,eoc_u_L2,err_p_L2,eoc_p_L2,"
         "err_u_Xh,eoc_u_Xh,J_h,err_J,eoc_J,control_support,"
         "solver_method,solver_precond,iterations,rel_residual\n";
  const auto e_uY = safe_eoc(report.column(&LevelRecord::err_u_Y));
  const auto e_pY = safe_eoc(report.column(&LevelRecord::err_p_Y));
  const auto e_uL = safe_eoc(report.column(&LevelRecord::err_u_L2));
  const auto e_pL = safe_eoc(report.column(&LevelRecord::err_p_L2));
  const auto e_uX = safe_eoc(report.column(&LevelRecord::err_u_Xh));
  const auto e_J = safe_eoc(report.column(&LevelRecord::err_J));
  for (std::size_t k = 0; k < report.rows.size(); ++k) {
    const auto& r = report.rows[k];
    out << r.level << ',' << r.n << ',' << fmt_float(r.h_label) << ',' << r.n_vertices << ','
        << r.dofs_vertex_convention << ',' << r.n_free_x << ',' << r.n_free_y << ','
        << (r.n_free_x + r.n_free_y) << ',' << fmt_float(r.err_u_Y) << ',' << fmt_float(e_uY[k])
        << ',' << fmt_float(r.err_p_Y) << ',' << fmt_float(e_pY[k]) << ','
        << fmt_float(r.err_u_L2) << ',' << fmt_float(e_uL[k]) << ',' << fmt_float(r.err_p_L2)
        << ',' << fmt_float(e_pL[k]) << ',' << fmt_float(r.err_u_Xh) << ',' << fmt_float(e_uX[k])
        << ',' << fmt_float(r.J_h) << ',' << fmt_float(r.err_J) << ',' << fmt_float(e_J[k]) << ','
        << fmt_float(r.control_support) << ',' << r.solver.method << ','
        << r.solver.preconditioner << ',' << r.solver.iterations << ','
        << fmt_float(r.solver.relative_residual) << '\n';
  }
}

void write_csv(const StudyReport& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_csv: cannot open " + path);
  write_csv(report, out);
}

void print_table(const StudyReport& report, std::ostream& out) {
  out << "problem " << report.problem << ", regularization " << to_string(report.regularization)
      << ", varrho " << fmt_float(report.varrho) << "\n";
  out << std::left << std::setw(10) << "#Dofs" << std::setw(9) << "h" << std::setw(13)
      << "err_u_Y" << std::setw(8) << "eoc" << std::setw(13) << "err_p_Y" << std::setw(8) << "eoc"
      << std::setw(13) << "err_u_L2" << std::setw(8) << "eoc" << std::setw(13) << "err_p_L2"
      << std::setw(8) << "eoc" << std::setw(13) << "J_h" << std::setw(13) << "|J_h-J|"
      << std::setw(8) << "eoc" << "\n";
  const auto e_uY = safe_eoc(report.column(&LevelRecord::err_u_Y));
  const auto e_pY = safe_eoc(report.column(&LevelRecord::err_p_Y));
  const auto e_uL = safe_eoc(report.column(&LevelRecord::err_u_L2));
  const auto e_pL = safe_eoc(report.column(&LevelRecord::err_p_L2));
  const auto e_J = safe_eoc(report.column(&LevelRecord::err_J));
  for (std::size_t k = 0; k < report.rows.size(); ++k) {
    const auto& r = report.rows[k];
    char hbuf[32];
    std::snprintf(hbuf, sizeof hbuf, "1/%d", r.n);
    out << std::left << std::setw(10) << r.dofs_vertex_convention << std::setw(9) << hbuf
        << std::setw(13) << fmt_float(r.err_u_Y) << std::setw(8) << fmt_eoc(e_uY[k])
        << std::setw(13) << fmt_float(r.err_p_Y) << std::setw(8) << fmt_eoc(e_pY[k])
        << std::setw(13) << fmt_float(r.err_u_L2) << std::setw(8) << fmt_eoc(e_uL[k])
        << std::setw(13) << fmt_float(r.err_p_L2) << std::setw(8) << fmt_eoc(e_pL[k])
        << std::setw(13) << fmt_float(r.J_h) << std::setw(13) << fmt_float(r.err_J)
        << std::setw(8) << fmt_eoc(e_J[k]) << "\n";
  }
}

}  // namespace stfem
