#include "stfem/assembly.hpp"

#include <cstdio>
#include <stdexcept>

#include "stfem/refelem.hpp"
#include "parallel.hpp"

namespace stfem {

const char* to_string(Regularization reg) {
  return reg == Regularization::Energy ? "energy" : "l2";
}

CellScalarFn as_cell_fn(const ScalarFn& f) {
  return [f](int, const Point& p) { return f(p); };
}

CellScalarFn as_cell_fn(const FEFunction& f) {
  if (f.space->kind == SpaceKind::P0) {
    const FEFunction fe = f;  // copy of the coefficient view
    return [fe](int cell, const Point&) { return fe.entity_value(cell); };
  }
  const FEFunction fe = f;
  return [fe](int, const Point& p) { return fe.eval(p); };
}

namespace {

enum KernelParts { kStiffness = 1, kTimeDeriv = 2, kMass = 4 };

// Generic P1 x P1 element-loop assembly. Rows follow the test space, columns
// the trial space; constrained nodes are skipped (eliminated, not penalized).
SparseMatrix assemble_p1_pair(const FunctionSpace& test, const FunctionSpace& trial, int parts,
                              bool symmetric) {
  if (test.kind != SpaceKind::P1 || trial.kind != SpaceKind::P1)
    throw std::invalid_argument("assembly: P1 spaces required");
  if (test.mesh != trial.mesh)
    throw std::invalid_argument("assembly: test and trial spaces live on different meshes");

  const SimplicialMesh& mesh = *test.mesh;
  const int nb = mesh.dim + 1;

  std::vector<std::vector<Triplet>> buffers;
  buffers.resize(detail::n_chunks(mesh.n_cells()));
  detail::for_each_chunk(mesh.n_cells(), [&](int chunk_id, int begin, int end) {
    auto& buf = buffers[chunk_id];
    buf.reserve(static_cast<std::size_t>(end - begin) * nb * nb);
    for (int c = begin; c < end; ++c) {
      const AffineMap map(mesh, c);
      const ElementMatrices em = p1_element_matrices(map, mesh.cell_diameter(c));
      for (int i = 0; i < nb; ++i) {
        const int row = test.free_index[mesh.cells[c][i]];
        if (row < 0) continue;
        for (int j = 0; j < nb; ++j) {
          const int col = trial.free_index[mesh.cells[c][j]];
          if (col < 0) continue;
          double v = 0.0;
          if (parts & kStiffness) v += em.stiffness_x(i, j);
          if (parts & kTimeDeriv) v += em.timederiv(i, j);
          if (parts & kMass) v += em.mass(i, j);
          buf.push_back({row, col, v});
        }
      }
    }
  });

  std::vector<Triplet> triplets;
  std::size_t total = 0;
  for (const auto& b : buffers) total += b.size();
  triplets.reserve(total);
  for (const auto& b : buffers) triplets.insert(triplets.end(), b.begin(), b.end());
  return SparseMatrix::from_triplets(test.n_free, trial.n_free, std::move(triplets), symmetric);
}

}  // namespace

SparseMatrix assemble_a(const FunctionSpace& Yh) {
  return assemble_p1_pair(Yh, Yh, kStiffness, true);
}

SparseMatrix assemble_b(const FunctionSpace& X0h, const FunctionSpace& Yh) {
  return assemble_p1_pair(Yh, X0h, kStiffness | kTimeDeriv, false);
}

SparseMatrix assemble_bt(const FunctionSpace& X0h, const FunctionSpace& Yh) {
  return assemble_p1_pair(Yh, X0h, kTimeDeriv, false);
}

SparseMatrix assemble_c(const FunctionSpace& X0h) {
  return assemble_p1_pair(X0h, X0h, kMass, true);
}

SparseMatrix assemble_mass(const FunctionSpace& space) {
  return assemble_p1_pair(space, space, kMass, true);
}

SparseMatrix assemble_stiffness(const FunctionSpace& space) {
  return assemble_p1_pair(space, space, kStiffness, true);
}

Eigen::VectorXd assemble_rhs(const FunctionSpace& space, const CellScalarFn& f, int quad_degree) {
  if (space.kind != SpaceKind::P1)
    throw std::invalid_argument("assemble_rhs: P1 space required");
  const SimplicialMesh& mesh = *space.mesh;
  const int nb = mesh.dim + 1;
  const QuadratureRule rule = quadrature(mesh.dim, quad_degree);

  std::vector<double> shape(static_cast<std::size_t>(rule.size()) * nb);
  for (int q = 0; q < rule.size(); ++q)
    p1_shape_values(mesh.dim, rule.points[q], shape.data() + q * nb);

  std::vector<Eigen::VectorXd> partial;
  partial.resize(detail::n_chunks(mesh.n_cells()));
  detail::for_each_chunk(mesh.n_cells(), [&](int chunk_id, int begin, int end) {
    Eigen::VectorXd local = Eigen::VectorXd::Zero(space.n_free);
    for (int c = begin; c < end; ++c) {
      const AffineMap map(mesh, c);
      for (int q = 0; q < rule.size(); ++q) {
        const Point x = map.map(rule.points[q]);
        const double scale = map.det() * rule.weights[q] * f(c, x);
        for (int i = 0; i < nb; ++i) {
          const int row = space.free_index[mesh.cells[c][i]];
          if (row >= 0) local[row] += scale * shape[q * nb + i];
        }
      }
    }
    partial[chunk_id] = std::move(local);
  });

  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(space.n_free);
  for (const auto& p : partial) rhs += p;
  return rhs;
}

Eigen::VectorXd assemble_rhs(const FunctionSpace& space, const ScalarFn& f, int quad_degree) {
  return assemble_rhs(space, as_cell_fn(f), quad_degree);
}

void BlockSystem::apply(const Eigen::VectorXd& x, Eigen::VectorXd& y) const {
  const int ny = n_y();
  const Eigen::VectorXd p = x.head(ny);
  const Eigen::VectorXd u = x.tail(n_x());
  y.resize(size());

  Eigen::VectorXd tmp;
  upper_left.multiply(p, tmp);
  y.head(ny) = tmp;
  B.multiply(u, tmp);
  y.head(ny) += tmp;

  B.multiply_transpose(p, tmp);
  y.tail(n_x()) = -tmp;
  C.multiply(u, tmp);
  y.tail(n_x()) += tmp;
}

Eigen::VectorXd BlockSystem::diagonal() const {
  Eigen::VectorXd d(size());
  d.head(n_y()) = upper_left.diagonal();
  d.tail(n_x()) = C.diagonal();
  return d;
}

SparseMatrix BlockSystem::monolithic() const {
  std::vector<Triplet> triplets;
  triplets.reserve(upper_left.nnz() + 2 * B.nnz() + C.nnz());
  const int ny = n_y();
  for (int r = 0; r < upper_left.rows; ++r)
    for (int k = upper_left.row_ptr[r]; k < upper_left.row_ptr[r + 1]; ++k)
      triplets.push_back({r, upper_left.col_idx[k], upper_left.values[k]});
  for (int r = 0; r < B.rows; ++r)
    for (int k = B.row_ptr[r]; k < B.row_ptr[r + 1]; ++k) {
      triplets.push_back({r, ny + B.col_idx[k], B.values[k]});
      triplets.push_back({ny + B.col_idx[k], r, -B.values[k]});
    }
  for (int r = 0; r < C.rows; ++r)
    for (int k = C.row_ptr[r]; k < C.row_ptr[r + 1]; ++k)
      triplets.push_back({ny + r, ny + C.col_idx[k], C.values[k]});
  return SparseMatrix::from_triplets(size(), size(), std::move(triplets), false);
}

Eigen::VectorXd BlockSystem::adjoint_part(const Eigen::VectorXd& solution) const {
  return solution.head(n_y());
}

Eigen::VectorXd BlockSystem::state_part(const Eigen::VectorXd& solution) const {
  return solution.tail(n_x());
}

BlockSystem build_block_system(const SimplicialMesh& mesh, double varrho, const CellScalarFn& u_d,
                               Regularization reg, int rhs_quad_degree) {
  if (!(varrho > 0.0)) throw std::invalid_argument("build_block_system: varrho must be positive");
  if (varrho > 1.0)
    std::fprintf(stderr,
                 "warning: varrho = %g > 1; the system stays uniquely solvable but the "
                 "stability bound varrho/16 is not guaranteed\n",
                 varrho);

  BlockSystem sys;
  sys.varrho = varrho;
  sys.regularization = reg;
  sys.Yh = make_space(mesh, SpaceKind::P1, EssentialBC::SigmaOnly);
  sys.X0h = make_space(mesh, SpaceKind::P1, EssentialBC::SigmaAndInitial);

  sys.A = assemble_a(sys.Yh);
  sys.upper_left = (reg == Regularization::Energy ? sys.A : assemble_mass(sys.Yh)).scaled(1.0 / varrho);
  sys.B = assemble_b(sys.X0h, sys.Yh);
  sys.C = assemble_c(sys.X0h);

  sys.rhs = Eigen::VectorXd::Zero(sys.size());
  sys.rhs.tail(sys.n_x()) = assemble_rhs(sys.X0h, u_d, rhs_quad_degree);
  return sys;
}

ForwardSystem assemble_forward(const SimplicialMesh& mesh, const CellScalarFn& z,
                               int rhs_quad_degree) {
  ForwardSystem sys;
  sys.X0h = make_space(mesh, SpaceKind::P1, EssentialBC::SigmaAndInitial);
  sys.B = assemble_p1_pair(sys.X0h, sys.X0h, kStiffness | kTimeDeriv, false);
  sys.rhs = assemble_rhs(sys.X0h, z, rhs_quad_degree);
  return sys;
}

}  // namespace stfem
