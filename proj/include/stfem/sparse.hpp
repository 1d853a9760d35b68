#ifndef STFEM_SPARSE_HPP
#define STFEM_SPARSE_HPP

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace stfem {

struct Triplet {
  int row;
  int col;
  double value;
};

/// Compressed-sparse-row matrix. Finalized matrices store no explicit zeros.
/// Duplicate triplets are accumulated in insertion order, so assembly results
/// do not depend on how the cell loop was chunked.
class SparseMatrix {
 public:
  int rows = 0;
  int cols = 0;
  bool symmetric = false;
  std::vector<int> row_ptr;
  std::vector<int> col_idx;
  std::vector<double> values;

  static SparseMatrix from_triplets(int rows, int cols, std::vector<Triplet> triplets,
                                    bool symmetric = false);

  std::size_t nnz() const { return values.size(); }

  void multiply(const Eigen::VectorXd& x, Eigen::VectorXd& y) const;          // y = A x
  void multiply_transpose(const Eigen::VectorXd& x, Eigen::VectorXd& y) const;  // y = A^T x
  Eigen::VectorXd operator*(const Eigen::VectorXd& x) const;

  Eigen::VectorXd diagonal() const;
  double max_abs() const;
  /// Max-norm of A - A^T (0 for structurally verified symmetric data).
  double asymmetry() const;

  Eigen::MatrixXd to_dense() const;
  SparseMatrix scaled(double factor) const;
};

/// Coordinate-format Matrix Market export ("%%MatrixMarket matrix coordinate
/// real general", 1-based indices).
void write_matrix_market(const SparseMatrix& m, const std::string& path);

}  // namespace stfem

#endif
