#include "stfem/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <stdexcept>

namespace stfem {

SparseMatrix SparseMatrix::from_triplets(int rows, int cols, std::vector<Triplet> triplets,
                                         bool symmetric) {
  SparseMatrix m;
  m.rows = rows;
  m.cols = cols;
  m.symmetric = symmetric;

  // stable_sort keeps duplicates in insertion order; the accumulation below is
  // then a fixed-order sum, bit-reproducible across runs and thread counts.
  std::stable_sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });

  m.row_ptr.assign(rows + 1, 0);
  std::size_t i = 0;
  while (i < triplets.size()) {
    const int r = triplets[i].row;
    const int c = triplets[i].col;
    double sum = 0.0;
    while (i < triplets.size() && triplets[i].row == r && triplets[i].col == c)
      sum += triplets[i++].value;
    if (sum != 0.0) {
      m.col_idx.push_back(c);
      m.values.push_back(sum);
      ++m.row_ptr[r + 1];
    }
  }
  for (int r = 0; r < rows; ++r) m.row_ptr[r + 1] += m.row_ptr[r];
  return m;
}

void SparseMatrix::multiply(const Eigen::VectorXd& x, Eigen::VectorXd& y) const {
  y.setZero(rows);
  for (int r = 0; r < rows; ++r) {
    double s = 0.0;
    for (int k = row_ptr[r]; k < row_ptr[r + 1]; ++k) s += values[k] * x[col_idx[k]];
    y[r] = s;
  }
}

void SparseMatrix::multiply_transpose(const Eigen::VectorXd& x, Eigen::VectorXd& y) const {
  y.setZero(cols);
  for (int r = 0; r < rows; ++r)
    for (int k = row_ptr[r]; k < row_ptr[r + 1]; ++k) y[col_idx[k]] += values[k] * x[r];
}

Eigen::VectorXd SparseMatrix::operator*(const Eigen::VectorXd& x) const {
  Eigen::VectorXd y;
  multiply(x, y);
  return y;
}

Eigen::VectorXd SparseMatrix::diagonal() const {
  Eigen::VectorXd d = Eigen::VectorXd::Zero(std::min(rows, cols));
  for (int r = 0; r < std::min(rows, cols); ++r)
    for (int k = row_ptr[r]; k < row_ptr[r + 1]; ++k)
      if (col_idx[k] == r) d[r] = values[k];
  return d;
}

double SparseMatrix::max_abs() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

double SparseMatrix::asymmetry() const {
  if (rows != cols) throw std::invalid_argument("asymmetry: matrix not square");
  std::map<std::pair<int, int>, double> entries;
  for (int r = 0; r < rows; ++r)
    for (int k = row_ptr[r]; k < row_ptr[r + 1]; ++k) entries[{r, col_idx[k]}] = values[k];
  double worst = 0.0;
  for (const auto& [key, v] : entries) {
    auto it = entries.find({key.second, key.first});
    const double vt = it == entries.end() ? 0.0 : it->second;
    worst = std::max(worst, std::abs(v - vt));
  }
  return worst;
}

Eigen::MatrixXd SparseMatrix::to_dense() const {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int k = row_ptr[r]; k < row_ptr[r + 1]; ++k) d(r, col_idx[k]) = values[k];
  return d;
}

SparseMatrix SparseMatrix::scaled(double factor) const {
  SparseMatrix m = *this;
  for (double& v : m.values) v *= factor;
  return m;
}

void write_matrix_market(const SparseMatrix& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_matrix_market: cannot open " + path);
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << m.rows << " " << m.cols << " " << m.nnz() << "\n";
  char buf[64];
  for (int r = 0; r < m.rows; ++r)
    for (int k = m.row_ptr[r]; k < m.row_ptr[r + 1]; ++k) {
      std::snprintf(buf, sizeof buf, "%d %d %.16e\n", r + 1, m.col_idx[k] + 1, m.values[k]);
      out << buf;
    }
}

}  // namespace stfem
