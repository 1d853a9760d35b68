#include "stfem/refelem.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace stfem {

AffineMap::AffineMap(const SimplicialMesh& mesh, int cell) : dim_(mesh.dim) {
  const auto& c = mesh.cells[cell];
  origin_ = mesh.vertices[c[0]];
  jacobian_.resize(dim_, dim_);
  for (int j = 0; j < dim_; ++j)
    for (int k = 0; k < dim_; ++k)
      jacobian_(k, j) = mesh.vertices[c[j + 1]][k] - origin_[k];
  det_ = jacobian_.determinant();
  double fact = 1.0;
  for (int k = 2; k <= dim_; ++k) fact *= k;
  volume_ = det_ / fact;
  inv_jacobian_T_ = jacobian_.inverse().transpose();

  // Reference gradients: phi_0 has -1 in every component, phi_i is e_i.
  grads_.resize(dim_, dim_ + 1);
  for (int k = 0; k < dim_; ++k) {
    double row_sum = 0.0;
    for (int j = 1; j <= dim_; ++j) {
      grads_(k, j) = inv_jacobian_T_(k, j - 1);
      row_sum += grads_(k, j);
    }
    grads_(k, 0) = -row_sum;
  }
}

Point AffineMap::map(const SmallVec& ref) const {
  Point p = origin_;
  for (int k = 0; k < dim_; ++k)
    for (int j = 0; j < dim_; ++j) p[k] += jacobian_(k, j) * ref[j];
  return p;
}

ElementMatrices p1_element_matrices(const AffineMap& map, double cell_diameter) {
  const int dim = map.dim();
  if (std::abs(map.det()) < 1e-14 * std::pow(cell_diameter, dim))
    throw std::invalid_argument("p1_element_matrices: degenerate cell");

  const int nb = dim + 1;
  const double vol = map.volume();
  const auto& g = map.shape_gradients();

  ElementMatrices em;
  em.stiffness_x.resize(nb, nb);
  em.timederiv.resize(nb, nb);
  em.mass.resize(nb, nb);

  for (int i = 0; i < nb; ++i) {
    for (int j = 0; j < nb; ++j) {
      double sx = 0.0;
      for (int k = 0; k < dim - 1; ++k) sx += g(k, i) * g(k, j);  // spatial axes only
      em.stiffness_x(i, j) = vol * sx;
      em.timederiv(i, j) = vol / nb * g(dim - 1, j);  // dt phi_j is constant
      em.mass(i, j) = vol * (i == j ? 2.0 : 1.0) / (nb * (nb + 1));
    }
  }
  return em;
}

void p1_shape_values(int dim, const SmallVec& ref, double* values) {
  double s = 0.0;
  for (int k = 0; k < dim; ++k) {
    values[k + 1] = ref[k];
    s += ref[k];
  }
  values[0] = 1.0 - s;
}

namespace {

// Gauss-Jacobi rule with q points for int_0^1 f(s) (1-s)^alpha ds,
// by Golub-Welsch on the monic Jacobi recurrence (beta = 0).
void gauss_jacobi_01(int q, int alpha, std::vector<double>& nodes, std::vector<double>& weights) {
  const double a = alpha;
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(q, q);
  for (int k = 0; k < q; ++k) {
    double diag;
    if (k == 0)
      diag = -a / (a + 2.0);
    else
      diag = -a * a / ((2.0 * k + a) * (2.0 * k + a + 2.0));
    T(k, k) = diag;
    if (k >= 1) {
      double b;
      if (k == 1)
        b = 4.0 * (1.0 + a) / ((2.0 + a) * (2.0 + a) * (3.0 + a));
      else
        b = 4.0 * k * k * (k + a) * (k + a) /
            ((2.0 * k + a) * (2.0 * k + a) * (2.0 * k + a + 1.0) * (2.0 * k + a - 1.0));
      T(k, k - 1) = T(k - 1, k) = std::sqrt(b);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
  const double mu0 = std::pow(2.0, a + 1.0) / (a + 1.0);  // int_{-1}^{1} (1-x)^alpha dx

  nodes.resize(q);
  weights.resize(q);
  for (int j = 0; j < q; ++j) {
    const double x = es.eigenvalues()[j];
    const double w = mu0 * es.eigenvectors()(0, j) * es.eigenvectors()(0, j);
    nodes[j] = 0.5 * (1.0 + x);
    weights[j] = w / std::pow(2.0, a + 1.0);
  }
}

// Conical product: collapse the simplex to the unit cube, one Gauss-Jacobi
// rule per axis with the Jacobian power as weight function. All weights
// positive; exact to degree 2q-1.
QuadratureRule conical_product(int dim, int degree) {
  const int q = (degree + 2) / 2;  // ceil((degree+1)/2)
  std::vector<std::vector<double>> nodes(dim), weights(dim);
  for (int k = 0; k < dim; ++k) gauss_jacobi_01(q, dim - 1 - k, nodes[k], weights[k]);

  QuadratureRule rule;
  rule.dim = dim;
  rule.degree = degree;
  std::vector<int> j(dim, 0);
  while (true) {
    SmallVec p(dim);
    double w = 1.0;
    double remaining = 1.0;
    for (int k = 0; k < dim; ++k) {
      p[k] = nodes[k][j[k]] * remaining;
      remaining -= p[k];
      w *= weights[k][j[k]];
    }
    rule.points.push_back(p);
    rule.weights.push_back(w);

    int k = 0;
    while (k < dim && ++j[k] == q) j[k++] = 0;
    if (k == dim) break;
  }
  return rule;
}

QuadratureRule centroid_rule(int dim) {
  QuadratureRule rule;
  rule.dim = dim;
  rule.degree = 1;
  SmallVec p(dim);
  p.setConstant(1.0 / (dim + 1));
  double fact = 1.0;
  for (int k = 2; k <= dim; ++k) fact *= k;
  rule.points.push_back(p);
  rule.weights.push_back(1.0 / fact);
  return rule;
}

QuadratureRule triangle_deg2() {
  // Classic 3-point interior rule, weights 1/6 each.
  QuadratureRule rule;
  rule.dim = 2;
  rule.degree = 2;
  const double pts[3][2] = {{1.0 / 6, 1.0 / 6}, {2.0 / 3, 1.0 / 6}, {1.0 / 6, 2.0 / 3}};
  for (const auto& pt : pts) {
    SmallVec p(2);
    p << pt[0], pt[1];
    rule.points.push_back(p);
    rule.weights.push_back(1.0 / 6);
  }
  return rule;
}

QuadratureRule tet_deg2() {
  // 4-point rule at (a,b,b) permutations, weights 1/24 each.
  QuadratureRule rule;
  rule.dim = 3;
  rule.degree = 2;
  const double a = 0.5854101966249684;  // (5 + 3 sqrt5)/20
  const double b = 0.1381966011250105;  // (5 - sqrt5)/20
  for (int apex = 0; apex < 4; ++apex) {
    SmallVec p(3);
    for (int k = 0; k < 3; ++k) p[k] = (k + 1 == apex) ? a : b;
    rule.points.push_back(p);
    rule.weights.push_back(1.0 / 24);
  }
  return rule;
}

}  // namespace

QuadratureRule quadrature(int dim, int degree) {
  if (dim < 2 || dim > 4) throw std::invalid_argument("quadrature: dim must be in {2,3,4}");
  if (degree < 1 || degree > 6) throw std::invalid_argument("quadrature: degree must be in {1..6}");
  if (degree == 1) return centroid_rule(dim);
  if (dim == 2 && degree == 2) return triangle_deg2();
  if (dim == 3 && degree == 2) return tet_deg2();
  return conical_product(dim, degree);
}

}  // namespace stfem
