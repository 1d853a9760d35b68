#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace oracle {

double monomial_integral(int dim, const std::vector<int>& exponents) {
  auto fact = [](int k) {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
  };
  double num = 1.0;
  int total = dim;
  for (int a : exponents) {
    num *= fact(a);
    total += a;
  }
  return num / fact(total);
}

void gauss_legendre_01(int q, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.resize(q);
  weights.resize(q);
  for (int i = 0; i < q; ++i) {
    // Chebyshev initial guess on [-1,1], Newton on P_q.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (q + 0.5));
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= q; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double dp = q * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= q; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    const double dp = q * (x * p1 - p0) / (x * x - 1.0);
    nodes[i] = 0.5 * (1.0 - x);  // descending cos -> nodes already ascending on [0,1]
    weights[i] = 1.0 / ((1.0 - x * x) * dp * dp);
  }
}

double integrate_ref_simplex(int dim, int q,
                             const std::function<double(const stfem::SmallVec&)>& f) {
  std::vector<double> nodes, weights;
  gauss_legendre_01(q, nodes, weights);

  std::vector<int> j(dim, 0);
  double total = 0.0;
  while (true) {
    // Duffy collapse x_k = s_k * prod_{i<k} (1 - s_i); the Jacobian
    // determinant is the product of the "remaining" factors.
    stfem::SmallVec x(dim);
    double w = 1.0;
    double remaining = 1.0;
    for (int k = 0; k < dim; ++k) {
      const double s = nodes[j[k]];
      x[k] = s * remaining;
      w *= weights[j[k]] * remaining;
      remaining *= (1.0 - s);
    }
    total += w * f(x);

    int k = 0;
    while (k < dim && ++j[k] == q) j[k++] = 0;
    if (k == dim) break;
  }
  return total;
}

double integrate_cell(const stfem::SimplicialMesh& mesh, int cell, int q,
                      const std::function<double(const Point&)>& f) {
  const int dim = mesh.dim;
  const auto& c = mesh.cells[cell];
  const Point v0 = mesh.vertices[c[0]];
  Eigen::MatrixXd jac(dim, dim);
  for (int col = 0; col < dim; ++col)
    for (int row = 0; row < dim; ++row)
      jac(row, col) = mesh.vertices[c[col + 1]][row] - v0[row];
  const double det = jac.determinant();

  return std::abs(det) * integrate_ref_simplex(dim, q, [&](const stfem::SmallVec& ref) {
    Point x = v0;
    for (int row = 0; row < dim; ++row)
      for (int col = 0; col < dim; ++col) x[row] += jac(row, col) * ref[col];
    return f(x);
  });
}

double integrate_mesh(const stfem::SimplicialMesh& mesh, int q,
                      const std::function<double(const Point&)>& f) {
  double s = 0.0;
  for (int c = 0; c < mesh.n_cells(); ++c) s += integrate_cell(mesh, c, q, f);
  return s;
}

std::vector<double> p1_values(int dim, const stfem::SmallVec& ref) {
  std::vector<double> v(dim + 1);
  double s = 0.0;
  for (int k = 0; k < dim; ++k) {
    v[k + 1] = ref[k];
    s += ref[k];
  }
  v[0] = 1.0 - s;
  return v;
}

Eigen::MatrixXd p1_gradients(const stfem::SimplicialMesh& mesh, int cell) {
  const int dim = mesh.dim;
  const auto& c = mesh.cells[cell];
  const Point v0 = mesh.vertices[c[0]];
  Eigen::MatrixXd jac(dim, dim);
  for (int col = 0; col < dim; ++col)
    for (int row = 0; row < dim; ++row)
      jac(row, col) = mesh.vertices[c[col + 1]][row] - v0[row];

  Eigen::MatrixXd ghat = Eigen::MatrixXd::Zero(dim, dim + 1);
  for (int k = 0; k < dim; ++k) {
    ghat(k, 0) = -1.0;
    ghat(k, k + 1) = 1.0;
  }
  // grad phi = J^{-T} ghat, via an LU solve rather than the library inverse.
  return jac.transpose().partialPivLu().solve(ghat);
}

std::map<int, int> facet_incidence(const stfem::SimplicialMesh& mesh) {
  std::map<std::vector<int>, int> counts;
  for (const auto& cell : mesh.cells) {
    for (int drop = 0; drop <= mesh.dim; ++drop) {
      std::vector<int> key;
      for (int i = 0; i <= mesh.dim; ++i)
        if (i != drop) key.push_back(cell[i]);
      std::sort(key.begin(), key.end());
      counts[key] += 1;
    }
  }
  std::map<int, int> histogram;
  for (const auto& [key, c] : counts) histogram[c] += 1;
  return histogram;
}

int count_boundary_facets(const stfem::SimplicialMesh& mesh) {
  auto hist = facet_incidence(mesh);
  return hist.count(1) ? hist.at(1) : 0;
}

double gen_min_singular_value(const Eigen::MatrixXd& K, const Eigen::MatrixXd& N_test,
                              const Eigen::MatrixXd& N_trial) {
  const Eigen::MatrixXd Lt = N_test.llt().matrixL();
  const Eigen::MatrixXd Lr = N_trial.llt().matrixL();
  Eigen::MatrixXd M = Lt.triangularView<Eigen::Lower>().solve(K);
  M = Lr.triangularView<Eigen::Lower>().solve(M.transpose()).transpose();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
  return svd.singularValues().minCoeff();
}

double min_symmetric_eigenvalue(const Eigen::MatrixXd& K) {
  const Eigen::MatrixXd S = 0.5 * (K + K.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
  return es.eigenvalues().minCoeff();
}

double sin_product_objective(int d, double varrho) {
  const double pi2 = std::numbers::pi * std::numbers::pi;
  const double den = d * pi2 + 2.0;
  const double a = -(d * d * pi2 * pi2 + d * pi2) / den;
  const double b = (d * d * pi2 * pi2 - 2.0) / den;

  // int_0^1 (A t^2 + B t + C)^2 dt.
  auto quad_sq_int = [](double A, double B, double C) {
    return A * A / 5.0 + A * B / 2.0 + (B * B + 2.0 * A * C) / 3.0 + B * C + C * C;
  };
  const double int_g2 = quad_sq_int(a, b, 1.0);
  // r(t) = (2 a t + b) - d pi^2 g(t).
  const double int_r2 = quad_sq_int(-d * pi2 * a, 2.0 * a - d * pi2 * b, b - d * pi2);

  const double spatial = std::pow(0.5, d);  // int_Omega S^2
  return 0.5 * spatial * varrho * varrho * int_r2 +
         0.5 * varrho * d * pi2 * spatial * int_g2;
}

}  // namespace oracle
