#ifndef STFEM_REFELEM_HPP
#define STFEM_REFELEM_HPP

#include <vector>

#include "stfem/geometry.hpp"
#include "stfem/mesh.hpp"

namespace stfem {

/// Affine map x = origin + J*xi from the reference simplex
/// {xi >= 0, sum xi <= 1} onto a mesh cell. P1 gradients are constant per
/// cell and obtained from the transposed inverse Jacobian.
class AffineMap {
 public:
  AffineMap(const SimplicialMesh& mesh, int cell);

  int dim() const { return dim_; }
  double det() const { return det_; }
  double volume() const { return volume_; }
  const SmallMat& jacobian() const { return jacobian_; }
  const SmallMat& inv_jacobian_T() const { return inv_jacobian_T_; }
  const Point& origin() const { return origin_; }

  Point map(const SmallVec& ref) const;

  /// Physical gradient of shape function i (column i of the gradient table).
  const ElemMat& shape_gradients() const { return grads_; }

 private:
  int dim_;
  Point origin_;
  SmallMat jacobian_;
  SmallMat inv_jacobian_T_;
  ElemMat grads_;  // dim x (dim+1)
  double det_;
  double volume_;
};

struct ElementMatrices {
  // (dim+1) x (dim+1) each
  ElemMat stiffness_x;  // int grad_x phi_j . grad_x phi_i
  ElemMat timederiv;    // int dt phi_j phi_i
  ElemMat mass;         // int phi_j phi_i
};

/// Closed-form P1 element matrices for a nondegenerate cell. Rejects cells
/// with |det| < 1e-14 * diameter^dim.
ElementMatrices p1_element_matrices(const AffineMap& map, double cell_diameter);

/// Quadrature on the reference simplex. Points are reference coordinates;
/// weights are positive and sum to the reference volume 1/dim!.
struct QuadratureRule {
  int dim = 0;
  int degree = 0;
  std::vector<SmallVec> points;
  std::vector<double> weights;

  int size() const { return static_cast<int>(points.size()); }
};

/// Rule exact for polynomials up to `degree` on the reference simplex,
/// dim in {2,3,4}, degree in {1..6}. Compact tabulated rules where available,
/// otherwise a Gauss-Jacobi conical product.
QuadratureRule quadrature(int dim, int degree);

/// Values of the dim+1 P1 shape functions at a reference point.
void p1_shape_values(int dim, const SmallVec& ref, double* values);

}  // namespace stfem

#endif
