#ifndef STFEM_FIELD_HPP
#define STFEM_FIELD_HPP

#include <array>
#include <functional>

#include "stfem/geometry.hpp"

namespace stfem {

// Spatial gradient; only the first (dim-1) entries of a space-time point
// are spatial, so 3 components suffice.
using SpatialGrad = std::array<double, 3>;

using ScalarFn = std::function<double(const Point&)>;
using GradFn = std::function<SpatialGrad(const Point&)>;

/// Analytic scalar field on the space-time cylinder with the derivatives
/// needed for error norms and consistency checks. Members may be empty
/// when a quantity is not available (e.g. no Laplacian for targets).
struct ExactScalar {
  ScalarFn value;
  GradFn grad_x;   // spatial gradient
  ScalarFn dt;     // time derivative
  ScalarFn lap_x;  // spatial Laplacian

  bool has_derivatives() const { return static_cast<bool>(grad_x) && static_cast<bool>(dt); }
};

}  // namespace stfem

#endif
