#ifndef STFEM_GEOMETRY_HPP
#define STFEM_GEOMETRY_HPP

#include <array>
#include <cmath>
#include <cstdint>

#include <Eigen/Dense>

namespace stfem {

// Space-time points live in at most 4 dimensions (3 space + time).
// Unused trailing coordinates are kept at zero; the time coordinate is
// always the last used one.
inline constexpr int kMaxDim = 4;

using Point = std::array<double, kMaxDim>;

// Dense matrices/vectors of runtime size <= 4, stack-allocated. ElemMat holds
// per-cell quantities with dim+1 rows/columns (up to 5).
using SmallMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxDim, kMaxDim>;
using SmallVec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxDim, 1>;
using ElemMat =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxDim + 1, kMaxDim + 1>;

inline double dist(const Point& a, const Point& b, int dim) {
  double s = 0.0;
  for (int k = 0; k < dim; ++k) {
    const double d = a[k] - b[k];
    s += d * d;
  }
  return std::sqrt(s);
}

inline Point zero_point() { return Point{0.0, 0.0, 0.0, 0.0}; }

}  // namespace stfem

#endif
