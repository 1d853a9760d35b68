#ifndef STFEM_SPACES_HPP
#define STFEM_SPACES_HPP

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "stfem/field.hpp"
#include "stfem/mesh.hpp"

namespace stfem {

enum class SpaceKind { P1, P0 };

/// Essential boundary condition sets for P1 spaces on the cylinder:
/// SigmaAndInitial pins Sigma and the initial slice (trial space for the
/// state), SigmaOnly pins only the lateral mantle (test/adjoint space).
enum class EssentialBC { SigmaAndInitial, SigmaOnly, None };

/// Degree-of-freedom map over mesh vertices (P1) or cells (P0), with an
/// essential-constraint mask. Constrained nodes carry no dof; free dofs are
/// densely indexed by ascending vertex index.
class FunctionSpace {
 public:
  SpaceKind kind = SpaceKind::P1;
  EssentialBC bc = EssentialBC::None;
  const SimplicialMesh* mesh = nullptr;
  std::vector<char> constrained;  // per vertex (P1); empty for P0
  std::vector<int> free_index;    // vertex/cell -> dense index, -1 if constrained
  int n_free = 0;

  int n_entities() const { return static_cast<int>(free_index.size()); }
  bool is_constrained(int entity) const {
    return kind == SpaceKind::P1 && constrained[entity] != 0;
  }
};

FunctionSpace make_space(const SimplicialMesh& mesh, SpaceKind kind, EssentialBC bc);

enum class FieldRole { State, Adjoint, Control, Auxiliary, TargetProjection };

const char* to_string(FieldRole role);

/// Coefficient vector over the free dofs of a space. Evaluation at
/// constrained nodes returns 0.
class FEFunction {
 public:
  FEFunction() = default;
  FEFunction(const FunctionSpace& space, FieldRole role);

  const FunctionSpace* space = nullptr;
  FieldRole role = FieldRole::Auxiliary;
  Eigen::VectorXd coeffs;

  /// Nodal (P1) or cell (P0) value including constrained zeros.
  double entity_value(int entity) const;

  /// Point evaluation through the structured mesh locator.
  double eval(const Point& p) const;
};

/// Nodal interpolation onto the free dofs; constrained nodes are forced to 0.
/// Throws if f is not finite at some free node.
FEFunction interpolate(const FunctionSpace& space, const ScalarFn& f, FieldRole role);

/// Re-express a P1 function on another P1 space over the same mesh by copying
/// vertex values (entries constrained in the target become 0).
FEFunction transfer_p1(const FEFunction& f, const FunctionSpace& target);

}  // namespace stfem

#endif
