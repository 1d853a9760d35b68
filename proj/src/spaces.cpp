#include "stfem/spaces.hpp"

#include <cmath>
#include <stdexcept>

namespace stfem {

const char* to_string(FieldRole role) {
  switch (role) {
    case FieldRole::State: return "state";
    case FieldRole::Adjoint: return "adjoint";
    case FieldRole::Control: return "control";
    case FieldRole::Auxiliary: return "auxiliary";
    case FieldRole::TargetProjection: return "target-projection";
  }
  return "?";
}

FunctionSpace make_space(const SimplicialMesh& mesh, SpaceKind kind, EssentialBC bc) {
  FunctionSpace space;
  space.kind = kind;
  space.bc = bc;
  space.mesh = &mesh;

  if (kind == SpaceKind::P0) {
    space.free_index.resize(mesh.n_cells());
    for (int c = 0; c < mesh.n_cells(); ++c) space.free_index[c] = c;
    space.n_free = mesh.n_cells();
    return space;
  }

  // Vertex sets come from the facet tags, not from coordinates.
  std::vector<char> on_sigma(mesh.n_vertices(), 0), on_initial(mesh.n_vertices(), 0);
  for (const auto& bf : mesh.boundary_facets) {
    for (int k = 0; k < mesh.dim; ++k) {
      const int v = bf.vertices[k];
      if (bf.tag == BoundaryTag::Lateral) on_sigma[v] = 1;
      if (bf.tag == BoundaryTag::Initial) on_initial[v] = 1;
    }
  }

  space.constrained.assign(mesh.n_vertices(), 0);
  for (int v = 0; v < mesh.n_vertices(); ++v) {
    switch (bc) {
      case EssentialBC::SigmaAndInitial:
        space.constrained[v] = on_sigma[v] || on_initial[v];
        break;
      case EssentialBC::SigmaOnly:
        space.constrained[v] = on_sigma[v];
        break;
      case EssentialBC::None:
        space.constrained[v] = 0;
        break;
    }
  }

  space.free_index.assign(mesh.n_vertices(), -1);
  int next = 0;
  for (int v = 0; v < mesh.n_vertices(); ++v)
    if (!space.constrained[v]) space.free_index[v] = next++;
  space.n_free = next;
  return space;
}

FEFunction::FEFunction(const FunctionSpace& s, FieldRole r) : space(&s), role(r) {
  coeffs = Eigen::VectorXd::Zero(s.n_free);
}

double FEFunction::entity_value(int entity) const {
  const int idx = space->free_index[entity];
  return idx < 0 ? 0.0 : coeffs[idx];
}

double FEFunction::eval(const Point& p) const {
  if (space->kind == SpaceKind::P0)
    throw std::logic_error("FEFunction::eval: point evaluation is for P1 fields");
  const SimplicialMesh& mesh = *space->mesh;
  const auto loc = mesh.locate(p);
  double value = 0.0;
  for (int k = 0; k <= mesh.dim; ++k)
    value += loc.barycentric[k] * entity_value(loc.vertex_ids[k]);
  return value;
}

FEFunction interpolate(const FunctionSpace& space, const ScalarFn& f, FieldRole role) {
  if (space.kind != SpaceKind::P1)
    throw std::invalid_argument("interpolate: nodal interpolation needs a P1 space");
  FEFunction fe(space, role);
  const SimplicialMesh& mesh = *space.mesh;
  for (int v = 0; v < mesh.n_vertices(); ++v) {
    const int idx = space.free_index[v];
    if (idx < 0) continue;
    const double value = f(mesh.vertices[v]);
    if (!std::isfinite(value)) throw std::invalid_argument("interpolate: non-finite value at node");
    fe.coeffs[idx] = value;
  }
  return fe;
}

FEFunction transfer_p1(const FEFunction& f, const FunctionSpace& target) {
  if (f.space->kind != SpaceKind::P1 || target.kind != SpaceKind::P1 ||
      f.space->mesh != target.mesh)
    throw std::invalid_argument("transfer_p1: spaces must be P1 on the same mesh");
  FEFunction out(target, f.role);
  for (int v = 0; v < target.n_entities(); ++v) {
    const int idx = target.free_index[v];
    if (idx >= 0) out.coeffs[idx] = f.entity_value(v);
  }
  return out;
}

}  // namespace stfem
