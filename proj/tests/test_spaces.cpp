#include <doctest.h>

#include <cmath>
#include <numbers>

#include "stfem/postprocess.hpp"
#include "stfem/problems.hpp"
#include "stfem/spaces.hpp"
#include "oracles.hpp"

using namespace stfem;

namespace {

// Independent free-node count by coordinate scan.
int count_free_by_coords(const SimplicialMesh& mesh, bool constrain_initial) {
  int free = 0;
  const double tol = 1e-12;
  for (const auto& v : mesh.vertices) {
    bool constrained = false;
    for (int a = 0; a < mesh.dim - 1; ++a)
      if (std::abs(v[a]) < tol || std::abs(v[a] - 1.0) < tol) constrained = true;
    if (constrain_initial && std::abs(v[mesh.dim - 1]) < tol) constrained = true;
    if (!constrained) ++free;
  }
  return free;
}

}  // namespace

TEST_CASE("free dof counts on the coarse 3d mesh") {
  const SimplicialMesh mesh = kuhn_grid(3, 4, 1.0);
  const FunctionSpace Yh = make_space(mesh, SpaceKind::P1, EssentialBC::SigmaOnly);
  const FunctionSpace X0h = make_space(mesh, SpaceKind::P1, EssentialBC::SigmaAndInitial);
  CHECK(Yh.n_free == 45);   // 3x3 interior nodes, 5 time levels
  CHECK(X0h.n_free == 36);  // minus the 9 initial-slice nodes
  CHECK(Yh.n_free == count_free_by_coords(mesh, false));
  CHECK(X0h.n_free == count_free_by_coords(mesh, true));

  const SimplicialMesh m22 = kuhn_grid(2, 2, 1.0);
  CHECK(make_space(m22, SpaceKind::P1, EssentialBC::SigmaOnly).n_free == 3);
}

TEST_CASE("free dofs are densely indexed by ascending vertex id") {
  const SimplicialMesh mesh = kuhn_grid(2, 3, 1.0);
  const FunctionSpace Yh = make_space(mesh, SpaceKind::P1, EssentialBC::SigmaOnly);
  int expected = 0;
  for (int v = 0; v < mesh.n_vertices(); ++v)
    if (!Yh.constrained[v]) CHECK(Yh.free_index[v] == expected++);
  CHECK(expected == Yh.n_free);
}

TEST_CASE("X0h free nodes are contained in the Yh free nodes") {
  for (int dim = 2; dim <= 4; ++dim) {
    const SimplicialMesh mesh = kuhn_grid(dim, 2, 1.0);
    const FunctionSpace Yh = make_space(mesh, SpaceKind::P1, EssentialBC::SigmaOnly);
    const FunctionSpace X0h = make_space(mesh, SpaceKind::P1, EssentialBC::SigmaAndInitial);
    const double tol = 1e-12;
    for (int v = 0; v < mesh.n_vertices(); ++v) {
      if (!X0h.constrained[v]) CHECK(!Yh.constrained[v]);
      // Masks differ exactly by the initial-slice vertex set.
      if (X0h.constrained[v] != Yh.constrained[v]) {
        CHECK(std::abs(mesh.vertices[v][dim - 1]) < tol);
        CHECK(X0h.constrained[v] == 1);
      }
    }
  }
}

TEST_CASE("interpolation basics") {
  const SimplicialMesh mesh = kuhn_grid(3, 4, 1.0);
  const FunctionSpace X0h = make_space(mesh, SpaceKind::P1, EssentialBC::SigmaAndInitial);

  const FEFunction zero = interpolate(X0h, [](const Point&) { return 0.0; }, FieldRole::State);
  CHECK(zero.coeffs.norm() == 0.0);

  auto f = [](const Point& p) {
    return std::sin(std::numbers::pi * p[0]) * std::sin(std::numbers::pi * p[1]) * p[2];
  };
  const FEFunction fe = interpolate(X0h, f, FieldRole::State);
  // Node at (0.5, 0.5, 1.0) carries value 1.
  CHECK(fe.eval(Point{0.5, 0.5, 1.0, 0.0}) == doctest::Approx(1.0).epsilon(1e-14));

  // Round-trip: free vertices reproduce f exactly, constrained nodes are 0.
  for (int v = 0; v < mesh.n_vertices(); ++v) {
    const double expected = X0h.constrained[v] ? 0.0 : f(mesh.vertices[v]);
    CHECK(fe.entity_value(v) == doctest::Approx(expected).epsilon(1e-14));
  }

  CHECK_THROWS_AS(
      interpolate(X0h, [](const Point& p) { return 1.0 / (p[0] - 0.25); }, FieldRole::State),
      std::invalid_argument);
}

TEST_CASE("interpolant converges at first order in the Y norm") {
  const ProblemSpec prob = example1();
  std::vector<double> errors;
  for (int n : {4, 8, 16}) {
    const SimplicialMesh mesh = kuhn_grid(3, n, 1.0);
    const FunctionSpace X0h = make_space(mesh, SpaceKind::P1, EssentialBC::SigmaAndInitial);
    const FEFunction uh = interpolate(X0h, prob.exact_u->value, FieldRole::State);
    errors.push_back(error_norm(uh, *prob.exact_u, ErrorNorm::Y));
  }
  const auto rates = eoc(errors);
  for (std::size_t k = 1; k < rates.size(); ++k) CHECK(rates[k] == doctest::Approx(1.0).epsilon(0.15));
}

TEST_CASE("P0 space indexes cells directly") {
  const SimplicialMesh mesh = kuhn_grid(2, 2, 1.0);
  const FunctionSpace P0 = make_space(mesh, SpaceKind::P0, EssentialBC::None);
  CHECK(P0.n_free == mesh.n_cells());
  FEFunction z(P0, FieldRole::Control);
  z.coeffs[3] = 2.5;
  CHECK(z.entity_value(3) == 2.5);
}
