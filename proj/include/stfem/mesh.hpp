#ifndef STFEM_MESH_HPP
#define STFEM_MESH_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "stfem/geometry.hpp"

namespace stfem {

/// Classification of a boundary facet of the space-time cylinder
/// Q = (0,1)^(dim-1) x (0,T): the lateral mantle, the initial slice t=0,
/// and the terminal slice t=T.
enum class BoundaryTag : std::uint8_t { Lateral = 0, Initial = 1, Terminal = 2 };

const char* to_string(BoundaryTag tag);

struct BoundaryFacet {
  std::array<int, kMaxDim> vertices;  // dim entries used, rest -1
  BoundaryTag tag;
};

/// Conforming simplicial mesh of the space-time cylinder, generated as the
/// Kuhn (Freudenthal) triangulation of a structured n^dim grid. Cells are
/// stored with positive orientation. The time axis is the last coordinate.
///
/// Immutable after construction; refinement regenerates the structured mesh
/// at doubled resolution, which keeps the vertex sets nested.
class SimplicialMesh {
 public:
  int dim = 0;         // d+1: spatial dimension plus time, in {2,3,4}
  int n = 0;           // subdivisions per axis
  int level = 0;       // refinement level, 0 for the initial grid
  double final_time = 1.0;
  double h = 0.0;      // characteristic mesh size: max cell diameter

  std::vector<Point> vertices;
  std::vector<std::array<int, kMaxDim + 1>> cells;  // dim+1 entries used, rest -1
  std::vector<BoundaryFacet> boundary_facets;

  int n_vertices() const { return static_cast<int>(vertices.size()); }
  int n_cells() const { return static_cast<int>(cells.size()); }

  /// Grid pitch 1/n; the mesh-size label used in study tables.
  double spacing() const { return 1.0 / n; }
  double time_spacing() const { return final_time / n; }

  /// Signed volume of cell c (positive for all cells by construction).
  double cell_volume(int c) const;
  /// Sum of all cell volumes.
  double total_volume() const;
  /// Largest vertex-to-vertex distance within cell c.
  double cell_diameter(int c) const;
  Point cell_centroid(int c) const;

  /// Containing cell and barycentric coordinates for a point of Q
  /// (clamped to the closed cylinder). Uses the structured layout, so it
  /// costs O(dim log dim).
  struct Location {
    std::array<int, kMaxDim + 1> vertex_ids;
    std::array<double, kMaxDim + 1> barycentric;
  };
  Location locate(const Point& p) const;

  /// Lexicographic vertex id of the grid point with the given per-axis indices.
  int grid_vertex(const std::array<int, kMaxDim>& idx) const;
};

/// Kuhn/Freudenthal triangulation of (0,1)^(dim-1) x (0,T) with n
/// subdivisions per axis: (n+1)^dim vertices and n^dim * dim! simplices.
/// Boundary facets are classified on return.
SimplicialMesh kuhn_grid(int dim, int n, double final_time);

/// Structured uniform refinement: the same grid family at 2n subdivisions,
/// level incremented. Vertex sets are nested.
SimplicialMesh refine_uniform(const SimplicialMesh& mesh);

/// Recompute boundary facets (by facet-incidence counting) and their tags.
/// Throws if some boundary facet centroid lies on none of the three
/// cylinder surfaces within tolerance 1e-10.
void classify_boundary(SimplicialMesh& mesh);

}  // namespace stfem

#endif
