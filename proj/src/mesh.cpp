#include "stfem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace stfem {

const char* to_string(BoundaryTag tag) {
  switch (tag) {
    case BoundaryTag::Lateral: return "Lateral";
    case BoundaryTag::Initial: return "Initial";
    case BoundaryTag::Terminal: return "Terminal";
  }
  return "?";
}

namespace {

// Signed volume of the simplex spanned by the given vertex ids: det of the
// edge matrix divided by dim!.
double signed_volume(const std::vector<Point>& verts,
                     const std::array<int, kMaxDim + 1>& cell, int dim) {
  SmallMat jac(dim, dim);
  const Point& v0 = verts[cell[0]];
  for (int j = 0; j < dim; ++j)
    for (int k = 0; k < dim; ++k) jac(k, j) = verts[cell[j + 1]][k] - v0[k];
  double fact = 1.0;
  for (int k = 2; k <= dim; ++k) fact *= k;
  return jac.determinant() / fact;
}

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

}  // namespace

double SimplicialMesh::cell_volume(int c) const {
  return signed_volume(vertices, cells[c], dim);
}

double SimplicialMesh::total_volume() const {
  // Ordered accumulation keeps the result independent of any parallel caller.
  double s = 0.0;
  for (int c = 0; c < n_cells(); ++c) s += cell_volume(c);
  return s;
}

double SimplicialMesh::cell_diameter(int c) const {
  double d = 0.0;
  for (int i = 0; i <= dim; ++i)
    for (int j = i + 1; j <= dim; ++j)
      d = std::max(d, dist(vertices[cells[c][i]], vertices[cells[c][j]], dim));
  return d;
}

Point SimplicialMesh::cell_centroid(int c) const {
  Point p = zero_point();
  for (int i = 0; i <= dim; ++i)
    for (int k = 0; k < dim; ++k) p[k] += vertices[cells[c][i]][k] / (dim + 1);
  return p;
}

int SimplicialMesh::grid_vertex(const std::array<int, kMaxDim>& idx) const {
  int id = 0;
  int stride = 1;
  for (int a = 0; a < dim; ++a) {
    id += idx[a] * stride;
    stride *= (n + 1);
  }
  return id;
}

SimplicialMesh::Location SimplicialMesh::locate(const Point& p) const {
  // Find the grid cube, then the Kuhn simplex from the descending order of
  // the fractional coordinates.
  std::array<int, kMaxDim> cube{};
  std::array<double, kMaxDim> frac{};
  for (int a = 0; a < dim; ++a) {
    const double sp = (a == dim - 1) ? time_spacing() : spacing();
    double x = p[a] / sp;
    int i = static_cast<int>(std::floor(x));
    i = std::clamp(i, 0, n - 1);
    cube[a] = i;
    frac[a] = std::clamp(x - i, 0.0, 1.0);
  }
  std::array<int, kMaxDim> order{};
  std::iota(order.begin(), order.begin() + dim, 0);
  std::stable_sort(order.begin(), order.begin() + dim,
                   [&](int a, int b) { return frac[a] > frac[b]; });

  Location loc;
  loc.vertex_ids.fill(-1);
  loc.barycentric.fill(0.0);
  std::array<int, kMaxDim> idx = cube;
  loc.vertex_ids[0] = grid_vertex(idx);
  loc.barycentric[0] = 1.0 - frac[order[0]];
  for (int k = 0; k < dim; ++k) {
    idx[order[k]] += 1;
    loc.vertex_ids[k + 1] = grid_vertex(idx);
    loc.barycentric[k + 1] =
        (k + 1 < dim) ? frac[order[k]] - frac[order[k + 1]] : frac[order[dim - 1]];
  }
  return loc;
}

SimplicialMesh kuhn_grid(int dim, int n, double final_time) {
  if (dim < 2 || dim > 4) throw std::invalid_argument("kuhn_grid: dim must be in {2,3,4}");
  if (n < 1) throw std::invalid_argument("kuhn_grid: n must be >= 1");
  if (!(final_time > 0.0)) throw std::invalid_argument("kuhn_grid: final time must be positive");

  SimplicialMesh mesh;
  mesh.dim = dim;
  mesh.n = n;
  mesh.level = 0;
  mesh.final_time = final_time;

  const int np = n + 1;
  int n_verts = 1;
  for (int a = 0; a < dim; ++a) n_verts *= np;
  mesh.vertices.resize(n_verts);
  for (int id = 0; id < n_verts; ++id) {
    int rem = id;
    Point p = zero_point();
    for (int a = 0; a < dim; ++a) {
      const int ia = rem % np;
      rem /= np;
      p[a] = (a == dim - 1) ? final_time * ia / n : static_cast<double>(ia) / n;
    }
    mesh.vertices[id] = p;
  }

  // One simplex per (cube, permutation) pair: walk from the base corner of
  // the cube along the axes in permutation order. Odd permutations get their
  // last two vertices swapped to make the orientation positive.
  std::array<int, kMaxDim> perm0{};
  std::iota(perm0.begin(), perm0.begin() + dim, 0);

  int n_cubes = 1;
  for (int a = 0; a < dim; ++a) n_cubes *= n;

  mesh.cells.reserve(static_cast<std::size_t>(n_cubes) * static_cast<std::size_t>(factorial(dim)));
  for (int cube = 0; cube < n_cubes; ++cube) {
    std::array<int, kMaxDim> base{};
    int rem = cube;
    for (int a = 0; a < dim; ++a) {
      base[a] = rem % n;
      rem /= n;
    }
    std::array<int, kMaxDim> perm = perm0;
    do {
      // Permutation parity by counting inversions (dim <= 4, so this is cheap).
      int inversions = 0;
      for (int i = 0; i < dim; ++i)
        for (int j = i + 1; j < dim; ++j)
          if (perm[i] > perm[j]) ++inversions;

      std::array<int, kMaxDim + 1> cell;
      cell.fill(-1);
      std::array<int, kMaxDim> idx = base;
      cell[0] = mesh.grid_vertex(idx);
      for (int k = 0; k < dim; ++k) {
        idx[perm[k]] += 1;
        cell[k + 1] = mesh.grid_vertex(idx);
      }
      if (inversions % 2 == 1) std::swap(cell[dim - 1], cell[dim]);
      mesh.cells.push_back(cell);
    } while (std::next_permutation(perm.begin(), perm.begin() + dim));
  }

  // Every Kuhn simplex contains the cube's main diagonal as an edge, so the
  // diameter is the diagonal length.
  const double hx = mesh.spacing();
  const double ht = mesh.time_spacing();
  mesh.h = std::sqrt((dim - 1) * hx * hx + ht * ht);

  classify_boundary(mesh);
  return mesh;
}

SimplicialMesh refine_uniform(const SimplicialMesh& mesh) {
  SimplicialMesh fine = kuhn_grid(mesh.dim, 2 * mesh.n, mesh.final_time);
  fine.level = mesh.level + 1;
  return fine;
}

void classify_boundary(SimplicialMesh& mesh) {
  const int dim = mesh.dim;

  // Facet keys: sorted vertex ids, padded with -1. Boundary facets are the
  // ones incident to exactly one cell.
  struct FacetEntry {
    std::array<int, kMaxDim> key;
    bool operator<(const FacetEntry& o) const { return key < o.key; }
    bool operator==(const FacetEntry& o) const { return key == o.key; }
  };
  std::vector<FacetEntry> facets;
  facets.reserve(static_cast<std::size_t>(mesh.n_cells()) * (dim + 1));
  for (const auto& cell : mesh.cells) {
    for (int drop = 0; drop <= dim; ++drop) {
      FacetEntry e;
      e.key.fill(-1);
      int m = 0;
      for (int i = 0; i <= dim; ++i)
        if (i != drop) e.key[m++] = cell[i];
      std::sort(e.key.begin(), e.key.begin() + dim);
      facets.push_back(e);
    }
  }
  std::sort(facets.begin(), facets.end());

  const double tol = 1e-10;
  mesh.boundary_facets.clear();
  for (std::size_t i = 0; i < facets.size();) {
    std::size_t j = i + 1;
    while (j < facets.size() && facets[j] == facets[i]) ++j;
    if (j - i == 1) {
      BoundaryFacet bf;
      bf.vertices = facets[i].key;
      Point centroid = zero_point();
      for (int k = 0; k < dim; ++k)
        for (int a = 0; a < dim; ++a) centroid[a] += mesh.vertices[bf.vertices[k]][a] / dim;

      const double t = centroid[dim - 1];
      bool lateral = false;
      for (int a = 0; a < dim - 1; ++a)
        if (std::abs(centroid[a]) < tol || std::abs(centroid[a] - 1.0) < tol) lateral = true;

      if (std::abs(t) < tol)
        bf.tag = BoundaryTag::Initial;
      else if (std::abs(t - mesh.final_time) < tol)
        bf.tag = BoundaryTag::Terminal;
      else if (lateral)
        bf.tag = BoundaryTag::Lateral;
      else
        throw std::runtime_error("classify_boundary: facet centroid on no cylinder surface");
      mesh.boundary_facets.push_back(bf);
    }
    i = j;
  }
}

}  // namespace stfem
