#include "stfem/io.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace stfem {

namespace {

void check_exportable(const SimplicialMesh& mesh) {
  if (mesh.dim == 4)
    throw std::invalid_argument(
        "VTK volume export: no cell type for 4-simplices; use slice export");
}

std::ofstream open_vtk(const std::string& path, const std::string& title) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("vtk export: cannot open " + path);
  out << "# vtk DataFile Version 3.0\n" << title << "\nASCII\n";
  return out;
}

void write_points(std::ofstream& out, const SimplicialMesh& mesh) {
  out << "POINTS " << mesh.n_vertices() << " double\n";
  char buf[96];
  for (const auto& v : mesh.vertices) {
    std::snprintf(buf, sizeof buf, "%.12g %.12g %.12g\n", v[0], v[1],
                  mesh.dim >= 3 ? v[2] : 0.0);
    out << buf;
  }
}

void write_cells(std::ofstream& out, const SimplicialMesh& mesh) {
  const int nb = mesh.dim + 1;
  out << "CELLS " << mesh.n_cells() << " " << mesh.n_cells() * (nb + 1) << "\n";
  for (const auto& c : mesh.cells) {
    out << nb;
    for (int i = 0; i < nb; ++i) out << " " << c[i];
    out << "\n";
  }
  const int vtk_type = mesh.dim == 2 ? 5 : 10;  // triangle / tetra
  out << "CELL_TYPES " << mesh.n_cells() << "\n";
  for (int c = 0; c < mesh.n_cells(); ++c) out << vtk_type << "\n";
}

}  // namespace

void write_vtk_mesh(const SimplicialMesh& mesh, const std::string& path) {
  check_exportable(mesh);
  auto out = open_vtk(path, "space-time mesh");
  out << "DATASET UNSTRUCTURED_GRID\n";
  write_points(out, mesh);
  write_cells(out, mesh);
}

void write_vtk_boundary(const SimplicialMesh& mesh, const std::string& path) {
  check_exportable(mesh);
  auto out = open_vtk(path, "space-time mesh boundary");
  out << "DATASET UNSTRUCTURED_GRID\n";
  write_points(out, mesh);

  const int nf = static_cast<int>(mesh.boundary_facets.size());
  const int nb = mesh.dim;  // facet vertex count
  out << "CELLS " << nf << " " << nf * (nb + 1) << "\n";
  for (const auto& f : mesh.boundary_facets) {
    out << nb;
    for (int i = 0; i < nb; ++i) out << " " << f.vertices[i];
    out << "\n";
  }
  const int vtk_type = mesh.dim == 2 ? 3 : 5;  // line / triangle
  out << "CELL_TYPES " << nf << "\n";
  for (int i = 0; i < nf; ++i) out << vtk_type << "\n";
  out << "CELL_DATA " << nf << "\nSCALARS boundary_tag int 1\nLOOKUP_TABLE default\n";
  for (const auto& f : mesh.boundary_facets) out << static_cast<int>(f.tag) << "\n";
}

void write_vtk_point_field(const FEFunction& f, const std::string& name,
                           const std::string& path) {
  const SimplicialMesh& mesh = *f.space->mesh;
  check_exportable(mesh);
  if (f.space->kind != SpaceKind::P1)
    throw std::invalid_argument("write_vtk_point_field: P1 field required");
  auto out = open_vtk(path, name);
  out << "DATASET UNSTRUCTURED_GRID\n";
  write_points(out, mesh);
  write_cells(out, mesh);
  out << "POINT_DATA " << mesh.n_vertices() << "\nSCALARS " << name
      << " double 1\nLOOKUP_TABLE default\n";
  char buf[40];
  for (int v = 0; v < mesh.n_vertices(); ++v) {
    std::snprintf(buf, sizeof buf, "%.9g\n", f.entity_value(v));
    out << buf;
  }
}

void write_vtk_cell_field(const FEFunction& f, const std::string& name, const std::string& path) {
  const SimplicialMesh& mesh = *f.space->mesh;
  check_exportable(mesh);
  if (f.space->kind != SpaceKind::P0)
    throw std::invalid_argument("write_vtk_cell_field: P0 field required");
  auto out = open_vtk(path, name);
  out << "DATASET UNSTRUCTURED_GRID\n";
  write_points(out, mesh);
  write_cells(out, mesh);
  out << "CELL_DATA " << mesh.n_cells() << "\nSCALARS " << name
      << " double 1\nLOOKUP_TABLE default\n";
  char buf[40];
  for (int c = 0; c < mesh.n_cells(); ++c) {
    std::snprintf(buf, sizeof buf, "%.9g\n", f.entity_value(c));
    out << buf;
  }
}

void write_vtk_slice(const FEFunction& f, int axis, double value, int samples_per_axis,
                     const std::string& name, const std::string& path) {
  const SimplicialMesh& mesh = *f.space->mesh;
  if (f.space->kind != SpaceKind::P1)
    throw std::invalid_argument("write_vtk_slice: P1 field required");
  if (axis < 0 || axis >= mesh.dim) throw std::invalid_argument("write_vtk_slice: bad axis");
  const int m = samples_per_axis;
  if (m < 1) throw std::invalid_argument("write_vtk_slice: need at least 1 sample interval");

  // Raster over the remaining axes in ascending order.
  std::vector<int> free_axes;
  for (int a = 0; a < mesh.dim; ++a)
    if (a != axis) free_axes.push_back(a);
  const int k = static_cast<int>(free_axes.size());

  auto out = open_vtk(path, name + " slice");
  out << "DATASET STRUCTURED_POINTS\n";
  const int nx = m + 1;
  out << "DIMENSIONS " << nx << " " << (k >= 2 ? nx : 1) << " " << (k >= 3 ? nx : 1) << "\n";
  out << "ORIGIN 0 0 0\n";
  const double sp = 1.0 / m;
  out << "SPACING " << sp << " " << sp << " " << sp << "\n";

  int npts = nx;
  for (int i = 1; i < k; ++i) npts *= nx;
  out << "POINT_DATA " << npts << "\nSCALARS " << name << " double 1\nLOOKUP_TABLE default\n";

  std::vector<int> idx(k, 0);
  char buf[40];
  for (int count = 0; count < npts; ++count) {
    Point p = zero_point();
    p[axis] = value;
    for (int i = 0; i < k; ++i) {
      const double extent = (free_axes[i] == mesh.dim - 1) ? mesh.final_time : 1.0;
      p[free_axes[i]] = extent * idx[i] / m;
    }
    std::snprintf(buf, sizeof buf, "%.9g\n", f.eval(p));
    out << buf;

    int i = 0;
    while (i < k && ++idx[i] == nx) idx[i++] = 0;
  }
}

}  // namespace stfem
