#ifndef STFEM_IO_HPP
#define STFEM_IO_HPP

#include <string>

#include "stfem/mesh.hpp"
#include "stfem/spaces.hpp"

namespace stfem {

/// Legacy ASCII VTK export of the volume mesh (dim 2 and 3; a 4D mesh has no
/// VTK cell type and is rejected).
void write_vtk_mesh(const SimplicialMesh& mesh, const std::string& path);

/// Boundary facets with their tag as cell data (dim 2 and 3).
void write_vtk_boundary(const SimplicialMesh& mesh, const std::string& path);

/// P1 field as point data on the volume mesh (dim 2 and 3).
void write_vtk_point_field(const FEFunction& f, const std::string& name, const std::string& path);

/// P0 field as cell data on the volume mesh (dim 2 and 3).
void write_vtk_cell_field(const FEFunction& f, const std::string& name, const std::string& path);

/// Sample a P1 field on the hyperplane {x_axis = value} over a uniform raster
/// of the remaining axes and write a structured-points dataset. Works in any
/// dim, including time slices of 4D solutions.
void write_vtk_slice(const FEFunction& f, int axis, double value, int samples_per_axis,
                     const std::string& name, const std::string& path);

}  // namespace stfem

#endif
