#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "forge/mesh.hpp"

namespace forge {

// Reads VTK legacy ASCII, DATASET UNSTRUCTURED_GRID, cells all of type 10
// (tetrahedron). Scalars are parsed as 64-bit floats regardless of the
// declared VTK type; field names are preserved verbatim. Throws parse_error
// (with line number), unsupported_cell_error or validation_error.
UnstructuredMesh read_vtk(std::istream& in);
UnstructuredMesh read_vtk_file(const std::filesystem::path& path);

// Emits legacy ASCII with 17 significant digits so that read(write(m)) == m
// bit-exactly. Field sections appear only when the corresponding map is
// non-empty.
void write_vtk(const UnstructuredMesh& mesh, std::ostream& out,
               const std::string& title = "forge mesh");
std::string write_vtk_string(const UnstructuredMesh& mesh,
                             const std::string& title = "forge mesh");
void write_vtk_file(const UnstructuredMesh& mesh, const std::filesystem::path& path,
                    const std::string& title = "forge mesh");

}  // namespace forge
