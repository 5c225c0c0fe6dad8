#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

namespace forge {

// FEM output container: a tetrahedral mesh plus named scalar fields attached
// to cells or points. All scalars are 64-bit floats.
struct UnstructuredMesh {
    std::vector<std::array<double, 3>> points;
    std::vector<std::array<int, 4>> cells;
    std::map<std::string, std::vector<double>> cell_fields;
    std::map<std::string, std::vector<double>> point_fields;

    int point_count() const { return static_cast<int>(points.size()); }
    int cell_count() const { return static_cast<int>(cells.size()); }

    // Throws validation_error if an invariant is broken: cell indices out of
    // range, repeated indices within a cell, or field lengths that do not
    // match their association.
    void validate() const;

    bool operator==(const UnstructuredMesh&) const = default;
};

// Per-simulation process parameters. Carried in the dataset manifest, not in
// the VTK file (legacy VTK has no scalar-metadata slot).
struct MeshMetadata {
    double temperature = 0.0;           // °C
    double friction_coefficient = 0.0;  // dimensionless, >= 0
    std::string source_id;
};

}  // namespace forge
