#include "forge/mesh.hpp"

#include "forge/error.hpp"

namespace forge {

void UnstructuredMesh::validate() const {
    const int np = point_count();
    for (std::size_t c = 0; c < cells.size(); ++c) {
        const auto& cell = cells[c];
        for (int v : cell) {
            if (v < 0 || v >= np) {
                throw validation_error("cell " + std::to_string(c) + " references point " +
                                       std::to_string(v) + " but mesh has " +
                                       std::to_string(np) + " points");
            }
        }
        for (int i = 0; i < 4; ++i) {
            for (int j = i + 1; j < 4; ++j) {
                if (cell[i] == cell[j]) {
                    throw validation_error("cell " + std::to_string(c) +
                                           " has repeated point index " +
                                           std::to_string(cell[i]));
                }
            }
        }
    }
    for (const auto& [name, vals] : cell_fields) {
        if (vals.size() != cells.size()) {
            throw validation_error("cell field '" + name + "' has " +
                                   std::to_string(vals.size()) + " values for " +
                                   std::to_string(cells.size()) + " cells");
        }
    }
    for (const auto& [name, vals] : point_fields) {
        if (vals.size() != points.size()) {
            throw validation_error("point field '" + name + "' has " +
                                   std::to_string(vals.size()) + " values for " +
                                   std::to_string(points.size()) + " points");
        }
    }
}

}  // namespace forge
