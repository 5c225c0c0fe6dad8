#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "forge/mesh.hpp"

namespace forge {

// Surface graph fed to the models: external-surface nodes of a tet mesh,
// boundary-face connectivity, and the 5-feature node matrix
// (x, y, z, temperature, friction coefficient).
struct SurfaceGraph {
    std::vector<int> node_ids;                    // original mesh point indices, ascending
    std::vector<std::array<double, 3>> positions; // N x 3, meters
    std::vector<std::pair<int, int>> edges;       // undirected, i < j, sorted, unique
    std::vector<std::array<double, 5>> features;  // N x 5
    std::optional<std::vector<double>> wear;      // N/m; absent on prediction inputs

    int node_count() const { return static_cast<int>(node_ids.size()); }

    // Throws validation_error if a graph invariant is broken (self-loops,
    // duplicate edges, isolated nodes, negative wear, non-constant parameter
    // columns).
    void validate() const;
};

// A boundary triangle (a face belonging to exactly one tetrahedron) and the
// cell that owns it. Vertices are original point indices, sorted ascending.
struct BoundaryFace {
    std::array<int, 3> verts;
    int cell;
};

// All boundary faces of the mesh, in deterministic (sorted-vertex) order.
// Throws validation_error if any face occurs in more than two cells.
std::vector<BoundaryFace> boundary_faces(const UnstructuredMesh& mesh);

struct SurfaceTopology {
    std::vector<int> node_ids;               // ascending original point indices
    std::vector<std::pair<int, int>> edges;  // reindexed to [0, N), i < j, sorted
};

// External-surface nodes and boundary-face edges of a valid tet mesh.
SurfaceTopology extract_surface(const UnstructuredMesh& mesh);

// Cell field -> per-point field by unweighted averaging over incident cells.
// Throws validation_error for unknown fields or points in no cell.
std::vector<double> cell_to_point(const UnstructuredMesh& mesh, const std::string& field);

// Composes cell_to_point (for wear, when requested) and extract_surface into
// a SurfaceGraph with the 5-feature node matrix.
SurfaceGraph build_graph(const UnstructuredMesh& mesh, const MeshMetadata& meta,
                         const std::optional<std::string>& wear_field = std::nullopt);

// Per-column affine standardization fitted on the training split. Wear
// targets are never normalized.
struct Normalization {
    std::array<double, 5> shift{0, 0, 0, 0, 0};
    std::array<double, 5> scale{1, 1, 1, 1, 1};

    bool operator==(const Normalization&) const = default;
};

Normalization fit_normalization(std::span<const SurfaceGraph> train_graphs);
SurfaceGraph apply_normalization(const SurfaceGraph& g, const Normalization& norm);

}  // namespace forge
