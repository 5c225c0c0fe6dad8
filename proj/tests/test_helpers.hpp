#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include "forge/mesh.hpp"
#include "forge/rng.hpp"
#include "forge/surface.hpp"

namespace forge::test {

// Single tetrahedron with an optional wear value.
inline UnstructuredMesh single_tet(double wear = 100.0) {
    UnstructuredMesh m;
    m.points = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    m.cells = {{0, 1, 2, 3}};
    m.cell_fields["wear"] = {wear};
    return m;
}

// Two tets sharing face {1,2,3}.
inline UnstructuredMesh two_tets(double wear0 = 100.0, double wear1 = 200.0) {
    UnstructuredMesh m;
    m.points = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, 1}};
    m.cells = {{0, 1, 2, 3}, {1, 2, 3, 4}};
    m.cell_fields["wear"] = {wear0, wear1};
    return m;
}

// Random connected-ish tet mesh: a small lattice with a random subset of
// cells kept and unreferenced points dropped. Face multiplicities stay <= 2
// because the cells are a subset of a valid mesh.
UnstructuredMesh random_lattice_subset(Rng& rng, int max_tets = 50);

// Random small surface graph for layer tests: n nodes, each (i, i+1) chained
// plus random extra edges, with uniform features in [-1, 1].
SurfaceGraph random_graph(Rng& rng, int nodes, int extra_edges);

// Scratch directory under the system temp path, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag);
    ~TempDir();
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

}  // namespace forge::test
