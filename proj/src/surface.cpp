#include "forge/surface.hpp"

#include <algorithm>
#include <cmath>

#include "forge/error.hpp"

namespace forge {

void SurfaceGraph::validate() const {
    const int n = node_count();
    if (static_cast<int>(positions.size()) != n || static_cast<int>(features.size()) != n) {
        throw validation_error("surface graph arrays disagree on node count");
    }
    std::vector<char> touched(static_cast<std::size_t>(n), 0);
    for (std::size_t e = 0; e < edges.size(); ++e) {
        auto [i, j] = edges[e];
        if (i >= j) throw validation_error("edge list must be ordered with i < j");
        if (i < 0 || j >= n) throw validation_error("edge references node outside [0, N)");
        if (e > 0 && edges[e - 1] == edges[e]) throw validation_error("duplicate edge");
        touched[static_cast<std::size_t>(i)] = 1;
        touched[static_cast<std::size_t>(j)] = 1;
    }
    for (int i = 0; i < n; ++i) {
        if (!touched[static_cast<std::size_t>(i)]) {
            throw validation_error("surface node " + std::to_string(i) +
                                   " appears in no edge");
        }
    }
    if (wear) {
        if (static_cast<int>(wear->size()) != n) {
            throw validation_error("wear vector length does not match node count");
        }
        for (double w : *wear) {
            if (!(w >= 0.0)) throw validation_error("wear must be elementwise >= 0");
        }
    }
    for (int i = 1; i < n; ++i) {
        if (features[static_cast<std::size_t>(i)][3] != features[0][3] ||
            features[static_cast<std::size_t>(i)][4] != features[0][4]) {
            throw validation_error(
                "feature columns 4 and 5 must be constant across one graph");
        }
    }
}

std::vector<BoundaryFace> boundary_faces(const UnstructuredMesh& mesh) {
    // The four faces of cell (a,b,c,d) are its 3-subsets. Sort the full list
    // of (face, cell) pairs; boundary faces are the multiplicity-1 runs.
    struct FaceRef {
        std::array<int, 3> verts;
        int cell;
    };
    std::vector<FaceRef> faces;
    faces.reserve(mesh.cells.size() * 4);
    for (std::size_t c = 0; c < mesh.cells.size(); ++c) {
        const auto& cell = mesh.cells[c];
        static constexpr int kFace[4][3] = {{1, 2, 3}, {0, 2, 3}, {0, 1, 3}, {0, 1, 2}};
        for (const auto& f : kFace) {
            std::array<int, 3> v{cell[f[0]], cell[f[1]], cell[f[2]]};
            std::sort(v.begin(), v.end());
            faces.push_back({v, static_cast<int>(c)});
        }
    }
    std::sort(faces.begin(), faces.end(), [](const FaceRef& a, const FaceRef& b) {
        return a.verts != b.verts ? a.verts < b.verts : a.cell < b.cell;
    });

    std::vector<BoundaryFace> out;
    std::size_t i = 0;
    while (i < faces.size()) {
        std::size_t j = i;
        while (j < faces.size() && faces[j].verts == faces[i].verts) ++j;
        const std::size_t mult = j - i;
        if (mult > 2) {
            throw validation_error("non-manifold mesh: face {" +
                                   std::to_string(faces[i].verts[0]) + ", " +
                                   std::to_string(faces[i].verts[1]) + ", " +
                                   std::to_string(faces[i].verts[2]) + "} occurs in " +
                                   std::to_string(mult) + " cells");
        }
        if (mult == 1) out.push_back({faces[i].verts, faces[i].cell});
        i = j;
    }
    return out;
}

SurfaceTopology extract_surface(const UnstructuredMesh& mesh) {
    mesh.validate();
    const auto bfaces = boundary_faces(mesh);

    std::vector<int> nodes;
    nodes.reserve(bfaces.size() * 3);
    for (const auto& f : bfaces) nodes.insert(nodes.end(), f.verts.begin(), f.verts.end());
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());

    std::vector<int> old_to_new(mesh.points.size(), -1);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        old_to_new[static_cast<std::size_t>(nodes[i])] = static_cast<int>(i);
    }

    std::vector<std::pair<int, int>> edges;
    edges.reserve(bfaces.size() * 3);
    for (const auto& f : bfaces) {
        const int a = old_to_new[static_cast<std::size_t>(f.verts[0])];
        const int b = old_to_new[static_cast<std::size_t>(f.verts[1])];
        const int c = old_to_new[static_cast<std::size_t>(f.verts[2])];
        edges.emplace_back(std::min(a, b), std::max(a, b));
        edges.emplace_back(std::min(a, c), std::max(a, c));
        edges.emplace_back(std::min(b, c), std::max(b, c));
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    return {std::move(nodes), std::move(edges)};
}

std::vector<double> cell_to_point(const UnstructuredMesh& mesh, const std::string& field) {
    auto it = mesh.cell_fields.find(field);
    if (it == mesh.cell_fields.end()) {
        throw validation_error("unknown cell field '" + field + "'");
    }
    const auto& vals = it->second;
    std::vector<double> sum(mesh.points.size(), 0.0);
    std::vector<int> count(mesh.points.size(), 0);
    for (std::size_t c = 0; c < mesh.cells.size(); ++c) {
        for (int p : mesh.cells[c]) {
            sum[static_cast<std::size_t>(p)] += vals[c];
            count[static_cast<std::size_t>(p)] += 1;
        }
    }
    for (std::size_t p = 0; p < sum.size(); ++p) {
        if (count[p] == 0) {
            throw validation_error("point " + std::to_string(p) +
                                   " belongs to no cell; cannot average cell data");
        }
        sum[p] /= count[p];
    }
    return sum;
}

SurfaceGraph build_graph(const UnstructuredMesh& mesh, const MeshMetadata& meta,
                         const std::optional<std::string>& wear_field) {
    if (meta.friction_coefficient < 0) {
        throw validation_error("friction coefficient must be >= 0");
    }
    auto topo = extract_surface(mesh);

    SurfaceGraph g;
    g.node_ids = std::move(topo.node_ids);
    g.edges = std::move(topo.edges);
    g.positions.reserve(g.node_ids.size());
    g.features.reserve(g.node_ids.size());
    for (int id : g.node_ids) {
        const auto& p = mesh.points[static_cast<std::size_t>(id)];
        g.positions.push_back(p);
        g.features.push_back({p[0], p[1], p[2], meta.temperature, meta.friction_coefficient});
    }
    if (wear_field) {
        const auto point_wear = cell_to_point(mesh, *wear_field);
        std::vector<double> w;
        w.reserve(g.node_ids.size());
        for (int id : g.node_ids) {
            const double v = point_wear[static_cast<std::size_t>(id)];
            if (!(v >= 0.0)) {
                throw validation_error("wear field '" + *wear_field +
                                       "' has a negative value at point " + std::to_string(id));
            }
            w.push_back(v);
        }
        g.wear = std::move(w);
    }
    return g;
}

Normalization fit_normalization(std::span<const SurfaceGraph> train_graphs) {
    if (train_graphs.empty()) {
        throw validation_error("cannot fit normalization on an empty training set");
    }
    std::size_t total = 0;
    for (const auto& g : train_graphs) total += g.features.size();

    Normalization norm;
    for (int col = 0; col < 5; ++col) {
        double mean = 0.0;
        for (const auto& g : train_graphs) {
            for (const auto& row : g.features) mean += row[static_cast<std::size_t>(col)];
        }
        mean /= static_cast<double>(total);
        double var = 0.0;
        for (const auto& g : train_graphs) {
            for (const auto& row : g.features) {
                const double d = row[static_cast<std::size_t>(col)] - mean;
                var += d * d;
            }
        }
        var /= static_cast<double>(total);  // population variance
        const double sd = std::sqrt(var);
        norm.shift[static_cast<std::size_t>(col)] = mean;
        // Columns that are constant up to rounding keep scale 1 (shift only).
        norm.scale[static_cast<std::size_t>(col)] =
            (sd <= 1e-12 * std::max(1.0, std::abs(mean))) ? 1.0 : sd;
    }
    return norm;
}

SurfaceGraph apply_normalization(const SurfaceGraph& g, const Normalization& norm) {
    SurfaceGraph out = g;
    for (auto& row : out.features) {
        for (int col = 0; col < 5; ++col) {
            auto c = static_cast<std::size_t>(col);
            row[c] = (row[c] - norm.shift[c]) / norm.scale[c];
        }
    }
    return out;
}

}  // namespace forge
