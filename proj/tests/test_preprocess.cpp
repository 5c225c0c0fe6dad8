#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>

#include "forge/error.hpp"
#include "forge/surface.hpp"
#include "forge/synth.hpp"
#include "test_helpers.hpp"

using namespace forge;

namespace {

// Independent cell->point oracle: explicit loop over (cell, point) incidence
// pairs, cells visited in ascending order per point.
std::vector<double> cell_to_point_oracle(const UnstructuredMesh& mesh,
                                         const std::string& field) {
    const auto& vals = mesh.cell_fields.at(field);
    std::vector<double> out(mesh.points.size());
    for (std::size_t p = 0; p < mesh.points.size(); ++p) {
        double sum = 0.0;
        int count = 0;
        for (std::size_t c = 0; c < mesh.cells.size(); ++c) {
            for (int v : mesh.cells[c]) {
                if (v == static_cast<int>(p)) {
                    sum += vals[c];
                    ++count;
                }
            }
        }
        REQUIRE(count > 0);
        out[p] = sum / count;
    }
    return out;
}

// Independent surface oracle: count every face's multiplicity in a map, then
// collect nodes and edges of the multiplicity-1 faces.
SurfaceTopology extract_surface_oracle(const UnstructuredMesh& mesh) {
    std::map<std::array<int, 3>, int> mult;
    for (const auto& cell : mesh.cells) {
        const int faces[4][3] = {{cell[1], cell[2], cell[3]},
                                 {cell[0], cell[2], cell[3]},
                                 {cell[0], cell[1], cell[3]},
                                 {cell[0], cell[1], cell[2]}};
        for (const auto& f : faces) {
            std::array<int, 3> key{f[0], f[1], f[2]};
            std::sort(key.begin(), key.end());
            ++mult[key];
        }
    }
    std::set<int> nodes;
    for (const auto& [face, m] : mult) {
        REQUIRE(m <= 2);
        if (m == 1) nodes.insert(face.begin(), face.end());
    }
    std::vector<int> node_ids(nodes.begin(), nodes.end());
    std::map<int, int> to_new;
    for (std::size_t i = 0; i < node_ids.size(); ++i) {
        to_new[node_ids[i]] = static_cast<int>(i);
    }
    std::set<std::pair<int, int>> edges;
    for (const auto& [face, m] : mult) {
        if (m != 1) continue;
        const int a = to_new[face[0]], b = to_new[face[1]], c = to_new[face[2]];
        edges.insert({std::min(a, b), std::max(a, b)});
        edges.insert({std::min(a, c), std::max(a, c)});
        edges.insert({std::min(b, c), std::max(b, c)});
    }
    return {node_ids, {edges.begin(), edges.end()}};
}

}  // namespace

TEST_SUITE("preprocess") {

TEST_CASE("cell_to_point averages incident cells") {
    auto mesh = test::two_tets(100.0, 200.0);
    auto out = cell_to_point(mesh, "wear");
    CHECK(out == std::vector<double>{100.0, 150.0, 150.0, 150.0, 200.0});
}

TEST_CASE("cell_to_point rejects unknown fields and orphan points") {
    auto mesh = test::single_tet();
    CHECK_THROWS_AS(cell_to_point(mesh, "nope"), validation_error);
    mesh.points.push_back({9, 9, 9});  // referenced by no cell
    CHECK_THROWS_AS(cell_to_point(mesh, "wear"), validation_error);
}

TEST_CASE("cell_to_point matches the incidence oracle exactly") {
    Rng rng(42);
    for (int iter = 0; iter < 30; ++iter) {
        auto mesh = test::random_lattice_subset(rng);
        CHECK(cell_to_point(mesh, "wear") == cell_to_point_oracle(mesh, "wear"));
    }
}

TEST_CASE("cell_to_point output is bounded by cell extremes") {
    Rng rng(43);
    for (int iter = 0; iter < 20; ++iter) {
        auto mesh = test::random_lattice_subset(rng);
        const auto& vals = mesh.cell_fields.at("wear");
        const double lo = *std::min_element(vals.begin(), vals.end());
        const double hi = *std::max_element(vals.begin(), vals.end());
        for (double v : cell_to_point(mesh, "wear")) {
            CHECK(v >= lo);
            CHECK(v <= hi);
        }
    }
}

TEST_CASE("single tet: every face is boundary") {
    auto topo = extract_surface(test::single_tet());
    CHECK(topo.node_ids == std::vector<int>{0, 1, 2, 3});
    CHECK(topo.edges.size() == 6);
    CHECK(boundary_faces(test::single_tet()).size() == 4);
}

TEST_CASE("two tets: shared face is internal") {
    auto mesh = test::two_tets();
    CHECK(boundary_faces(mesh).size() == 6);
    auto topo = extract_surface(mesh);
    CHECK(topo.node_ids == std::vector<int>{0, 1, 2, 3, 4});
    CHECK(topo.edges.size() == 9);
}

TEST_CASE("unit cube split into 6 tets") {
    auto cube = tetrahedralize_lattice(1, 1, 1, [](double u, double v, double w) {
        return std::array<double, 3>{u, v, w};
    });
    CHECK(cube.point_count() == 8);
    CHECK(cube.cell_count() == 6);
    CHECK(boundary_faces(cube).size() == 12);
    auto topo = extract_surface(cube);
    CHECK(topo.node_ids.size() == 8);
}

TEST_CASE("face in more than two tets is non-manifold") {
    UnstructuredMesh mesh;
    mesh.points = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {0, 0, -1}, {1, 1, 1}};
    mesh.cells = {{0, 1, 2, 3}, {0, 1, 2, 4}, {0, 1, 2, 5}};
    CHECK_THROWS_AS(extract_surface(mesh), validation_error);
}

TEST_CASE("extract_surface matches the multiplicity oracle exactly") {
    Rng rng(44);
    for (int iter = 0; iter < 30; ++iter) {
        auto mesh = test::random_lattice_subset(rng);
        auto got = extract_surface(mesh);
        auto want = extract_surface_oracle(mesh);
        CHECK(got.node_ids == want.node_ids);
        CHECK(got.edges == want.edges);
    }
}

TEST_CASE("on closed meshes every surface edge borders two boundary faces") {
    Rng rng(45);
    for (int iter = 0; iter < 10; ++iter) {
        const int nx = 1 + static_cast<int>(rng.next_u64() % 3);
        const int ny = 1 + static_cast<int>(rng.next_u64() % 3);
        const int nz = 1 + static_cast<int>(rng.next_u64() % 3);
        auto mesh = tetrahedralize_lattice(nx, ny, nz, [](double u, double v, double w) {
            return std::array<double, 3>{u, v, w};
        });
        std::map<std::pair<int, int>, int> edge_faces;
        for (const auto& f : boundary_faces(mesh)) {
            auto [a, b, c] = f.verts;
            ++edge_faces[{a, b}];
            ++edge_faces[{a, c}];
            ++edge_faces[{b, c}];
        }
        for (const auto& [edge, count] : edge_faces) CHECK(count == 2);
    }
}

TEST_CASE("build_graph assembles features and wear") {
    MeshMetadata meta{1000.0, 0.3, "t"};

    auto g = build_graph(test::single_tet(), meta);
    REQUIRE(g.node_count() == 4);
    CHECK(g.features[0] == std::array<double, 5>{0, 0, 0, 1000.0, 0.3});
    CHECK(!g.wear.has_value());

    auto g2 = build_graph(test::two_tets(), meta, "wear");
    REQUIRE(g2.wear.has_value());
    CHECK(*g2.wear == std::vector<double>{100.0, 150.0, 150.0, 150.0, 200.0});

    auto zero = test::two_tets(0.0, 0.0);
    auto g3 = build_graph(zero, meta, "wear");
    CHECK(*g3.wear == std::vector<double>(5, 0.0));
}

TEST_CASE("build_graph output satisfies the graph invariants") {
    Rng rng(46);
    for (int iter = 0; iter < 30; ++iter) {
        auto mesh = test::random_lattice_subset(rng);
        auto g = build_graph(mesh, {900.0, 0.2, "t"}, "wear");
        CHECK_NOTHROW(g.validate());
        CHECK(g.node_count() <= mesh.point_count());
    }
}

TEST_CASE("standardization of a two-point column") {
    SurfaceGraph g;
    g.node_ids = {0, 1};
    g.positions = {{0, 0, 0}, {2, 0, 0}};
    g.edges = {{0, 1}};
    g.features = {{0, 0, 0, 1000, 0.3}, {2, 0, 0, 1000, 0.3}};

    auto norm = fit_normalization(std::span(&g, 1));
    CHECK(norm.shift[0] == 1.0);
    CHECK(norm.scale[0] == 1.0);  // population std of {0, 2}
    CHECK(norm.shift[3] == 1000.0);
    CHECK(norm.scale[3] == 1.0);  // zero-variance rule

    auto normalized = apply_normalization(g, norm);
    CHECK(normalized.features[0][0] == -1.0);
    CHECK(normalized.features[1][0] == 1.0);
    CHECK(normalized.features[0][3] == 0.0);

    // Refitting on the normalized split is the identity normalization.
    auto refit = fit_normalization(std::span(&normalized, 1));
    for (int c = 0; c < 5; ++c) {
        CHECK(refit.shift[static_cast<std::size_t>(c)] ==
              doctest::Approx(0.0).epsilon(1e-12));
        CHECK(refit.scale[static_cast<std::size_t>(c)] ==
              doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("normalization requires a training split") {
    CHECK_THROWS_AS(fit_normalization({}), validation_error);
}

}  // TEST_SUITE
