#include <doctest.h>

#include <sstream>

#include "forge/error.hpp"
#include "forge/vtk_io.hpp"
#include "test_helpers.hpp"

using namespace forge;

TEST_SUITE("mesh_io") {

static const char* kSingleTetFile = R"(# vtk DataFile Version 3.0
minimal single tet
ASCII
DATASET UNSTRUCTURED_GRID
POINTS 4 double
0 0 0
1 0 0
0 1 0
0 0 1
CELLS 1 5
4 0 1 2 3
CELL_TYPES 1
10
CELL_DATA 1
SCALARS wear double 1
LOOKUP_TABLE default
100.0
)";

TEST_CASE("reads a minimal single-tet file") {
    std::istringstream in(kSingleTetFile);
    auto mesh = read_vtk(in);
    CHECK(mesh.point_count() == 4);
    CHECK(mesh.cell_count() == 1);
    CHECK(mesh.cells[0] == std::array<int, 4>{0, 1, 2, 3});
    REQUIRE(mesh.cell_fields.count("wear") == 1);
    CHECK(mesh.cell_fields.at("wear") == std::vector<double>{100.0});
}

TEST_CASE("write -> read round trip is exact") {
    auto mesh = test::two_tets();
    mesh.cell_fields["temperature"] = {1.0 / 3.0, 0.1 + 0.2};
    mesh.point_fields["wear_pred"] = {0.0, -0.0, 1e-300, 1e300, 123.456789012345678};
    mesh.points[4] = {1.0 / 7.0, -2.0 / 3.0, 6.02214076e23};

    auto text = write_vtk_string(mesh);
    std::istringstream in(text);
    auto back = read_vtk(in);
    CHECK(back == mesh);

    // Second trip reproduces the byte stream as well.
    CHECK(write_vtk_string(back) == text);
}

TEST_CASE("writer emits declared sections") {
    auto text = write_vtk_string(test::single_tet());
    CHECK(text.find("CELL_TYPES") != std::string::npos);
    CHECK(text.find("\n10\n") != std::string::npos);
    CHECK(text.find("CELL_DATA 1") != std::string::npos);

    UnstructuredMesh bare = test::single_tet();
    bare.cell_fields.clear();
    auto bare_text = write_vtk_string(bare);
    CHECK(bare_text.find("CELL_DATA") == std::string::npos);
    CHECK(bare_text.find("POINT_DATA") == std::string::npos);

    UnstructuredMesh with_point = test::single_tet();
    with_point.point_fields["wear_pred"] = {1, 2, 3, 4};
    CHECK(write_vtk_string(with_point).find("SCALARS wear_pred double 1") !=
          std::string::npos);
}

TEST_CASE("malformed header names the line") {
    std::istringstream in("not a vtk file\nwhatever\n");
    try {
        read_vtk(in);
        FAIL("expected parse_error");
    } catch (const parse_error& e) {
        CHECK(e.line() == 1);
    }
}

TEST_CASE("binary files are rejected") {
    std::istringstream in("# vtk DataFile Version 3.0\ntitle\nBINARY\n");
    CHECK_THROWS_AS(read_vtk(in), parse_error);
}

TEST_CASE("non-tetrahedral cells are rejected") {
    std::string txt = kSingleTetFile;
    auto pos = txt.find("CELL_TYPES 1\n10");
    REQUIRE(pos != std::string::npos);
    std::string hexed = txt.substr(0, pos) + "CELL_TYPES 1\n12" +
                        txt.substr(pos + std::string("CELL_TYPES 1\n10").size());
    std::istringstream in(hexed);
    CHECK_THROWS_AS(read_vtk(in), unsupported_cell_error);

    // A cell with the wrong vertex count is equally unsupported.
    std::istringstream in2(
        "# vtk DataFile Version 3.0\nt\nASCII\nDATASET UNSTRUCTURED_GRID\n"
        "POINTS 3 double\n0 0 0\n1 0 0\n0 1 0\nCELLS 1 4\n3 0 1 2\nCELL_TYPES 1\n5\n");
    CHECK_THROWS_AS(read_vtk(in2), unsupported_cell_error);
}

TEST_CASE("out-of-range cell index is a validation error") {
    std::istringstream in(
        "# vtk DataFile Version 3.0\nt\nASCII\nDATASET UNSTRUCTURED_GRID\n"
        "POINTS 5 double\n0 0 0\n1 0 0\n0 1 0\n0 0 1\n1 1 1\n"
        "CELLS 1 5\n4 0 1 2 7\nCELL_TYPES 1\n10\n");
    CHECK_THROWS_AS(read_vtk(in), validation_error);
}

TEST_CASE("repeated index within a cell is a validation error") {
    std::istringstream in(
        "# vtk DataFile Version 3.0\nt\nASCII\nDATASET UNSTRUCTURED_GRID\n"
        "POINTS 4 double\n0 0 0\n1 0 0\n0 1 0\n0 0 1\n"
        "CELLS 1 5\n4 0 1 2 2\nCELL_TYPES 1\n10\n");
    CHECK_THROWS_AS(read_vtk(in), validation_error);
}

TEST_CASE("field count mismatches are rejected") {
    std::istringstream in(
        "# vtk DataFile Version 3.0\nt\nASCII\nDATASET UNSTRUCTURED_GRID\n"
        "POINTS 4 double\n0 0 0\n1 0 0\n0 1 0\n0 0 1\n"
        "CELLS 1 5\n4 0 1 2 3\nCELL_TYPES 1\n10\nCELL_DATA 3\n");
    CHECK_THROWS_AS(read_vtk(in), validation_error);
}

TEST_CASE("duplicate field names are rejected") {
    std::string txt = kSingleTetFile;
    txt += "SCALARS wear double 1\nLOOKUP_TABLE default\n5.0\n";
    std::istringstream in(txt);
    CHECK_THROWS_AS(read_vtk(in), validation_error);
}

TEST_CASE("truncated value block reports the line") {
    std::string txt(kSingleTetFile);
    txt = txt.substr(0, txt.size() - std::string("100.0\n").size());
    std::istringstream in(txt);
    CHECK_THROWS_AS(read_vtk(in), parse_error);
}

TEST_CASE("multiple scalar fields per section round trip") {
    auto mesh = test::two_tets();
    mesh.cell_fields["temperature"] = {900.0, 1100.0};
    mesh.cell_fields["pressure"] = {1.5, 2.5};
    auto text = write_vtk_string(mesh);
    std::istringstream in(text);
    CHECK(read_vtk(in) == mesh);
}

TEST_CASE("random lattice meshes round trip bit-exactly") {
    Rng rng(20240817);
    for (int iter = 0; iter < 20; ++iter) {
        auto mesh = test::random_lattice_subset(rng);
        std::istringstream in(write_vtk_string(mesh));
        CHECK(read_vtk(in) == mesh);
    }
}

}  // TEST_SUITE
