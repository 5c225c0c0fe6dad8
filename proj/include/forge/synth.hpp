#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "forge/mesh.hpp"

namespace forge {

enum class Geometry { cylinder, cylindrical_sector };

std::string to_string(Geometry g);
Geometry geometry_from_string(const std::string& name);

// Analytic stand-in for the FEM wear output: per-cell wear
//   C * mu * (T / T0) * max(0, n . d)^k * wear_scale
// with n the outward normal of the cell's dominant (largest) boundary face.
// Interior cells get zero, which keeps the target sparse.
struct WearLaw {
    double amplitude = 2.0;                           // C
    double reference_temperature = 1200.0;            // T0, °C
    std::array<double, 3> press_direction{0.35, 0.0, 1.0};  // d, normalized internally
    double exponent = 2.0;                            // k >= 1
    double wear_scale = 2000.0;                       // N/m
};

struct SynthConfig {
    Geometry geometry = Geometry::cylinder;
    int target_surface_nodes = 500;  // met within ±20%
    // Annular die dimensions, meters.
    double inner_radius = 0.05;
    double outer_radius = 0.12;
    double height = 0.10;
    double sector_angle_deg = 120.0;  // cylindrical_sector only
    std::vector<std::pair<double, double>> parameter_grid;  // (temperature °C, friction)
    WearLaw law;
    std::uint64_t seed = 0;
};

// Structured-lattice tetrahedralization: an (nx × ny × nz) hexahedral lattice
// over the unit cube, each hexahedron split into the standard 6 tetrahedra,
// with node positions produced by `map_unit(u, v, w)`. When wrap_y is set the
// v = 1 plane is identified with v = 0 (full revolution).
UnstructuredMesh tetrahedralize_lattice(
    int nx, int ny, int nz,
    const std::function<std::array<double, 3>(double, double, double)>& map_unit,
    bool wrap_y = false);

// Closed tetrahedral mesh of the configured solid. Deterministic; the
// surface node count lands within ±20% of the target.
UnstructuredMesh generate_mesh(const SynthConfig& config);

// Adds (or replaces) the cell field "wear".
void apply_wear_law(UnstructuredMesh& mesh, double temperature, double friction,
                    const WearLaw& law);

struct SynthRecord {
    UnstructuredMesh mesh;
    MeshMetadata meta;
};

// One mesh per (temperature, friction) pair over a fixed-topology base mesh.
std::vector<SynthRecord> generate_dataset(const SynthConfig& config);

// Near-square factor grid of `count` (T, mu) pairs covering the given ranges.
std::vector<std::pair<double, double>> make_parameter_grid(int count,
                                                           double t_min = 800.0,
                                                           double t_max = 1200.0,
                                                           double mu_min = 0.1,
                                                           double mu_max = 0.5);

}  // namespace forge
