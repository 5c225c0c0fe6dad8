#include "forge/synth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "forge/error.hpp"
#include "forge/surface.hpp"

namespace forge {

std::string to_string(Geometry g) {
    return g == Geometry::cylinder ? "cylinder" : "cylindrical_sector";
}

Geometry geometry_from_string(const std::string& name) {
    if (name == "cylinder") return Geometry::cylinder;
    if (name == "cylindrical_sector" || name == "sector") return Geometry::cylindrical_sector;
    throw validation_error("unknown geometry '" + name +
                           "' (expected cylinder|cylindrical_sector)");
}

UnstructuredMesh tetrahedralize_lattice(
    int nx, int ny, int nz,
    const std::function<std::array<double, 3>(double, double, double)>& map_unit,
    bool wrap_y) {
    if (nx < 1 || ny < 1 || nz < 1) {
        throw validation_error("lattice resolution must be >= 1 per axis");
    }
    if (wrap_y && ny < 3) {
        throw validation_error("wrapped lattice needs ny >= 3 to stay manifold");
    }
    const int ny_nodes = wrap_y ? ny : ny + 1;
    const auto node_id = [&](int ix, int iy, int iz) {
        return (ix * ny_nodes + (iy % ny_nodes)) * (nz + 1) + iz;
    };

    UnstructuredMesh mesh;
    mesh.points.resize(static_cast<std::size_t>((nx + 1) * ny_nodes * (nz + 1)));
    for (int ix = 0; ix <= nx; ++ix) {
        for (int iy = 0; iy < ny_nodes; ++iy) {
            for (int iz = 0; iz <= nz; ++iz) {
                mesh.points[static_cast<std::size_t>(node_id(ix, iy, iz))] =
                    map_unit(static_cast<double>(ix) / nx, static_cast<double>(iy) / ny,
                             static_cast<double>(iz) / nz);
            }
        }
    }

    // Standard 6-tet split of each hexahedron around the (0,0,0)-(1,1,1)
    // diagonal. Corner bits are (x, y, z); the pattern is translation
    // invariant, so shared faces between neighboring cells conform.
    static constexpr int kTets[6][4] = {
        {0, 1, 3, 7}, {0, 1, 5, 7}, {0, 2, 3, 7},
        {0, 2, 6, 7}, {0, 4, 5, 7}, {0, 4, 6, 7},
    };
    mesh.cells.reserve(static_cast<std::size_t>(nx) * ny * nz * 6);
    for (int ix = 0; ix < nx; ++ix) {
        for (int iy = 0; iy < ny; ++iy) {
            for (int iz = 0; iz < nz; ++iz) {
                int corner[8];
                for (int b = 0; b < 8; ++b) {
                    corner[b] = node_id(ix + (b & 1), iy + ((b >> 1) & 1), iz + ((b >> 2) & 1));
                }
                for (const auto& t : kTets) {
                    mesh.cells.push_back(
                        {corner[t[0]], corner[t[1]], corner[t[2]], corner[t[3]]});
                }
            }
        }
    }
    mesh.validate();
    return mesh;
}

namespace {

struct Resolution {
    int nr, ntheta, nz;
};

long long surface_node_count(Geometry geom, int nr, int ntheta, int nz) {
    if (geom == Geometry::cylinder) {
        // theta wraps: ntheta node columns.
        const long long total = static_cast<long long>(nr + 1) * ntheta * (nz + 1);
        const long long interior = static_cast<long long>(nr - 1) * ntheta * (nz - 1);
        return total - interior;
    }
    const long long total = static_cast<long long>(nr + 1) * (ntheta + 1) * (nz + 1);
    const long long interior = static_cast<long long>(nr - 1) * (ntheta - 1) * (nz - 1);
    return total - interior;
}

// Smallest-deviation (ntheta, nz) for a fixed radial resolution of 2, with
// ties broken toward angularly balanced lattices. Deterministic scan order.
Resolution pick_resolution(Geometry geom, int target) {
    const int min_theta = geom == Geometry::cylinder ? 3 : 1;
    Resolution best{2, min_theta, 1};
    long long best_diff = std::numeric_limits<long long>::max();
    long long best_aspect = std::numeric_limits<long long>::max();
    for (int ntheta = min_theta; ntheta <= 512; ++ntheta) {
        for (int nz = 1; nz <= 256; ++nz) {
            const long long diff =
                std::llabs(surface_node_count(geom, 2, ntheta, nz) - target);
            const long long aspect = std::llabs(ntheta - 3LL * nz);
            if (diff < best_diff || (diff == best_diff && aspect < best_aspect)) {
                best_diff = diff;
                best_aspect = aspect;
                best = {2, ntheta, nz};
            }
        }
    }
    if (best_diff * 5 > target) {  // outside ±20%
        throw validation_error("cannot reach ~" + std::to_string(target) +
                               " surface nodes with the structured lattice");
    }
    return best;
}

}  // namespace

UnstructuredMesh generate_mesh(const SynthConfig& config) {
    if (config.target_surface_nodes < 16) {
        throw validation_error("target surface node count too small for a closed mesh");
    }
    if (!(config.inner_radius > 0) || !(config.outer_radius > config.inner_radius) ||
        !(config.height > 0)) {
        throw validation_error("die dimensions must satisfy 0 < inner < outer, height > 0");
    }
    const auto res = pick_resolution(config.geometry, config.target_surface_nodes);
    const double r0 = config.inner_radius;
    const double r1 = config.outer_radius;
    const double h = config.height;
    const bool wrap = config.geometry == Geometry::cylinder;
    const double arc = wrap ? 2.0 * std::numbers::pi
                            : config.sector_angle_deg * std::numbers::pi / 180.0;
    if (!wrap && !(config.sector_angle_deg > 0 && config.sector_angle_deg < 360)) {
        throw validation_error("sector angle must be in (0, 360) degrees");
    }
    return tetrahedralize_lattice(
        res.nr, res.ntheta, res.nz,
        [&](double u, double v, double w) -> std::array<double, 3> {
            const double r = r0 + u * (r1 - r0);
            const double theta = v * arc;
            return {r * std::cos(theta), r * std::sin(theta), w * h};
        },
        wrap);
}

void apply_wear_law(UnstructuredMesh& mesh, double temperature, double friction,
                    const WearLaw& law) {
    if (friction < 0) throw validation_error("friction coefficient must be >= 0");
    if (law.exponent < 1) throw validation_error("wear-law exponent must be >= 1");
    const double d_len = std::sqrt(law.press_direction[0] * law.press_direction[0] +
                                   law.press_direction[1] * law.press_direction[1] +
                                   law.press_direction[2] * law.press_direction[2]);
    if (!(d_len > 0)) throw validation_error("press direction must be a nonzero vector");
    const std::array<double, 3> dir{law.press_direction[0] / d_len,
                                    law.press_direction[1] / d_len,
                                    law.press_direction[2] / d_len};

    // Outward normal per boundary face, oriented away from the owning cell's
    // opposite vertex; dominant face per cell = largest area.
    std::vector<double> best_area(mesh.cells.size(), 0.0);
    std::vector<double> alignment(mesh.cells.size(), 0.0);
    std::vector<char> touched(mesh.cells.size(), 0);
    for (const auto& bf : boundary_faces(mesh)) {
        const auto& a = mesh.points[static_cast<std::size_t>(bf.verts[0])];
        const auto& b = mesh.points[static_cast<std::size_t>(bf.verts[1])];
        const auto& c = mesh.points[static_cast<std::size_t>(bf.verts[2])];
        std::array<double, 3> ab{b[0] - a[0], b[1] - a[1], b[2] - a[2]};
        std::array<double, 3> ac{c[0] - a[0], c[1] - a[1], c[2] - a[2]};
        std::array<double, 3> n{ab[1] * ac[2] - ab[2] * ac[1], ab[2] * ac[0] - ab[0] * ac[2],
                                ab[0] * ac[1] - ab[1] * ac[0]};
        const double n_len = std::sqrt(n[0] * n[0] + n[1] * n[1] + n[2] * n[2]);
        if (!(n_len > 0)) continue;  // degenerate face contributes no wear
        const double area = 0.5 * n_len;
        // The vertex of the owning tet that is not on the face.
        const auto& cell = mesh.cells[static_cast<std::size_t>(bf.cell)];
        int opposite = cell[0];
        for (int v : cell) {
            if (v != bf.verts[0] && v != bf.verts[1] && v != bf.verts[2]) opposite = v;
        }
        const auto& o = mesh.points[static_cast<std::size_t>(opposite)];
        const std::array<double, 3> centroid{(a[0] + b[0] + c[0]) / 3.0,
                                             (a[1] + b[1] + c[1]) / 3.0,
                                             (a[2] + b[2] + c[2]) / 3.0};
        double outward = (centroid[0] - o[0]) * n[0] + (centroid[1] - o[1]) * n[1] +
                         (centroid[2] - o[2]) * n[2];
        double sign = outward >= 0 ? 1.0 : -1.0;
        const double align = sign * (n[0] * dir[0] + n[1] * dir[1] + n[2] * dir[2]) / n_len;
        auto ci = static_cast<std::size_t>(bf.cell);
        if (!touched[ci] || area > best_area[ci]) {
            touched[ci] = 1;
            best_area[ci] = area;
            alignment[ci] = align;
        }
    }

    std::vector<double> wear(mesh.cells.size(), 0.0);
    for (std::size_t ci = 0; ci < mesh.cells.size(); ++ci) {
        if (!touched[ci]) continue;
        const double a = std::max(0.0, alignment[ci]);
        if (a <= 0.0) continue;
        wear[ci] = law.amplitude * friction * (temperature / law.reference_temperature) *
                   std::pow(a, law.exponent) * law.wear_scale;
    }
    mesh.cell_fields["wear"] = std::move(wear);
}

std::vector<SynthRecord> generate_dataset(const SynthConfig& config) {
    if (config.parameter_grid.empty()) {
        throw validation_error("parameter grid must be non-empty");
    }
    const UnstructuredMesh base = generate_mesh(config);
    std::vector<SynthRecord> out;
    out.reserve(config.parameter_grid.size());
    for (std::size_t i = 0; i < config.parameter_grid.size(); ++i) {
        const auto [temperature, friction] = config.parameter_grid[i];
        SynthRecord rec;
        rec.mesh = base;
        apply_wear_law(rec.mesh, temperature, friction, config.law);
        char id[32];
        std::snprintf(id, sizeof id, "synth-%03zu", i);
        rec.meta = {temperature, friction, id};
        out.push_back(std::move(rec));
    }
    return out;
}

std::vector<std::pair<double, double>> make_parameter_grid(int count, double t_min,
                                                           double t_max, double mu_min,
                                                           double mu_max) {
    if (count < 1) throw validation_error("parameter grid size must be >= 1");
    // Near-square layout; when count does not factor nicely the grid is
    // truncated row-major.
    int rows = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(count))));
    int cols = (count + rows - 1) / rows;
    std::vector<std::pair<double, double>> grid;
    grid.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < rows && static_cast<int>(grid.size()) < count; ++i) {
        const double t = rows > 1 ? t_min + (t_max - t_min) * i / (rows - 1) : (t_min + t_max) / 2;
        for (int j = 0; j < cols && static_cast<int>(grid.size()) < count; ++j) {
            const double mu =
                cols > 1 ? mu_min + (mu_max - mu_min) * j / (cols - 1) : (mu_min + mu_max) / 2;
            grid.emplace_back(t, mu);
        }
    }
    return grid;
}

}  // namespace forge
