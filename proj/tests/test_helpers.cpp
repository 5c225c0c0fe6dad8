#include "test_helpers.hpp"

#include <unistd.h>

#include <algorithm>
#include <set>

#include "forge/synth.hpp"

namespace forge::test {

UnstructuredMesh random_lattice_subset(Rng& rng, int max_tets) {
    const int nx = 1 + static_cast<int>(rng.next_u64() % 3);
    const int ny = 1 + static_cast<int>(rng.next_u64() % 3);
    const int nz = 1 + static_cast<int>(rng.next_u64() % 3);
    auto lattice = tetrahedralize_lattice(nx, ny, nz, [](double u, double v, double w) {
        return std::array<double, 3>{u, v, w};
    });

    // Keep a random nonempty subset of cells, capped at max_tets.
    std::vector<int> order(lattice.cells.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    rng.shuffle(order);
    const int keep = 1 + static_cast<int>(rng.next_u64() %
                                          std::min<std::size_t>(order.size(),
                                                                static_cast<std::size_t>(max_tets)));
    std::vector<int> kept(order.begin(), order.begin() + keep);
    std::sort(kept.begin(), kept.end());

    UnstructuredMesh out;
    std::vector<int> remap(lattice.points.size(), -1);
    for (int ci : kept) {
        const auto& cell = lattice.cells[static_cast<std::size_t>(ci)];
        std::array<int, 4> mapped{};
        for (int k = 0; k < 4; ++k) {
            int& slot = remap[static_cast<std::size_t>(cell[static_cast<std::size_t>(k)])];
            if (slot < 0) {
                slot = static_cast<int>(out.points.size());
                out.points.push_back(lattice.points[static_cast<std::size_t>(cell[static_cast<std::size_t>(k)])]);
            }
            mapped[static_cast<std::size_t>(k)] = slot;
        }
        out.cells.push_back(mapped);
    }
    std::vector<double> wear(out.cells.size());
    for (auto& w : wear) w = rng.uniform(0.0, 500.0);
    out.cell_fields["wear"] = std::move(wear);
    return out;
}

SurfaceGraph random_graph(Rng& rng, int nodes, int extra_edges) {
    SurfaceGraph g;
    std::set<std::pair<int, int>> edges;
    for (int i = 0; i + 1 < nodes; ++i) edges.insert({i, i + 1});
    for (int e = 0; e < extra_edges; ++e) {
        const int a = static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(nodes));
        const int b = static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(nodes));
        if (a == b) continue;
        edges.insert({std::min(a, b), std::max(a, b)});
    }
    g.edges.assign(edges.begin(), edges.end());
    const double temp = rng.uniform(-1, 1);
    const double mu = rng.uniform(-1, 1);
    for (int i = 0; i < nodes; ++i) {
        g.node_ids.push_back(i);
        const double x = rng.uniform(-1, 1), y = rng.uniform(-1, 1), z = rng.uniform(-1, 1);
        g.positions.push_back({x, y, z});
        g.features.push_back({x, y, z, temp, mu});
    }
    std::vector<double> wear(static_cast<std::size_t>(nodes));
    for (auto& w : wear) w = rng.uniform(0.0, 1.0);
    g.wear = std::move(wear);
    return g;
}

TempDir::TempDir(const std::string& tag) {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("forge-test-" + tag + "-" + std::to_string(counter++) + "-" +
             std::to_string(static_cast<unsigned long>(::getpid())));
    std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
}

}  // namespace forge::test
