#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace forge {

// One dataset record: a mesh file plus the initial conditions it was
// simulated under and its split assignment.
struct ManifestRecord {
    std::string mesh_path;  // relative to the manifest file
    double temperature = 0.0;
    double friction = 0.0;
    std::string split;  // train | val | test
    std::string source_id;
};

struct Manifest {
    std::string wear_field = "wear";
    std::string geometry;
    std::vector<ManifestRecord> records;
    std::filesystem::path base_dir;  // directory of the manifest file

    std::vector<const ManifestRecord*> split(const std::string& name) const;
    std::filesystem::path resolve(const ManifestRecord& rec) const;
};

// Flat text format, one record per line:
//   forge-manifest v1
//   wear_field=<name> geometry=<tag>
//   <mesh_path> <temperature> <friction> <split> <source_id>
Manifest read_manifest(const std::filesystem::path& path);
std::string manifest_to_string(const Manifest& m);
void write_manifest(const Manifest& m, const std::filesystem::path& path);

}  // namespace forge
