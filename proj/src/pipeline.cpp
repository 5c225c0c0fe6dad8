#include "forge/pipeline.hpp"

#include "forge/error.hpp"
#include "forge/log.hpp"
#include "forge/vtk_io.hpp"

namespace forge {

LoadedDataset load_dataset(const Manifest& manifest, bool require_wear,
                           const Normalization* use_norm) {
    if (manifest.records.empty()) throw validation_error("manifest has no records");

    LoadedDataset ds;
    ds.wear_field = manifest.wear_field;

    std::vector<SurfaceGraph> raw;
    std::vector<const ManifestRecord*> recs;
    raw.reserve(manifest.records.size());
    for (const auto& rec : manifest.records) {
        const auto path = manifest.resolve(rec);
        UnstructuredMesh mesh = read_vtk_file(path);
        MeshMetadata meta{rec.temperature, rec.friction, rec.source_id};
        std::optional<std::string> wear_field;
        if (require_wear) {
            if (mesh.cell_fields.count(manifest.wear_field) == 0) {
                throw validation_error("mesh '" + path.string() + "' lacks cell field '" +
                                       manifest.wear_field + "'");
            }
            wear_field = manifest.wear_field;
        }
        try {
            raw.push_back(build_graph(mesh, meta, wear_field));
        } catch (const error& e) {
            throw validation_error("while preprocessing '" + path.string() +
                                   "': " + e.what());
        }
        recs.push_back(&rec);
    }

    ds.node_count = raw.front().node_count();
    ds.edges = raw.front().edges;
    for (std::size_t i = 1; i < raw.size(); ++i) {
        if (raw[i].node_ids != raw.front().node_ids || raw[i].edges != ds.edges) {
            throw validation_error("dataset is not topology-identical: '" +
                                   recs[i]->source_id + "' differs from '" +
                                   recs.front()->source_id + "'");
        }
    }

    if (use_norm) {
        ds.norm = *use_norm;
    } else {
        std::vector<SurfaceGraph> train_raw;
        for (std::size_t i = 0; i < raw.size(); ++i) {
            if (recs[i]->split == "train") train_raw.push_back(raw[i]);
        }
        // An evaluation-only manifest may have no train records; fall back
        // to fitting on everything so the loader stays usable.
        ds.norm = fit_normalization(train_raw.empty() ? raw : train_raw);
    }

    for (std::size_t i = 0; i < raw.size(); ++i) {
        auto g = apply_normalization(raw[i], ds.norm);
        if (recs[i]->split == "train") {
            ds.train.push_back(std::move(g));
            ds.train_ids.push_back(recs[i]->source_id);
        } else if (recs[i]->split == "val") {
            ds.val.push_back(std::move(g));
            ds.val_ids.push_back(recs[i]->source_id);
        } else {
            ds.test.push_back(std::move(g));
            ds.test_ids.push_back(recs[i]->source_id);
        }
    }
    vlog("loaded " + std::to_string(raw.size()) + " meshes, " +
         std::to_string(ds.node_count) + " surface nodes, " + std::to_string(ds.edges.size()) +
         " surface edges");
    return ds;
}

}  // namespace forge
