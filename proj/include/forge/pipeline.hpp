#pragma once

#include <string>
#include <vector>

#include "forge/manifest.hpp"
#include "forge/surface.hpp"

namespace forge {

// The manifest's meshes preprocessed into topology-checked, normalized
// surface graphs. One dataset = one die: every mesh must share node ids and
// edges. Normalization is fitted on the train split only.
struct LoadedDataset {
    std::vector<SurfaceGraph> train, val, test;
    std::vector<std::string> train_ids, val_ids, test_ids;
    Normalization norm;
    int node_count = 0;
    std::vector<std::pair<int, int>> edges;
    std::string wear_field;
};

// `require_wear` controls whether the wear cell field must be present (it
// must for training/evaluation; prediction inputs may lack it). When
// `use_norm` is given (e.g. from a checkpoint) it is applied instead of
// fitting a fresh normalization on the train split.
LoadedDataset load_dataset(const Manifest& manifest, bool require_wear = true,
                           const Normalization* use_norm = nullptr);

}  // namespace forge
