#pragma once

#include <filesystem>

#include "forge/model.hpp"
#include "forge/surface.hpp"

namespace forge {

// Versioned JSON container holding the model spec, the fitted feature
// normalization and every parameter tensor. Write/read round trips are
// value-exact at 64-bit float granularity.
void save_checkpoint(const std::filesystem::path& path, const Model& model,
                     const Normalization& norm);

struct LoadedModel {
    Model model;
    Normalization norm;
};

LoadedModel load_checkpoint(const std::filesystem::path& path);

}  // namespace forge
