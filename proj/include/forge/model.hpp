#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "forge/layers.hpp"
#include "forge/rng.hpp"
#include "forge/surface.hpp"

namespace forge {

enum class Variant {
    graph_conv_baseline,
    pointnet_baseline,
    edge_conv_linear,
    sage_conv_linear,
};

std::string to_string(Variant v);
Variant variant_from_string(const std::string& name);  // accepts CLI aliases
bool uses_node_linear(Variant v);

// Where dropout sits relative to the node-linear layer.
enum class DropoutPlacement { both, before, after };

std::string to_string(DropoutPlacement p);
DropoutPlacement dropout_placement_from_string(const std::string& name);

// Fully determines a parameterized model: variant, the fixed width ladder,
// dropout, the die's node count (binding for the linear variants) and the
// init seed.
struct ModelSpec {
    Variant variant = Variant::edge_conv_linear;
    std::array<int, 5> widths{5, 50, 100, 50, 1};
    double dropout_p = 0.2;
    DropoutPlacement dropout_placement = DropoutPlacement::both;
    int node_count = 0;
    std::uint64_t seed = 0;

    void validate() const;

    bool operator==(const ModelSpec&) const = default;
};

struct Model {
    ModelSpec spec;
    // Named parameter tensors in fixed order; the order defines optimizer
    // state layout and the checkpoint layout.
    std::vector<std::pair<std::string, ad::TensorPtr>> params;

    ad::TensorPtr param(const std::string& name) const;
    std::vector<ad::TensorPtr> param_tensors() const;
    std::size_t parameter_count() const;
};

// Glorot-uniform weights, zero biases, deterministic per spec.seed.
Model build_model(const ModelSpec& spec);

// N x 1 wear prediction, nonnegative by the final ReLU. In train mode the
// dropout rng must be supplied; eval mode ignores it and is deterministic.
ad::TensorPtr model_forward(const Model& model, const GraphStructure& gs,
                            const ad::TensorPtr& features, ad::Tape* tape, ad::Mode mode,
                            Rng* dropout_rng = nullptr);

// N x 5 feature tensor of a surface graph. Does not require grad.
ad::TensorPtr features_tensor(const SurfaceGraph& g);

}  // namespace forge
