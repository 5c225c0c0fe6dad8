#pragma once

#include <span>
#include <utility>
#include <vector>

#include "forge/ops.hpp"

namespace forge {

// Fixed per-topology operators shared by every forward pass on one die:
// directed edge lists for edge convolution and the two normalized adjacency
// operators. Kept sparse so 9000-node graphs stay cheap.
struct GraphStructure {
    int node_count = 0;
    // Directed edges grouped by center node; isolated nodes carry one (i, i)
    // pair so edge convolution degenerates to concat(h_i, 0) @ W + b.
    std::vector<int> edge_center;
    std::vector<int> edge_neigh;
    ad::SpPair gcn_adj;   // D~^(-1/2) (A + I) D~^(-1/2), symmetric
    ad::SpPair mean_adj;  // row-stochastic A (no self-loops); zero rows when isolated

    static GraphStructure build(int node_count, std::span<const std::pair<int, int>> edges);
};

// H' = D~^(-1/2) (A+I) D~^(-1/2) H W + b
ad::TensorPtr graph_conv_forward(ad::Tape* tape, const ad::TensorPtr& h,
                                 const GraphStructure& gs, const ad::TensorPtr& w,
                                 const ad::TensorPtr& b);

// h'_i = h_i W_self + mean_{j in N(i)} h_j W_neigh + b
ad::TensorPtr sage_conv_forward(ad::Tape* tape, const ad::TensorPtr& h,
                                const GraphStructure& gs, const ad::TensorPtr& w_self,
                                const ad::TensorPtr& w_neigh, const ad::TensorPtr& b);

// h'_i = max_{j in N(i)} [ concat(h_i, h_j - h_i) W_theta + b ], elementwise
// max over the static mesh adjacency.
ad::TensorPtr edge_conv_forward(ad::Tape* tape, const ad::TensorPtr& h,
                                const GraphStructure& gs, const ad::TensorPtr& w_theta,
                                const ad::TensorPtr& b);

// Y = W H + b 1^T: one N x N weight matrix shared across feature channels,
// mapping across nodes instead of features. Bound to a single die topology.
ad::TensorPtr node_linear_forward(ad::Tape* tape, const ad::TensorPtr& h,
                                  const ad::TensorPtr& w, const ad::TensorPtr& b);

}  // namespace forge
