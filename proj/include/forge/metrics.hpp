#pragma once

#include <span>
#include <string>
#include <vector>

#include "forge/model.hpp"
#include "forge/surface.hpp"

namespace forge {

// Error % = 100 * MAE / mean wear, mean taken over the ground-truth targets.
// Throws numeric_error when mean_wear <= 0 (all-zero target).
double error_percentage(double mae, double mean_wear);

struct GraphEval {
    std::string id;
    int nodes = 0;
    double mean_wear = 0.0;
    double max_wear = 0.0;
    double mae = 0.0;
    double mse = 0.0;
    double error_percent = 0.0;  // NaN when the graph's mean wear is zero
};

struct EvalSummary {
    double mean_wear = 0.0;  // dataset statistic, independent of the model
    double max_wear = 0.0;
    double mae = 0.0;
    double mse = 0.0;
    double error_percent = 0.0;
    std::vector<GraphEval> per_graph;
};

// Pools predictions and targets over all nodes of all graphs. Sizes must
// match pairwise; the list must be non-empty.
EvalSummary summarize(std::span<const std::vector<double>> predictions,
                      std::span<const std::vector<double>> targets,
                      std::span<const std::string> ids);

// Runs eval-mode forward over every graph (all must carry wear targets) and
// summarizes.
EvalSummary evaluate(const Model& model, const GraphStructure& gs,
                     std::span<const SurfaceGraph> graphs, std::span<const std::string> ids);

// Human-readable table in the Mean / Maximum / per-model row vocabulary.
std::string format_summary_table(const EvalSummary& summary, const std::string& model_name);

}  // namespace forge
