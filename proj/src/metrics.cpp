#include "forge/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "forge/error.hpp"

namespace forge {

double error_percentage(double mae, double mean_wear) {
    if (!(mean_wear > 0.0)) {
        throw numeric_error("error percentage is undefined for mean wear " +
                            std::to_string(mean_wear) + " (all-zero target?)");
    }
    return 100.0 * mae / mean_wear;
}

namespace {

GraphEval eval_one(const std::string& id, const std::vector<double>& pred,
                   const std::vector<double>& target) {
    if (pred.size() != target.size()) {
        throw dim_error("prediction (" + std::to_string(pred.size()) + ") and target (" +
                        std::to_string(target.size()) + ") lengths differ");
    }
    if (pred.empty()) throw validation_error("empty graph in evaluation");
    GraphEval ge;
    ge.id = id;
    ge.nodes = static_cast<int>(pred.size());
    double sum_w = 0.0, sum_abs = 0.0, sum_sq = 0.0, max_w = target[0];
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const double d = pred[i] - target[i];
        sum_abs += std::abs(d);
        sum_sq += d * d;
        sum_w += target[i];
        max_w = std::max(max_w, target[i]);
    }
    const double n = static_cast<double>(pred.size());
    ge.mean_wear = sum_w / n;
    ge.max_wear = max_w;
    ge.mae = sum_abs / n;
    ge.mse = sum_sq / n;
    ge.error_percent = ge.mean_wear > 0.0 ? error_percentage(ge.mae, ge.mean_wear)
                                          : std::numeric_limits<double>::quiet_NaN();
    return ge;
}

}  // namespace

EvalSummary summarize(std::span<const std::vector<double>> predictions,
                      std::span<const std::vector<double>> targets,
                      std::span<const std::string> ids) {
    if (predictions.empty() || predictions.size() != targets.size()) {
        throw validation_error("summarize needs matching, non-empty prediction/target lists");
    }
    EvalSummary s;
    // Pooled statistics run over the node concatenation in order, so they
    // agree exactly with a flat loop over every node.
    double sum_w = 0.0, sum_abs = 0.0, sum_sq = 0.0;
    double max_w = -std::numeric_limits<double>::infinity();
    std::size_t total = 0;
    for (std::size_t g = 0; g < predictions.size(); ++g) {
        const auto& pred = predictions[g];
        const auto& target = targets[g];
        const std::string id = g < ids.size() ? ids[g] : "graph-" + std::to_string(g);
        s.per_graph.push_back(eval_one(id, pred, target));
        for (std::size_t i = 0; i < pred.size(); ++i) {
            const double d = pred[i] - target[i];
            sum_abs += std::abs(d);
            sum_sq += d * d;
            sum_w += target[i];
            max_w = std::max(max_w, target[i]);
        }
        total += pred.size();
    }
    s.mean_wear = sum_w / static_cast<double>(total);
    s.max_wear = max_w;
    s.mae = sum_abs / static_cast<double>(total);
    s.mse = sum_sq / static_cast<double>(total);
    s.error_percent = error_percentage(s.mae, s.mean_wear);
    return s;
}

EvalSummary evaluate(const Model& model, const GraphStructure& gs,
                     std::span<const SurfaceGraph> graphs, std::span<const std::string> ids) {
    if (graphs.empty()) throw validation_error("evaluate needs at least one graph");
    std::vector<std::vector<double>> preds, targets;
    preds.reserve(graphs.size());
    targets.reserve(graphs.size());
    for (const auto& g : graphs) {
        if (!g.wear) throw validation_error("evaluate needs wear targets on every graph");
        auto out = model_forward(model, gs, features_tensor(g), nullptr, ad::Mode::eval);
        preds.push_back(out->values);
        targets.push_back(*g.wear);
    }
    return summarize(preds, targets, ids);
}

std::string format_summary_table(const EvalSummary& summary, const std::string& model_name) {
    std::ostringstream os;
    auto row = [&os](const std::string& label, double value, const char* unit) {
        os << "  " << label;
        for (std::size_t i = label.size(); i < 14; ++i) os << ' ';
        char buf[64];
        std::snprintf(buf, sizeof buf, "%12.4f %s", value, unit);
        os << buf << '\n';
    };
    os << model_name << ":\n";
    row("Mean", summary.mean_wear, "N/m");
    row("Maximum", summary.max_wear, "N/m");
    row("MAE", summary.mae, "N/m");
    row("MSE", summary.mse, "(N/m)^2");
    row("Error", summary.error_percent, "%");
    return os.str();
}

}  // namespace forge
