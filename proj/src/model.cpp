#include "forge/model.hpp"

#include <cmath>

#include "forge/error.hpp"

namespace forge {

std::string to_string(Variant v) {
    switch (v) {
        case Variant::graph_conv_baseline: return "graph_conv_baseline";
        case Variant::pointnet_baseline: return "pointnet_baseline";
        case Variant::edge_conv_linear: return "edge_conv_linear";
        case Variant::sage_conv_linear: return "sage_conv_linear";
    }
    throw validation_error("unknown model variant");
}

Variant variant_from_string(const std::string& name) {
    if (name == "graph_conv_baseline" || name == "graphconv") return Variant::graph_conv_baseline;
    if (name == "pointnet_baseline" || name == "pointnet") return Variant::pointnet_baseline;
    if (name == "edge_conv_linear" || name == "edgeconv-l") return Variant::edge_conv_linear;
    if (name == "sage_conv_linear" || name == "sageconv-l") return Variant::sage_conv_linear;
    throw validation_error("unknown model variant '" + name +
                           "' (expected graphconv|pointnet|edgeconv-l|sageconv-l)");
}

bool uses_node_linear(Variant v) {
    return v == Variant::edge_conv_linear || v == Variant::sage_conv_linear;
}

std::string to_string(DropoutPlacement p) {
    switch (p) {
        case DropoutPlacement::both: return "both";
        case DropoutPlacement::before: return "before";
        case DropoutPlacement::after: return "after";
    }
    throw validation_error("unknown dropout placement");
}

DropoutPlacement dropout_placement_from_string(const std::string& name) {
    if (name == "both") return DropoutPlacement::both;
    if (name == "before") return DropoutPlacement::before;
    if (name == "after") return DropoutPlacement::after;
    throw validation_error("unknown dropout placement '" + name +
                           "' (expected both|before|after)");
}

void ModelSpec::validate() const {
    if (widths != std::array<int, 5>{5, 50, 100, 50, 1}) {
        throw validation_error("layer widths are fixed to 5-50-100-50-1");
    }
    if (!(dropout_p >= 0.0 && dropout_p < 1.0)) {
        throw validation_error("dropout probability must be in [0, 1)");
    }
    if (node_count < 1 && uses_node_linear(variant)) {
        throw validation_error("linear variants need node_count >= 1");
    }
}

ad::TensorPtr Model::param(const std::string& name) const {
    for (const auto& [n, t] : params) {
        if (n == name) return t;
    }
    throw validation_error("model has no parameter '" + name + "'");
}

std::vector<ad::TensorPtr> Model::param_tensors() const {
    std::vector<ad::TensorPtr> out;
    out.reserve(params.size());
    for (const auto& [n, t] : params) out.push_back(t);
    return out;
}

std::size_t Model::parameter_count() const {
    std::size_t n = 0;
    for (const auto& [name, t] : params) n += t->size();
    return n;
}

namespace {

ad::TensorPtr glorot(Rng& rng, int fan_in, int fan_out, int rows, int cols) {
    auto t = ad::make_tensor(rows, cols, true);
    const double bound = std::sqrt(6.0 / (fan_in + fan_out));
    for (auto& v : t->values) v = rng.uniform(-bound, bound);
    return t;
}

ad::TensorPtr zeros(int rows, int cols) { return ad::make_tensor(rows, cols, true); }

void add_conv_params(Model& m, Rng& rng, const std::string& prefix, Variant v, int in,
                     int out) {
    switch (v) {
        case Variant::graph_conv_baseline:
            m.params.emplace_back(prefix + ".W", glorot(rng, in, out, in, out));
            m.params.emplace_back(prefix + ".b", zeros(1, out));
            break;
        case Variant::edge_conv_linear:
            m.params.emplace_back(prefix + ".W", glorot(rng, 2 * in, out, 2 * in, out));
            m.params.emplace_back(prefix + ".b", zeros(1, out));
            break;
        case Variant::sage_conv_linear:
            m.params.emplace_back(prefix + ".W_self", glorot(rng, in, out, in, out));
            m.params.emplace_back(prefix + ".W_neigh", glorot(rng, in, out, in, out));
            m.params.emplace_back(prefix + ".b", zeros(1, out));
            break;
        case Variant::pointnet_baseline:
            m.params.emplace_back(prefix + ".W", glorot(rng, in, out, in, out));
            m.params.emplace_back(prefix + ".b", zeros(1, out));
            break;
    }
}

}  // namespace

Model build_model(const ModelSpec& spec) {
    spec.validate();
    Model m;
    m.spec = spec;
    Rng rng(spec.seed);
    const auto& w = spec.widths;   // 5, 50, 100, 50, 1
    const int n = spec.node_count;

    switch (spec.variant) {
        case Variant::graph_conv_baseline:
            // Five convolutions; the middle one realizes the fully connected
            // 100->100 stage.
            add_conv_params(m, rng, "gc1", spec.variant, w[0], w[1]);
            add_conv_params(m, rng, "gc2", spec.variant, w[1], w[2]);
            add_conv_params(m, rng, "gc3", spec.variant, w[2], w[2]);
            add_conv_params(m, rng, "gc4", spec.variant, w[2], w[3]);
            add_conv_params(m, rng, "gc5", spec.variant, w[3], w[4]);
            break;
        case Variant::edge_conv_linear:
        case Variant::sage_conv_linear:
            add_conv_params(m, rng, "conv1", spec.variant, w[0], w[1]);
            add_conv_params(m, rng, "conv2", spec.variant, w[1], w[2]);
            m.params.emplace_back("lin.W", glorot(rng, n, n, n, n));
            m.params.emplace_back("lin.b", zeros(n, 1));
            add_conv_params(m, rng, "conv3", spec.variant, w[2], w[3]);
            add_conv_params(m, rng, "conv4", spec.variant, w[3], w[4]);
            break;
        case Variant::pointnet_baseline:
            // Shared per-point MLP 5->50->100, global max pool, concat,
            // per-point MLP 200->50->1.
            add_conv_params(m, rng, "mlp1", spec.variant, w[0], w[1]);
            add_conv_params(m, rng, "mlp2", spec.variant, w[1], w[2]);
            add_conv_params(m, rng, "mlp3", spec.variant, 2 * w[2], w[3]);
            add_conv_params(m, rng, "mlp4", spec.variant, w[3], w[4]);
            break;
    }
    return m;
}

namespace {

ad::TensorPtr conv_forward(const Model& m, ad::Tape* tape, const GraphStructure& gs,
                           const std::string& prefix, const ad::TensorPtr& h) {
    switch (m.spec.variant) {
        case Variant::graph_conv_baseline:
            return graph_conv_forward(tape, h, gs, m.param(prefix + ".W"),
                                      m.param(prefix + ".b"));
        case Variant::edge_conv_linear:
            return edge_conv_forward(tape, h, gs, m.param(prefix + ".W"),
                                     m.param(prefix + ".b"));
        case Variant::sage_conv_linear:
            return sage_conv_forward(tape, h, gs, m.param(prefix + ".W_self"),
                                     m.param(prefix + ".W_neigh"), m.param(prefix + ".b"));
        default:
            throw validation_error("conv_forward: not a convolutional variant");
    }
}

ad::TensorPtr dense(const Model& m, ad::Tape* tape, const std::string& prefix,
                    const ad::TensorPtr& h) {
    return ad::add_row_bias(tape, ad::matmul(tape, h, m.param(prefix + ".W")),
                            m.param(prefix + ".b"));
}

ad::TensorPtr pointnet_forward(const Model& m, ad::Tape* tape, const ad::TensorPtr& features) {
    auto h = ad::relu(tape, dense(m, tape, "mlp1", features));
    h = ad::relu(tape, dense(m, tape, "mlp2", h));
    auto global = ad::col_max(tape, h);
    auto tiled = ad::broadcast_rows(tape, global, h->rows);
    auto cat = ad::concat_cols(tape, h, tiled);
    auto out = ad::relu(tape, dense(m, tape, "mlp3", cat));
    return ad::relu(tape, dense(m, tape, "mlp4", out));
}

}  // namespace

ad::TensorPtr model_forward(const Model& model, const GraphStructure& gs,
                            const ad::TensorPtr& features, ad::Tape* tape, ad::Mode mode,
                            Rng* dropout_rng) {
    if (features->cols != model.spec.widths[0]) {
        throw dim_error("model_forward: expected " + std::to_string(model.spec.widths[0]) +
                        " node features, got " + features->shape_str());
    }
    if (features->rows != gs.node_count) {
        throw dim_error("model_forward: features " + features->shape_str() +
                        " vs graph with " + std::to_string(gs.node_count) + " nodes");
    }
    if (uses_node_linear(model.spec.variant) && gs.node_count != model.spec.node_count) {
        throw dim_error("model is bound to its training topology: expected " +
                        std::to_string(model.spec.node_count) + " nodes, found " +
                        std::to_string(gs.node_count));
    }

    if (model.spec.variant == Variant::pointnet_baseline) {
        return pointnet_forward(model, tape, features);
    }
    if (model.spec.variant == Variant::graph_conv_baseline) {
        auto h = features;
        for (const char* name : {"gc1", "gc2", "gc3", "gc4", "gc5"}) {
            h = ad::relu(tape, conv_forward(model, tape, gs, name, h));
        }
        return h;
    }

    // edge_conv_linear / sage_conv_linear: conv, conv, [drop], node-linear,
    // [drop], conv, conv, ReLU after every layer.
    const auto placement = model.spec.dropout_placement;
    Rng* rng = dropout_rng;
    auto h = ad::relu(tape, conv_forward(model, tape, gs, "conv1", features));
    h = ad::relu(tape, conv_forward(model, tape, gs, "conv2", h));
    if (placement != DropoutPlacement::after) {
        h = ad::dropout(tape, h, model.spec.dropout_p, mode, rng);
    }
    h = ad::relu(tape, node_linear_forward(tape, h, model.param("lin.W"), model.param("lin.b")));
    if (placement != DropoutPlacement::before) {
        h = ad::dropout(tape, h, model.spec.dropout_p, mode, rng);
    }
    h = ad::relu(tape, conv_forward(model, tape, gs, "conv3", h));
    return ad::relu(tape, conv_forward(model, tape, gs, "conv4", h));
}

ad::TensorPtr features_tensor(const SurfaceGraph& g) {
    const int n = g.node_count();
    auto t = ad::make_tensor(n, 5);
    for (int i = 0; i < n; ++i) {
        for (int c = 0; c < 5; ++c) {
            t->at(i, c) = g.features[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)];
        }
    }
    return t;
}

}  // namespace forge
