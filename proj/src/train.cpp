#include "forge/train.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <sstream>

#include "forge/error.hpp"
#include "forge/log.hpp"

namespace forge {

std::string to_string(LossKind k) { return k == LossKind::mse ? "mse" : "mae"; }

LossKind loss_from_string(const std::string& name) {
    if (name == "mse") return LossKind::mse;
    if (name == "mae") return LossKind::mae;
    throw validation_error("unknown loss '" + name + "' (expected mse|mae)");
}

void TrainConfig::validate() const {
    if (!(learning_rate > 0)) throw validation_error("learning rate must be > 0");
    if (!(beta1 >= 0 && beta1 < 1) || !(beta2 >= 0 && beta2 < 1)) {
        throw validation_error("Adam betas must be in [0, 1)");
    }
    if (epochs < 1) throw validation_error("epochs must be >= 1");
    if (weight_decay < 0) throw validation_error("weight decay must be >= 0");
    if (plateau_check_interval < 1) throw validation_error("plateau interval must be >= 1");
}

namespace {

void check_loss_shapes(const ad::TensorPtr& pred, const ad::TensorPtr& target) {
    if (pred->rows != target->rows || pred->cols != target->cols) {
        throw dim_error("loss: prediction " + pred->shape_str() + " vs target " +
                        target->shape_str());
    }
}

}  // namespace

ad::TensorPtr loss_mae(ad::Tape* tape, const ad::TensorPtr& pred, const ad::TensorPtr& target) {
    check_loss_shapes(pred, target);
    return ad::mean_all(tape, ad::abs_val(tape, ad::sub(tape, pred, target)));
}

ad::TensorPtr loss_mse(ad::Tape* tape, const ad::TensorPtr& pred, const ad::TensorPtr& target) {
    check_loss_shapes(pred, target);
    return ad::mean_all(tape, ad::square(tape, ad::sub(tape, pred, target)));
}

AdamState AdamState::init(std::span<const ad::TensorPtr> params) {
    AdamState st;
    st.slots.reserve(params.size());
    for (const auto& p : params) {
        st.slots.push_back({std::vector<double>(p->size(), 0.0),
                            std::vector<double>(p->size(), 0.0)});
    }
    return st;
}

void adam_step(std::span<const ad::TensorPtr> params, AdamState& state,
               const TrainConfig& config) {
    if (state.slots.size() != params.size()) {
        throw dim_error("Adam state has " + std::to_string(state.slots.size()) +
                        " slots for " + std::to_string(params.size()) + " parameters");
    }
    state.step += 1;
    const double bc1 = 1.0 - std::pow(config.beta1, static_cast<double>(state.step));
    const double bc2 = 1.0 - std::pow(config.beta2, static_cast<double>(state.step));
    for (std::size_t pi = 0; pi < params.size(); ++pi) {
        auto& p = params[pi];
        auto& slot = state.slots[pi];
        if (slot.m.size() != p->size()) {
            throw dim_error("Adam state slot " + std::to_string(pi) +
                            " does not match parameter shape " + p->shape_str());
        }
        const bool has_grad = !p->grad.empty();
        for (std::size_t i = 0; i < p->size(); ++i) {
            const double g =
                (has_grad ? p->grad[i] : 0.0) + config.weight_decay * p->values[i];
            slot.m[i] = config.beta1 * slot.m[i] + (1.0 - config.beta1) * g;
            slot.v[i] = config.beta2 * slot.v[i] + (1.0 - config.beta2) * g * g;
            const double m_hat = slot.m[i] / bc1;
            const double v_hat = slot.v[i] / bc2;
            p->values[i] -= config.learning_rate * m_hat / (std::sqrt(v_hat) + config.epsilon);
        }
    }
}

std::string to_string(StopReason r) {
    return r == StopReason::plateau ? "plateau" : "epochs_exhausted";
}

namespace {

ad::TensorPtr target_tensor(const SurfaceGraph& g) {
    return ad::make_tensor(g.node_count(), 1, *g.wear);
}

// Raw MAE/MSE of a prediction without touching any tape.
std::pair<double, double> raw_errors(const std::vector<double>& pred,
                                     const std::vector<double>& target) {
    double abs_sum = 0.0, sq_sum = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const double d = pred[i] - target[i];
        abs_sum += std::abs(d);
        sq_sum += d * d;
    }
    const double n = static_cast<double>(pred.size());
    return {abs_sum / n, sq_sum / n};
}

double configured_loss(LossKind kind, double mae, double mse) {
    return kind == LossKind::mse ? mse : mae;
}

}  // namespace

TrainReport train_model(Model& model, const GraphStructure& gs,
                        std::span<const SurfaceGraph> train_graphs,
                        std::span<const SurfaceGraph> val_graphs, const TrainConfig& config,
                        std::span<const std::string> train_ids,
                        std::span<const std::string> val_ids) {
    config.validate();
    if (train_graphs.empty()) throw validation_error("training split is empty");
    for (const auto& g : train_graphs) {
        if (!g.wear) throw validation_error("training graph lacks wear targets");
        if (g.node_count() != gs.node_count) {
            throw validation_error("training graph has " + std::to_string(g.node_count()) +
                                   " nodes, topology has " + std::to_string(gs.node_count));
        }
    }

    const auto t_start = std::chrono::steady_clock::now();
    auto params = model.param_tensors();
    auto state = AdamState::init(params);
    Rng shuffle_rng(config.seed);
    Rng dropout_rng(config.seed ^ 0x9e3779b97f4a7c15ULL);

    // Cached tensors per training graph.
    std::vector<ad::TensorPtr> feats, targets;
    for (const auto& g : train_graphs) {
        feats.push_back(features_tensor(g));
        targets.push_back(target_tensor(g));
    }
    std::vector<ad::TensorPtr> val_feats;
    for (const auto& g : val_graphs) {
        if (!g.wear) throw validation_error("validation graph lacks wear targets");
        val_feats.push_back(features_tensor(g));
    }

    // Reference window for the first plateau check: the loss of the
    // untrained model over the training split.
    double prev_window = 0.0;
    if (config.plateau_relative_tolerance) {
        for (std::size_t i = 0; i < feats.size(); ++i) {
            auto out = model_forward(model, gs, feats[i], nullptr, ad::Mode::eval);
            auto [mae, mse] = raw_errors(out->values, *train_graphs[i].wear);
            prev_window += configured_loss(config.loss, mae, mse);
        }
        prev_window /= static_cast<double>(feats.size());
    }

    TrainReport report;
    report.loss = config.loss;
    std::vector<int> order(train_graphs.size());
    std::iota(order.begin(), order.end(), 0);

    double window_sum = 0.0;
    int window_len = 0;
    ad::Tape tape;

    for (int epoch = 1; epoch <= config.epochs; ++epoch) {
        const auto t_epoch = std::chrono::steady_clock::now();
        shuffle_rng.shuffle(order);

        double loss_sum = 0.0, mse_sum = 0.0;
        for (int gi : order) {
            auto pred = model_forward(model, gs, feats[static_cast<std::size_t>(gi)], &tape,
                                      ad::Mode::train, &dropout_rng);
            auto loss = config.loss == LossKind::mse
                            ? loss_mse(&tape, pred, targets[static_cast<std::size_t>(gi)])
                            : loss_mae(&tape, pred, targets[static_cast<std::size_t>(gi)]);
            const double loss_value = loss->values[0];
            if (!std::isfinite(loss_value)) {
                const std::string id = static_cast<std::size_t>(gi) < train_ids.size()
                                           ? train_ids[static_cast<std::size_t>(gi)]
                                           : std::to_string(gi);
                throw numeric_error("non-finite training loss at epoch " +
                                    std::to_string(epoch) + " on graph " + id);
            }
            auto [mae, mse] = raw_errors(pred->values, *train_graphs[static_cast<std::size_t>(gi)].wear);
            loss_sum += loss_value;
            mse_sum += mse;
            ad::backward(loss, tape);
            adam_step(params, state, config);
            for (auto& p : params) p->zero_grad();
        }

        EpochRecord rec;
        rec.epoch = epoch;
        rec.train_loss = loss_sum / static_cast<double>(train_graphs.size());
        rec.train_log_mse = std::log(mse_sum / static_cast<double>(train_graphs.size()));

        if (!val_graphs.empty()) {
            double abs_sum = 0.0, sq_sum = 0.0;
            std::size_t nodes = 0;
            for (std::size_t i = 0; i < val_graphs.size(); ++i) {
                auto out = model_forward(model, gs, val_feats[i], nullptr, ad::Mode::eval);
                const auto& tgt = *val_graphs[i].wear;
                for (std::size_t k = 0; k < tgt.size(); ++k) {
                    const double d = out->values[k] - tgt[k];
                    abs_sum += std::abs(d);
                    sq_sum += d * d;
                }
                nodes += tgt.size();
            }
            rec.val_mae = abs_sum / static_cast<double>(nodes);
            rec.val_mse = sq_sum / static_cast<double>(nodes);
        } else {
            rec.val_mae = std::numeric_limits<double>::quiet_NaN();
            rec.val_mse = std::numeric_limits<double>::quiet_NaN();
        }
        rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_epoch)
                          .count();
        report.epochs.push_back(rec);

        if (verbose_logging() && (epoch % 100 == 0 || epoch == 1)) {
            vlog("epoch " + std::to_string(epoch) + " " + to_string(config.loss) + " " +
                 std::to_string(rec.train_loss));
        }

        // Loss-plateau check on windows of plateau_check_interval epochs.
        window_sum += rec.train_loss;
        window_len += 1;
        if (config.plateau_relative_tolerance && window_len == config.plateau_check_interval) {
            const double window = window_sum / static_cast<double>(window_len);
            const double improvement =
                prev_window > 0.0 ? (prev_window - window) / prev_window : 0.0;
            if (improvement < *config.plateau_relative_tolerance) {
                report.stop_reason = StopReason::plateau;
                break;
            }
            prev_window = window;
            window_sum = 0.0;
            window_len = 0;
        }
    }

    report.final_train = evaluate(model, gs, train_graphs, train_ids);
    if (!val_graphs.empty()) {
        report.final_val = evaluate(model, gs, val_graphs, val_ids);
    }
    report.total_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return report;
}

std::string curve_to_csv(const TrainReport& report) {
    std::ostringstream os;
    os << "epoch,train_loss,train_log_mse,val_mae,val_mse,seconds\n";
    char buf[160];
    for (const auto& r : report.epochs) {
        std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g,%.17g,%.6f\n", r.epoch,
                      r.train_loss, r.train_log_mse, r.val_mae, r.val_mse, r.seconds);
        os << buf;
    }
    return os.str();
}

Prediction predict(const Model& model, const Normalization& norm, const UnstructuredMesh& mesh,
                   const MeshMetadata& meta) {
    const auto t0 = std::chrono::steady_clock::now();
    auto graph = apply_normalization(build_graph(mesh, meta), norm);
    auto gs = GraphStructure::build(graph.node_count(), graph.edges);
    auto feats = features_tensor(graph);

    const auto t1 = std::chrono::steady_clock::now();
    auto out = model_forward(model, gs, feats, nullptr, ad::Mode::eval);
    const auto t2 = std::chrono::steady_clock::now();

    Prediction p;
    p.mesh = mesh;
    std::vector<double> wear(mesh.points.size(), 0.0);
    for (int i = 0; i < graph.node_count(); ++i) {
        wear[static_cast<std::size_t>(graph.node_ids[static_cast<std::size_t>(i)])] =
            out->values[static_cast<std::size_t>(i)];
    }
    p.mesh.point_fields["wear_pred"] = std::move(wear);
    const auto t3 = std::chrono::steady_clock::now();
    p.inference_ms = std::chrono::duration<double, std::milli>(t2 - t1).count();
    p.total_ms = std::chrono::duration<double, std::milli>(t3 - t0).count();
    return p;
}

}  // namespace forge
