#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "forge/mesh.hpp"
#include "forge/metrics.hpp"
#include "forge/model.hpp"
#include "forge/surface.hpp"

namespace forge {

enum class LossKind { mse, mae };

std::string to_string(LossKind k);
LossKind loss_from_string(const std::string& name);

struct TrainConfig {
    double learning_rate = 1e-3;
    double weight_decay = 1e-5;  // gradient-coupled L2: g <- g + wd * w
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    int epochs = 1000;
    LossKind loss = LossKind::mse;
    int plateau_check_interval = 100;
    // Relative improvement of the windowed mean loss below which training
    // stops. Unset disables plateau stopping and runs all epochs.
    std::optional<double> plateau_relative_tolerance;
    std::uint64_t seed = 0;

    void validate() const;
};

// MAE = (1/N) sum |pred - target|; MSE = (1/N) sum (pred - target)^2. Both
// are recorded on the tape so they can drive backpropagation.
ad::TensorPtr loss_mae(ad::Tape* tape, const ad::TensorPtr& pred, const ad::TensorPtr& target);
ad::TensorPtr loss_mse(ad::Tape* tape, const ad::TensorPtr& pred, const ad::TensorPtr& target);

// Per-parameter first/second moment estimates plus the shared timestep.
struct AdamState {
    struct Slot {
        std::vector<double> m, v;
    };
    std::vector<Slot> slots;
    long step = 0;

    static AdamState init(std::span<const ad::TensorPtr> params);
};

// One Adam update from the gradients currently on the parameters. Parameters
// with no accumulated gradient are treated as having gradient zero.
void adam_step(std::span<const ad::TensorPtr> params, AdamState& state,
               const TrainConfig& config);

enum class StopReason { epochs_exhausted, plateau };

std::string to_string(StopReason r);

struct EpochRecord {
    int epoch = 0;          // 1-based
    double train_loss = 0;  // epoch mean of the configured loss
    double train_log_mse = 0;
    double val_mae = 0;  // NaN when there is no validation split
    double val_mse = 0;
    double seconds = 0;
};

struct TrainReport {
    std::vector<EpochRecord> epochs;
    StopReason stop_reason = StopReason::epochs_exhausted;
    double total_seconds = 0;
    LossKind loss = LossKind::mse;
    EvalSummary final_train;
    std::optional<EvalSummary> final_val;
};

// Full-batch training: one forward/backward and one Adam step per graph per
// epoch, graphs visited in seeded-shuffled order. Aborts with numeric_error
// (naming epoch and graph) on a non-finite loss.
TrainReport train_model(Model& model, const GraphStructure& gs,
                        std::span<const SurfaceGraph> train_graphs,
                        std::span<const SurfaceGraph> val_graphs, const TrainConfig& config,
                        std::span<const std::string> train_ids = {},
                        std::span<const std::string> val_ids = {});

// CSV learning curve: epoch,train_loss,train_log_mse,val_mae,val_mse,seconds
std::string curve_to_csv(const TrainReport& report);

struct Prediction {
    UnstructuredMesh mesh;  // input mesh plus point field "wear_pred"
    double inference_ms = 0;  // eval-mode forward only
    double total_ms = 0;      // preprocessing + forward + write-back
};

// Builds the surface graph of the mesh, normalizes, runs an eval-mode
// forward and writes predicted wear back onto the mesh's surface points
// (non-surface points get 0).
Prediction predict(const Model& model, const Normalization& norm, const UnstructuredMesh& mesh,
                   const MeshMetadata& meta);

}  // namespace forge
