#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

namespace forge {

struct GenSynthOptions {
    std::string geometry = "cylinder";
    int grid = 40;
    int target_surface_nodes = 500;
    std::filesystem::path out;
    std::uint64_t seed = 0;
    double train_fraction = 0.75;
    double val_fraction = 0.125;
};

// Writes <out>/meshes/synth-XXX.vtk and <out>/manifest.txt. Returns 0.
int run_gen_synth(const GenSynthOptions& opts);

struct TrainOptions {
    std::filesystem::path manifest;
    std::string variant = "edgeconv-l";
    int epochs = 1000;
    double learning_rate = 1e-3;
    double weight_decay = 1e-5;
    double dropout = 0.2;
    std::string dropout_placement = "both";
    std::string loss = "mse";
    std::uint64_t seed = 0;
    int plateau_interval = 100;
    std::optional<double> plateau_tolerance;
    std::filesystem::path out;
};

// Writes <out>/checkpoint.json, <out>/curve.csv and <out>/eval.json.
int run_train(const TrainOptions& opts);

struct PredictOptions {
    std::filesystem::path checkpoint;
    std::filesystem::path mesh;
    double temperature = 0.0;
    double friction = 0.0;
    std::filesystem::path out;
};

// Writes the mesh with point field "wear_pred"; prints inference latency.
int run_predict(const PredictOptions& opts);

struct EvaluateOptions {
    std::filesystem::path checkpoint;
    std::filesystem::path manifest;
    std::string split = "test";
    std::optional<std::filesystem::path> out_json;
};

// Prints the Mean/Maximum/MAE/MSE/Error% table for the chosen split.
int run_evaluate(const EvaluateOptions& opts);

}  // namespace forge
