#include "forge/cli.hpp"

#include <json.hpp>

#include <cstdio>
#include <iostream>
#include <numeric>

#include "forge/checkpoint.hpp"
#include "forge/error.hpp"
#include "forge/io_util.hpp"
#include "forge/log.hpp"
#include "forge/pipeline.hpp"
#include "forge/synth.hpp"
#include "forge/train.hpp"
#include "forge/vtk_io.hpp"

namespace forge {

int run_gen_synth(const GenSynthOptions& opts) {
    if (opts.grid < 1) throw validation_error("--grid must be >= 1");
    if (opts.out.empty()) throw validation_error("--out directory is required");

    SynthConfig config;
    config.geometry = geometry_from_string(opts.geometry);
    config.target_surface_nodes = opts.target_surface_nodes;
    config.seed = opts.seed;
    config.parameter_grid = make_parameter_grid(opts.grid);

    auto records = generate_dataset(config);

    // Seeded split assignment: shuffled indices, train block first.
    std::vector<int> order(records.size());
    std::iota(order.begin(), order.end(), 0);
    Rng rng(opts.seed);
    rng.shuffle(order);
    const int n = static_cast<int>(records.size());
    int n_train = std::max(1, static_cast<int>(std::llround(opts.train_fraction * n)));
    int n_val = static_cast<int>(std::llround(opts.val_fraction * n));
    if (n_train + n_val > n) n_val = n - n_train;
    std::vector<std::string> split(records.size());
    for (int i = 0; i < n; ++i) {
        const auto idx = static_cast<std::size_t>(order[static_cast<std::size_t>(i)]);
        split[idx] = i < n_train ? "train" : (i < n_train + n_val ? "val" : "test");
    }

    std::filesystem::create_directories(opts.out / "meshes");
    Manifest manifest;
    manifest.wear_field = "wear";
    manifest.geometry = to_string(config.geometry);
    manifest.base_dir = opts.out;
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& rec = records[i];
        const std::string rel = "meshes/" + rec.meta.source_id + ".vtk";
        write_file_atomic(opts.out / rel, write_vtk_string(rec.mesh, rec.meta.source_id));
        manifest.records.push_back({rel, rec.meta.temperature, rec.meta.friction_coefficient,
                                    split[i], rec.meta.source_id});
    }
    write_manifest(manifest, opts.out / "manifest.txt");
    std::cout << "wrote " << records.size() << " meshes and manifest to " << opts.out.string()
              << "\n";
    return 0;
}

namespace {

nlohmann::json summary_json(const EvalSummary& s) {
    nlohmann::json per_graph = nlohmann::json::array();
    for (const auto& g : s.per_graph) {
        per_graph.push_back({{"id", g.id},
                             {"nodes", g.nodes},
                             {"mean_wear", g.mean_wear},
                             {"max_wear", g.max_wear},
                             {"mae", g.mae},
                             {"mse", g.mse},
                             {"error_percent", g.error_percent}});
    }
    return {{"mean_wear", s.mean_wear}, {"max_wear", s.max_wear},   {"mae", s.mae},
            {"mse", s.mse},             {"error_percent", s.error_percent},
            {"per_graph", per_graph}};
}

}  // namespace

int run_train(const TrainOptions& opts) {
    if (opts.out.empty()) throw validation_error("--out directory is required");
    auto manifest = read_manifest(opts.manifest);
    auto ds = load_dataset(manifest);
    if (ds.train.empty()) {
        throw validation_error("manifest '" + opts.manifest.string() +
                               "' has no train records");
    }

    ModelSpec spec;
    spec.variant = variant_from_string(opts.variant);
    spec.dropout_p = opts.dropout;
    spec.dropout_placement = dropout_placement_from_string(opts.dropout_placement);
    spec.node_count = ds.node_count;
    spec.seed = opts.seed;
    Model model = build_model(spec);

    TrainConfig config;
    config.learning_rate = opts.learning_rate;
    config.weight_decay = opts.weight_decay;
    config.epochs = opts.epochs;
    config.loss = loss_from_string(opts.loss);
    config.plateau_check_interval = opts.plateau_interval;
    config.plateau_relative_tolerance = opts.plateau_tolerance;
    config.seed = opts.seed;

    auto gs = GraphStructure::build(ds.node_count, ds.edges);
    auto report =
        train_model(model, gs, ds.train, ds.val, config, ds.train_ids, ds.val_ids);

    std::filesystem::create_directories(opts.out);
    save_checkpoint(opts.out / "checkpoint.json", model, ds.norm);
    write_file_atomic(opts.out / "curve.csv", curve_to_csv(report));

    nlohmann::json eval;
    eval["variant"] = to_string(spec.variant);
    eval["loss"] = to_string(config.loss);
    eval["epochs_run"] = report.epochs.size();
    eval["stop_reason"] = to_string(report.stop_reason);
    eval["total_seconds"] = report.total_seconds;
    eval["config"] = {{"learning_rate", config.learning_rate},
                      {"weight_decay", config.weight_decay},
                      {"dropout", spec.dropout_p},
                      {"dropout_placement", to_string(spec.dropout_placement)},
                      {"epochs", config.epochs},
                      {"seed", config.seed}};
    eval["train"] = summary_json(report.final_train);
    if (report.final_val) eval["val"] = summary_json(*report.final_val);
    write_file_atomic(opts.out / "eval.json", eval.dump(2) + "\n");

    std::cout << "trained " << to_string(spec.variant) << " for " << report.epochs.size()
              << " epochs (" << to_string(report.stop_reason) << ", "
              << std::to_string(report.total_seconds) << " s)\n";
    std::cout << format_summary_table(report.final_train, "train split");
    if (report.final_val) std::cout << format_summary_table(*report.final_val, "val split");
    return 0;
}

int run_predict(const PredictOptions& opts) {
    if (opts.friction < 0) throw validation_error("--friction must be >= 0");
    auto loaded = load_checkpoint(opts.checkpoint);
    auto mesh = read_vtk_file(opts.mesh);
    MeshMetadata meta{opts.temperature, opts.friction, opts.mesh.stem().string()};
    auto prediction = predict(loaded.model, loaded.norm, mesh, meta);
    write_file_atomic(opts.out, write_vtk_string(prediction.mesh, meta.source_id));
    char buf[128];
    std::snprintf(buf, sizeof buf, "inference %.3f ms (total %.3f ms)\n",
                  prediction.inference_ms, prediction.total_ms);
    std::cout << buf;
    return 0;
}

int run_evaluate(const EvaluateOptions& opts) {
    auto loaded = load_checkpoint(opts.checkpoint);
    auto manifest = read_manifest(opts.manifest);
    // Evaluation uses the checkpoint's normalization, not a refit.
    auto ds = load_dataset(manifest, true, &loaded.norm);
    const std::vector<SurfaceGraph>* graphs = nullptr;
    const std::vector<std::string>* ids = nullptr;
    if (opts.split == "train") {
        graphs = &ds.train;
        ids = &ds.train_ids;
    } else if (opts.split == "val") {
        graphs = &ds.val;
        ids = &ds.val_ids;
    } else if (opts.split == "test") {
        graphs = &ds.test;
        ids = &ds.test_ids;
    } else {
        throw validation_error("--split must be train|val|test, got '" + opts.split + "'");
    }
    if (graphs->empty()) {
        throw validation_error("split '" + opts.split + "' is empty in this manifest");
    }
    auto gs = GraphStructure::build(ds.node_count, ds.edges);
    auto summary = evaluate(loaded.model, gs, *graphs, *ids);
    std::cout << format_summary_table(summary, to_string(loaded.model.spec.variant) + " on " +
                                                   opts.split + " split");
    if (opts.out_json) {
        write_file_atomic(*opts.out_json, summary_json(summary).dump(2) + "\n");
    }
    return 0;
}

}  // namespace forge
