#include <CLI11.hpp>

#include <iostream>

#include "forge/cli.hpp"
#include "forge/error.hpp"

int main(int argc, char** argv) {
    CLI::App app{"FEM wear-prediction surrogate: surface-graph neural networks over "
                 "tetrahedral meshes"};
    app.require_subcommand(1);

    forge::GenSynthOptions gen;
    auto* gen_cmd = app.add_subcommand(
        "gen-synth", "Generate a synthetic die dataset (VTK meshes + manifest)");
    gen_cmd->add_option("--geometry", gen.geometry, "cylinder|cylindrical_sector")
        ->capture_default_str();
    gen_cmd->add_option("--grid", gen.grid, "number of (temperature, friction) grid points")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    gen_cmd->add_option("--surface-nodes", gen.target_surface_nodes,
                        "target surface node count")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    gen_cmd->add_option("--out", gen.out, "output directory")->required();
    gen_cmd->add_option("--seed", gen.seed, "rng seed")->capture_default_str();

    forge::TrainOptions train;
    auto* train_cmd = app.add_subcommand("train", "Train a surrogate on a manifest");
    train_cmd->add_option("--manifest", train.manifest, "dataset manifest path")->required();
    train_cmd->add_option("--variant", train.variant,
                          "graphconv|pointnet|edgeconv-l|sageconv-l")
        ->capture_default_str();
    train_cmd->add_option("--epochs", train.epochs, "training epochs")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    train_cmd->add_option("--lr", train.learning_rate, "Adam learning rate")
        ->capture_default_str();
    train_cmd->add_option("--weight-decay", train.weight_decay, "L2 weight decay")
        ->capture_default_str();
    train_cmd->add_option("--dropout", train.dropout, "dropout probability in [0,1)")
        ->capture_default_str();
    train_cmd->add_option("--dropout-placement", train.dropout_placement,
                          "both|before|after (relative to the node-linear layer)")
        ->capture_default_str();
    train_cmd->add_option("--loss", train.loss, "mse|mae")->capture_default_str();
    train_cmd->add_option("--seed", train.seed, "rng seed")->capture_default_str();
    train_cmd->add_option("--plateau-interval", train.plateau_interval,
                          "epochs per plateau-check window")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    double plateau_tol = 0.0;
    auto* tol_opt = train_cmd->add_option(
        "--plateau-tol", plateau_tol,
        "stop when windowed loss improves less than this fraction (omit to disable)");
    train_cmd->add_option("--out", train.out, "output directory")->required();

    forge::PredictOptions predict;
    auto* predict_cmd =
        app.add_subcommand("predict", "Predict wear for a mesh under new conditions");
    predict_cmd->add_option("--checkpoint", predict.checkpoint, "checkpoint path")->required();
    predict_cmd->add_option("--mesh", predict.mesh, "input VTK mesh")->required();
    predict_cmd->add_option("--temperature", predict.temperature, "initial temperature, °C")
        ->required();
    predict_cmd->add_option("--friction", predict.friction, "friction coefficient")
        ->required();
    predict_cmd->add_option("--out", predict.out, "output VTK path")->required();

    forge::EvaluateOptions evaluate;
    auto* eval_cmd = app.add_subcommand("evaluate", "Evaluate a checkpoint on a split");
    eval_cmd->add_option("--checkpoint", evaluate.checkpoint, "checkpoint path")->required();
    eval_cmd->add_option("--manifest", evaluate.manifest, "dataset manifest path")->required();
    eval_cmd->add_option("--split", evaluate.split, "train|val|test")->capture_default_str();
    std::filesystem::path eval_json;
    auto* eval_json_opt =
        eval_cmd->add_option("--out-json", eval_json, "also write a machine-readable summary");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen_cmd->parsed()) return forge::run_gen_synth(gen);
        if (train_cmd->parsed()) {
            if (tol_opt->count() > 0) train.plateau_tolerance = plateau_tol;
            return forge::run_train(train);
        }
        if (predict_cmd->parsed()) return forge::run_predict(predict);
        if (eval_cmd->parsed()) {
            if (eval_json_opt->count() > 0) evaluate.out_json = eval_json;
            return forge::run_evaluate(evaluate);
        }
    } catch (const forge::error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
