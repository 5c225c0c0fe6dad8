#include "forge/checkpoint.hpp"

#include <json.hpp>

#include "forge/error.hpp"
#include "forge/io_util.hpp"

namespace forge {

namespace {
constexpr int kVersion = 1;
constexpr const char* kFormat = "forge-checkpoint";
}  // namespace

void save_checkpoint(const std::filesystem::path& path, const Model& model,
                     const Normalization& norm) {
    nlohmann::json j;
    j["format"] = kFormat;
    j["version"] = kVersion;
    j["spec"] = {
        {"variant", to_string(model.spec.variant)},
        {"widths", model.spec.widths},
        {"dropout_p", model.spec.dropout_p},
        {"dropout_placement", to_string(model.spec.dropout_placement)},
        {"node_count", model.spec.node_count},
        {"seed", model.spec.seed},
    };
    j["normalization"] = {{"shift", norm.shift}, {"scale", norm.scale}};
    nlohmann::json params = nlohmann::json::array();
    for (const auto& [name, t] : model.params) {
        params.push_back({{"name", name},
                          {"rows", t->rows},
                          {"cols", t->cols},
                          {"values", t->values}});
    }
    j["params"] = std::move(params);
    write_file_atomic(path, j.dump());
}

LoadedModel load_checkpoint(const std::filesystem::path& path) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_file(path));
    } catch (const nlohmann::json::parse_error& e) {
        throw parse_error("checkpoint '" + path.string() + "' is not valid JSON: " + e.what(),
                          1);
    }
    try {
        if (j.at("format").get<std::string>() != kFormat) {
            throw validation_error("'" + path.string() + "' is not a forge checkpoint");
        }
        if (j.at("version").get<int>() != kVersion) {
            throw validation_error("checkpoint version " +
                                   std::to_string(j.at("version").get<int>()) +
                                   " is not supported");
        }
        LoadedModel out;
        const auto& spec = j.at("spec");
        out.model.spec.variant = variant_from_string(spec.at("variant").get<std::string>());
        out.model.spec.widths = spec.at("widths").get<std::array<int, 5>>();
        out.model.spec.dropout_p = spec.at("dropout_p").get<double>();
        out.model.spec.dropout_placement =
            dropout_placement_from_string(spec.at("dropout_placement").get<std::string>());
        out.model.spec.node_count = spec.at("node_count").get<int>();
        out.model.spec.seed = spec.at("seed").get<std::uint64_t>();
        out.model.spec.validate();

        out.norm.shift = j.at("normalization").at("shift").get<std::array<double, 5>>();
        out.norm.scale = j.at("normalization").at("scale").get<std::array<double, 5>>();

        for (const auto& p : j.at("params")) {
            auto t = ad::make_tensor(p.at("rows").get<int>(), p.at("cols").get<int>(),
                                     p.at("values").get<std::vector<double>>(), true);
            out.model.params.emplace_back(p.at("name").get<std::string>(), std::move(t));
        }
        return out;
    } catch (const nlohmann::json::exception& e) {
        throw validation_error("checkpoint '" + path.string() + "' is malformed: " + e.what());
    }
}

}  // namespace forge
