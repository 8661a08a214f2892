// pipeline.hpp -- full-chain run from a flat key=value config file.
//
// Keys (all optional unless noted): source_dir (required), source_ext,
// advisories (required), bugs (required), diffs (required), out_dir,
// facts, wsn, features, labels, dataset, report, seed, repeats, folds,
// balance, model, trees, min_leaf, mtry, hidden, epochs, learning_rate.
// Relative paths resolve against the config file's directory. A '#'
// starts a comment. Every key has a matching CLI flag that overrides it.

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>

namespace vulnet::cli {

struct PipelineConfig {
    std::filesystem::path source_dir;
    std::string source_ext = ".ml";
    std::filesystem::path advisories;
    std::filesystem::path bugs;
    std::filesystem::path diffs;

    std::filesystem::path facts;
    std::filesystem::path wsn;
    std::filesystem::path features;
    std::filesystem::path labels;
    std::filesystem::path dataset;
    std::filesystem::path report;

    std::uint64_t seed = 1;
    int repeats = 10;
    int folds = 10;
    std::string balance = "under";
    std::string model = "nb";

    int trees = 100;
    int min_leaf = 1;
    int mtry = 0;
    int hidden = 8;
    int epochs = 500;
    double learning_rate = 0.1;
};

// Values captured from CLI flags; set entries override the file.
struct PipelineOverrides {
    std::map<std::string, std::string> values;  // config key -> raw value
};

// Parses the file, applies overrides, resolves relative paths against
// the config directory, and fills artifact-path defaults under out_dir
// (default "out" beside the config).
PipelineConfig load_pipeline_config(const std::filesystem::path& path,
                                    const PipelineOverrides& overrides);

// Runs the whole chain: extract, graph, metrics, labels, dataset,
// train-eval. Stage errors surface prefixed with the stage name.
void cmd_pipeline_run(const PipelineConfig& config);

}  // namespace vulnet::cli
