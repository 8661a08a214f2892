// commands.hpp -- one function per CLI stage.
//
// Each command reads and writes only its declared files and throws
// ValidationError or IoError; exit-code mapping lives in main. Warnings
// go to stderr.

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "vulnet/learners.hpp"
#include "vulnet/report.hpp"

namespace vulnet::cli {

// Hyperparameters shared by every learner row of a run.
struct HyperParams {
    int trees = 100;
    int min_leaf = 1;
    int mtry = 0;
    int hidden = 8;
    int epochs = 500;
    double learning_rate = 0.1;
};

LearnerSpec make_spec(LearnerKind kind, std::uint64_t seed, const HyperParams& hp);

// Comma-separated model list ("nb,rf,mlp") to kinds; rejects duplicates.
std::vector<LearnerKind> parse_model_list(const std::string& models);

void cmd_extract(const std::filesystem::path& src_dir, const std::string& extension,
                 const std::filesystem::path& out);

void cmd_graph_build(const std::filesystem::path& facts_path, const std::filesystem::path& out);

void cmd_metrics_compute(const std::filesystem::path& wsn_path,
                         const std::filesystem::path& facts_path,
                         const std::filesystem::path& out);

void cmd_labels_ingest(const std::filesystem::path& advisories_path,
                       const std::filesystem::path& bugs_path,
                       const std::filesystem::path& diffs_dir,
                       const std::filesystem::path& facts_path,
                       const std::filesystem::path& out);

// balance is "under" or "none".
void cmd_dataset_build(const std::filesystem::path& features_path,
                       const std::filesystem::path& labels_path, const std::string& balance,
                       std::uint64_t seed, const std::filesystem::path& out);

EvalReport cmd_train_eval(const std::filesystem::path& dataset_path,
                          const std::vector<LearnerKind>& models, int repeats, int folds,
                          std::uint64_t seed, const HyperParams& hp,
                          const std::filesystem::path& out);

void cmd_stats_wilcoxon(const std::filesystem::path& features_path,
                        const std::filesystem::path& labels_path,
                        const std::filesystem::path& out);

// format is "table", "csv", or "json"; empty out path prints to stdout.
void cmd_report_render(const std::filesystem::path& report_path, const std::string& format,
                       const std::filesystem::path& out);

}  // namespace vulnet::cli
