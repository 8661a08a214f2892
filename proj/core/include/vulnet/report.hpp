// report.hpp -- evaluation report assembly and rendering.
//
// The report captures everything a run produced: seed, CV shape, dataset
// summary, per-learner settings and confusion matrices. Summaries are
// recomputed from the matrices on demand, so the file never disagrees
// with itself. Rendering offers a fixed-layout results table
// (`Technique, Acc(%), Pr(%), FP(%), Re(%)`, two-decimal percentages,
// with an Average row once several learners are present), a plain CSV,
// and the raw JSON.

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "vulnet/evalstats.hpp"
#include "vulnet/learners.hpp"

namespace vulnet {

struct DatasetSummary {
    long rows = 0;
    long positives = 0;
    long negatives = 0;

    bool operator==(const DatasetSummary&) const = default;
};

struct LearnerReport {
    LearnerSpec spec;
    std::vector<ConfusionMatrix> matrices;  // (repeat, fold) order
};

struct EvalReport {
    std::uint64_t seed = 0;
    int repeats = 0;
    int folds = 0;
    DatasetSummary dataset;
    std::vector<LearnerReport> learners;
};

// Deterministic JSON with all learner settings included; byte-identical
// for identical inputs (no timestamps).
void save_report(const EvalReport& report, const std::filesystem::path& path);
EvalReport load_report(const std::filesystem::path& path);

// The fixed-layout results table.
std::string render_table(const EvalReport& report);

// Same numbers as strict CSV (no spaces).
std::string render_csv(const EvalReport& report);

// The exact bytes save_report writes.
std::string render_json(const EvalReport& report);

// Display name of a learner row in the table: NB, RF, or MLP.
std::string technique_name(LearnerKind kind);

}  // namespace vulnet
