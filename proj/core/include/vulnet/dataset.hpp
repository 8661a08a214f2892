// dataset.hpp -- join, balance, and cross-validate.
//
// Joins the feature table with the label table, balances by keeping all
// minority rows and sampling the majority down to match, and runs
// repeated stratified k-fold cross-validation over a learner spec.

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "vulnet/evalstats.hpp"
#include "vulnet/labeled_data.hpp"
#include "vulnet/learners.hpp"
#include "vulnet/netmetrics.hpp"
#include "vulnet/vulnlabels.hpp"

namespace vulnet {

struct JoinResult {
    LabeledDataset ds;                  // inner join, canonical class-id order
    std::vector<std::string> warnings;  // ids present on one side only
};

// Throws ValidationError on duplicate ids or an empty intersection.
JoinResult join_features_labels(const std::vector<FeatureVector>& features,
                                const std::vector<LabelRow>& labels);

// All minority rows plus a seeded uniform sample of the majority, output
// in canonical class-id order. Throws ValidationError when a label has
// zero rows.
LabeledDataset undersample(const LabeledDataset& ds, std::uint64_t seed);

struct FoldPlan {
    int k = 0;
    std::vector<int> assignments;  // row index -> fold in [0, k)
};

// Seeded stratified split: fold sizes differ by at most one, and so do
// per-label counts across folds. Requires k >= 2 and at least k rows of
// each label.
FoldPlan stratified_folds(const LabeledDataset& ds, int k, std::uint64_t seed);

// repeats rounds of k-fold cross-validation; every repeat draws a fresh
// fold plan from a seed derived per repeat, and every (repeat, fold)
// training job gets its own derived learner seed. Returns repeats*k
// confusion matrices in (repeat, fold) order.
std::vector<ConfusionMatrix> run_cv(const LabeledDataset& ds, const LearnerSpec& spec,
                                    int repeats, int k, std::uint64_t seed);

// CSV: the feature columns plus a trailing label column; every feature
// prints with 6 fractional digits.
void save_dataset(const LabeledDataset& ds, const std::filesystem::path& path);
LabeledDataset load_dataset(const std::filesystem::path& path);

}  // namespace vulnet
