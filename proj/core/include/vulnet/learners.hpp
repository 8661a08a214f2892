// learners.hpp -- three from-scratch classifiers with probability outputs.
//
// Gaussian naive Bayes, a random forest of Gini-split decision trees, and
// a one-hidden-layer feed-forward network trained by full-batch gradient
// descent on cross-entropy. Each emits the probability of the vulnerable
// class; classification thresholds at strictly more than 0.5.
//
// Training is deterministic given (spec, rows) and invariant to the order
// of the training slice: rows are sorted by class id on entry and every
// random draw derives from the spec seed.

#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "vulnet/labeled_data.hpp"

namespace vulnet {

enum class LearnerKind { NaiveBayes, RandomForest, Mlp };

// Accepts the CLI names nb, rf, mlp. Throws ValidationError otherwise.
LearnerKind parse_learner_kind(const std::string& name);
std::string learner_kind_name(LearnerKind kind);

struct LearnerSpec {
    LearnerKind kind = LearnerKind::NaiveBayes;
    std::uint64_t seed = 0;

    // Random forest.
    int trees = 100;
    int min_leaf = 1;
    int mtry = 0;  // features drawn per split; 0 = ceil(sqrt(feature count))

    // Feed-forward network.
    int hidden = 8;
    int epochs = 500;
    double learning_rate = 0.1;

    bool operator==(const LearnerSpec&) const = default;
};

// Throws ValidationError when a hyperparameter is out of range.
void validate_spec(const LearnerSpec& spec);

// Per-feature zero-mean/unit-variance transform fitted on training rows.
// A feature with zero variance keeps scale 1.
struct Standardizer {
    std::array<double, kFeatureCount> mean{};
    std::array<double, kFeatureCount> scale{};

    std::array<double, kFeatureCount> apply(const std::array<double, kFeatureCount>& x) const;

    bool operator==(const Standardizer&) const = default;
};

Standardizer fit_standardizer(const std::vector<LabeledRow>& rows);

struct NaiveBayesModel {
    double log_prior0 = 0.0;
    double log_prior1 = 0.0;
    std::array<double, kFeatureCount> mean0{}, var0{};
    std::array<double, kFeatureCount> mean1{}, var1{};

    bool operator==(const NaiveBayesModel&) const = default;
};

struct TreeNode {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    int label = 0;  // leaf vote

    bool operator==(const TreeNode&) const = default;
};

struct DecisionTree {
    std::vector<TreeNode> nodes;  // nodes[0] is the root

    bool operator==(const DecisionTree&) const = default;
};

struct RandomForestModel {
    std::vector<DecisionTree> trees;

    bool operator==(const RandomForestModel&) const = default;
};

struct MlpModel {
    int hidden = 0;
    Standardizer standardizer;
    std::vector<double> params;  // W1 row-major, then b1, w2, b2

    bool operator==(const MlpModel&) const = default;
};

struct TrainedModel {
    LearnerSpec spec;
    std::variant<NaiveBayesModel, RandomForestModel, MlpModel> model;
};

// Validates, sorts by class id, and dispatches on spec.kind. Throws
// ValidationError when rows are degenerate (empty, one label only, or
// non-finite features).
TrainedModel train(const LearnerSpec& spec, const LabeledDataset& ds);

double predict_proba(const TrainedModel& model, const std::array<double, kFeatureCount>& x);

// Vulnerable iff p is strictly more than 0.5.
int classify(double p);

// The shared entry validation: finite features, both labels present,
// result sorted by class id.
std::vector<LabeledRow> prepare_training_rows(const LabeledDataset& ds);

// Per-kind training over prepared rows, exposed for targeted tests.
NaiveBayesModel train_naive_bayes(const std::vector<LabeledRow>& rows);
RandomForestModel train_random_forest(const LearnerSpec& spec, const std::vector<LabeledRow>& rows);
MlpModel train_mlp(const LearnerSpec& spec, const std::vector<LabeledRow>& rows);

double predict_proba(const NaiveBayesModel& model, const std::array<double, kFeatureCount>& x);
double predict_proba(const RandomForestModel& model, const std::array<double, kFeatureCount>& x);
double predict_proba(const MlpModel& model, const std::array<double, kFeatureCount>& x);

// Network internals, exposed so gradients can be checked against finite
// differences. The parameter vector is laid out W1 row-major, b1, w2, b2
// over standardized inputs.
namespace mlp {

std::size_t param_count(int hidden);

double loss(const std::vector<double>& params, int hidden,
            const std::vector<std::array<double, kFeatureCount>>& inputs,
            const std::vector<int>& labels);

std::vector<double> gradient(const std::vector<double>& params, int hidden,
                             const std::vector<std::array<double, kFeatureCount>>& inputs,
                             const std::vector<int>& labels);

}  // namespace mlp

}  // namespace vulnet
