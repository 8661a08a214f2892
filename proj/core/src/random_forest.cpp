#include <algorithm>
#include <cmath>
#include <limits>

#include "vulnet/errors.hpp"
#include "vulnet/learners.hpp"
#include "vulnet/rng.hpp"

namespace vulnet {

namespace {

double gini(long n0, long n1) {
    const double n = static_cast<double>(n0 + n1);
    if (n == 0.0) return 0.0;
    const double p0 = n0 / n;
    const double p1 = n1 / n;
    return 1.0 - p0 * p0 - p1 * p1;
}

// Grows one tree over bootstrap indices into the prepared row vector.
// Splits minimize the weighted Gini impurity of the children; candidate
// thresholds are midpoints between consecutive distinct feature values.
// Ties pick the first candidate in (sampled feature, ascending threshold)
// order, which keeps building deterministic.
class TreeBuilder {
public:
    TreeBuilder(const std::vector<LabeledRow>& rows, int mtry, int min_leaf, Rng& rng)
        : rows_(rows), mtry_(mtry), min_leaf_(min_leaf), rng_(rng) {}

    DecisionTree build(std::vector<int> idx) {
        DecisionTree tree;
        grow(tree.nodes, std::move(idx));
        return tree;
    }

private:
    int leaf(std::vector<TreeNode>& nodes, long n0, long n1) {
        TreeNode node;
        node.label = n1 > n0 ? 1 : 0;  // tie votes not vulnerable
        nodes.push_back(node);
        return static_cast<int>(nodes.size()) - 1;
    }

    int grow(std::vector<TreeNode>& nodes, std::vector<int> idx) {
        long n0 = 0, n1 = 0;
        for (const int i : idx) (rows_[i].label == 1 ? n1 : n0)++;
        if (n0 == 0 || n1 == 0 || static_cast<long>(idx.size()) < 2 * min_leaf_)
            return leaf(nodes, n0, n1);

        const std::vector<std::size_t> feats =
            rng_.sample_without_replacement(kFeatureCount, static_cast<std::size_t>(mtry_));

        int best_feature = -1;
        double best_threshold = 0.0;
        double best_impurity = std::numeric_limits<double>::infinity();
        const long n = static_cast<long>(idx.size());

        for (const std::size_t f : feats) {
            // Sort indices by this feature; prefix sums give child counts
            // for every candidate threshold in one pass.
            std::vector<int> order = idx;
            std::sort(order.begin(), order.end(), [&](int a, int b) {
                return rows_[a].features[f] < rows_[b].features[f];
            });
            long left0 = 0, left1 = 0;
            for (long split = 1; split < n; ++split) {
                const auto& prev = rows_[order[split - 1]];
                (prev.label == 1 ? left1 : left0)++;
                const double a = prev.features[f];
                const double b = rows_[order[split]].features[f];
                if (a == b) continue;  // no threshold separates equal values
                if (split < min_leaf_ || n - split < min_leaf_) continue;
                const double impurity =
                    (split * gini(left0, left1) + (n - split) * gini(n0 - left0, n1 - left1)) / n;
                if (impurity < best_impurity) {
                    best_impurity = impurity;
                    best_feature = static_cast<int>(f);
                    best_threshold = a + (b - a) / 2.0;
                }
            }
        }

        if (best_feature < 0) return leaf(nodes, n0, n1);

        std::vector<int> left_idx, right_idx;
        for (const int i : idx)
            (rows_[i].features[best_feature] <= best_threshold ? left_idx : right_idx).push_back(i);
        if (left_idx.empty() || right_idx.empty()) return leaf(nodes, n0, n1);

        const int me = static_cast<int>(nodes.size());
        nodes.push_back({best_feature, best_threshold, -1, -1, 0});
        const int left = grow(nodes, std::move(left_idx));
        const int right = grow(nodes, std::move(right_idx));
        nodes[me].left = left;
        nodes[me].right = right;
        return me;
    }

    const std::vector<LabeledRow>& rows_;
    int mtry_;
    int min_leaf_;
    Rng& rng_;
};

int tree_vote(const DecisionTree& tree, const std::array<double, kFeatureCount>& x) {
    int at = 0;
    while (tree.nodes[at].feature >= 0) {
        const TreeNode& node = tree.nodes[at];
        at = x[node.feature] <= node.threshold ? node.left : node.right;
    }
    return tree.nodes[at].label;
}

}  // namespace

RandomForestModel train_random_forest(const LearnerSpec& spec,
                                      const std::vector<LabeledRow>& rows) {
    const int mtry = spec.mtry == 0
                         ? static_cast<int>(std::ceil(std::sqrt(static_cast<double>(kFeatureCount))))
                         : spec.mtry;
    const std::size_t n = rows.size();

    RandomForestModel model;
    model.trees.reserve(spec.trees);
    for (int t = 0; t < spec.trees; ++t) {
        // Each tree owns a seed derived from (spec seed, tree index), so
        // the forest is reproducible and trees are independent.
        Rng rng(derive_seed(spec.seed, static_cast<std::uint64_t>(t)));
        std::vector<int> bootstrap(n);
        for (std::size_t k = 0; k < n; ++k) bootstrap[k] = static_cast<int>(rng.below(n));
        TreeBuilder builder(rows, mtry, spec.min_leaf, rng);
        model.trees.push_back(builder.build(std::move(bootstrap)));
    }
    return model;
}

double predict_proba(const RandomForestModel& model, const std::array<double, kFeatureCount>& x) {
    if (model.trees.empty()) throw ValidationError("forest has no trees");
    long votes = 0;
    for (const auto& tree : model.trees) votes += tree_vote(tree, x);
    return static_cast<double>(votes) / static_cast<double>(model.trees.size());
}

}  // namespace vulnet
