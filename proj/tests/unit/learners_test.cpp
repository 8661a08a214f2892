#include <algorithm>
#include <cmath>
#include <cstdio>
#include <vector>

#include "doctest.h"
#include "support/oracles.hpp"
#include "vulnet/errors.hpp"
#include "vulnet/learners.hpp"
#include "vulnet/rng.hpp"

using namespace vulnet;

namespace {

LabeledRow make_row(const std::string& id, double feature0, int label) {
    LabeledRow row;
    row.class_id = id;
    row.features[0] = feature0;
    row.label = label;
    return row;
}

std::string row_name(int i) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "r%03d", i);
    return buf;
}

// Single informative feature: label 0 near 0, label 1 near 10.
LabeledDataset midpoint_dataset() {
    LabeledDataset ds;
    ds.rows = {make_row("a", -1.0, 0), make_row("b", 0.0, 0), make_row("c", 1.0, 0),
               make_row("d", 9.0, 1),  make_row("e", 10.0, 1), make_row("f", 11.0, 1)};
    return ds;
}

}  // namespace

TEST_CASE("learner kinds parse and render") {
    CHECK(parse_learner_kind("nb") == LearnerKind::NaiveBayes);
    CHECK(parse_learner_kind("rf") == LearnerKind::RandomForest);
    CHECK(parse_learner_kind("mlp") == LearnerKind::Mlp);
    CHECK_THROWS_AS(parse_learner_kind("svm"), ValidationError);
    CHECK(learner_kind_name(LearnerKind::NaiveBayes) == "nb");
    CHECK(learner_kind_name(LearnerKind::RandomForest) == "rf");
    CHECK(learner_kind_name(LearnerKind::Mlp) == "mlp");
}

TEST_CASE("spec validation bounds every hyperparameter") {
    LearnerSpec spec;
    CHECK_NOTHROW(validate_spec(spec));

    auto invalid = [](auto mutate) {
        LearnerSpec bad;
        mutate(bad);
        CHECK_THROWS_AS(validate_spec(bad), ValidationError);
    };
    invalid([](LearnerSpec& s) { s.trees = 0; });
    invalid([](LearnerSpec& s) { s.min_leaf = 0; });
    invalid([](LearnerSpec& s) { s.mtry = -1; });
    invalid([](LearnerSpec& s) { s.mtry = kFeatureCount + 1; });
    invalid([](LearnerSpec& s) { s.hidden = 0; });
    invalid([](LearnerSpec& s) { s.epochs = 0; });
    invalid([](LearnerSpec& s) { s.learning_rate = 0.0; });
    invalid([](LearnerSpec& s) { s.learning_rate = -0.5; });
}

TEST_CASE("standardizer centers and scales, keeping flat features intact") {
    std::vector<LabeledRow> rows = {make_row("a", 2.0, 0), make_row("b", 4.0, 1)};
    rows[0].features[1] = 5.0;
    rows[1].features[1] = 5.0;
    const Standardizer st = fit_standardizer(rows);
    CHECK(st.mean[0] == 3.0);
    CHECK(st.scale[0] == 1.0);
    CHECK(st.mean[1] == 5.0);
    CHECK(st.scale[1] == 1.0);

    const auto transformed = st.apply(rows[0].features);
    CHECK(transformed[0] == -1.0);
    CHECK(transformed[1] == 0.0);
}

TEST_CASE("training rows are validated and sorted") {
    LabeledDataset ds;
    ds.rows = {make_row("b", 1.0, 1), make_row("a", 0.0, 0)};
    const auto prepared = prepare_training_rows(ds);
    CHECK(prepared[0].class_id == "a");
    CHECK(prepared[1].class_id == "b");

    CHECK_THROWS_AS(static_cast<void>(prepare_training_rows(LabeledDataset{})),
                    ValidationError);

    LabeledDataset single;
    single.rows = {make_row("a", 0.0, 0), make_row("b", 1.0, 0)};
    CHECK_THROWS_AS(static_cast<void>(prepare_training_rows(single)), ValidationError);

    LabeledDataset infinite;
    infinite.rows = {make_row("a", 0.0, 0), make_row("b", 1.0 / 0.0, 1)};
    CHECK_THROWS_AS(static_cast<void>(prepare_training_rows(infinite)), ValidationError);
}

TEST_CASE("naive Bayes puts the decision boundary at the midpoint") {
    LearnerSpec spec;
    spec.kind = LearnerKind::NaiveBayes;
    const TrainedModel model = train(spec, midpoint_dataset());

    std::array<double, kFeatureCount> x{};
    x[0] = 5.0;
    CHECK(predict_proba(model, x) == doctest::Approx(0.5).epsilon(1e-9));
    x[0] = 4.0;
    CHECK(predict_proba(model, x) < 0.5);
    x[0] = 6.0;
    CHECK(predict_proba(model, x) > 0.5);
    x[0] = 10.0;
    CHECK(predict_proba(model, x) > 0.99);
}

TEST_CASE("naive Bayes complements sum to one") {
    LearnerSpec spec;
    spec.kind = LearnerKind::NaiveBayes;

    LabeledDataset ds = midpoint_dataset();
    const TrainedModel model = train(spec, ds);

    LabeledDataset flipped = ds;
    for (auto& r : flipped.rows) r.label = 1 - r.label;
    const TrainedModel mirror = train(spec, flipped);

    for (double v : {-2.0, 0.0, 3.0, 5.0, 8.0, 12.0}) {
        std::array<double, kFeatureCount> x{};
        x[0] = v;
        CHECK(predict_proba(model, x) + predict_proba(mirror, x) ==
              doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("naive Bayes with identical class densities answers one half") {
    LearnerSpec spec;
    spec.kind = LearnerKind::NaiveBayes;
    LabeledDataset ds;
    ds.rows = {make_row("a", 0.0, 0), make_row("b", 1.0, 0), make_row("c", 0.0, 1),
               make_row("d", 1.0, 1)};
    const TrainedModel model = train(spec, ds);
    for (double v : {-3.0, 0.0, 0.5, 7.0}) {
        std::array<double, kFeatureCount> x{};
        x[0] = v;
        CHECK(predict_proba(model, x) == doctest::Approx(0.5).epsilon(1e-12));
    }
}

TEST_CASE("naive Bayes survives constant features") {
    LearnerSpec spec;
    spec.kind = LearnerKind::NaiveBayes;
    LabeledDataset ds = midpoint_dataset();
    for (auto& r : ds.rows) r.features[3] = 42.0;
    const TrainedModel model = train(spec, ds);
    std::array<double, kFeatureCount> x{};
    x[0] = 10.0;
    x[3] = 42.0;
    const double p = predict_proba(model, x);
    CHECK(std::isfinite(p));
    CHECK(p > 0.5);
}

TEST_CASE("random forest separates linearly separable training data") {
    LabeledDataset ds;
    for (int i = 0; i < 10; ++i) ds.rows.push_back(make_row(row_name(i), -5.0 - i, 0));
    for (int i = 10; i < 20; ++i) ds.rows.push_back(make_row(row_name(i), 5.0 + i, 1));

    LearnerSpec spec;
    spec.kind = LearnerKind::RandomForest;
    spec.seed = 3;
    const TrainedModel model = train(spec, ds);

    int correct = 0;
    for (const auto& r : ds.rows)
        if (classify(predict_proba(model, r.features)) == r.label) ++correct;
    CHECK(correct == 20);
}

TEST_CASE("random forest training is reproducible per seed") {
    Rng rng(5);
    const LabeledDataset ds = test::synthetic_blobs(rng, 60, 2.0);

    LearnerSpec spec;
    spec.kind = LearnerKind::RandomForest;
    spec.seed = 11;
    spec.trees = 15;

    const RandomForestModel a =
        std::get<RandomForestModel>(train(spec, ds).model);
    const RandomForestModel b =
        std::get<RandomForestModel>(train(spec, ds).model);
    CHECK(a == b);
    CHECK(a.trees.size() == 15);
}

TEST_CASE("random forest probability is the vote fraction") {
    auto leaf = [](int label) {
        DecisionTree tree;
        TreeNode node;
        node.label = label;
        tree.nodes.push_back(node);
        return tree;
    };
    RandomForestModel model;
    model.trees = {leaf(1), leaf(1), leaf(0)};
    std::array<double, kFeatureCount> x{};
    CHECK(predict_proba(model, x) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));

    model.trees = {leaf(1), leaf(1)};
    CHECK(predict_proba(model, x) == 1.0);

    model.trees = {leaf(0)};
    CHECK(predict_proba(model, x) == 0.0);
}

TEST_CASE("network with all-zero parameters answers one half") {
    MlpModel model;
    model.hidden = 8;
    for (int f = 0; f < kFeatureCount; ++f) {
        model.standardizer.mean[f] = 0.0;
        model.standardizer.scale[f] = 1.0;
    }
    model.params.assign(mlp::param_count(8), 0.0);
    std::array<double, kFeatureCount> x{1.0, -2.0, 3.0, 0.0, 0.5, 0.25, 4.0};
    CHECK(predict_proba(model, x) == 0.5);
}

TEST_CASE("network learns xor within the documented budget") {
    LabeledDataset ds;
    auto xor_row = [](const std::string& id, double a, double b) {
        LabeledRow row;
        row.class_id = id;
        row.features[0] = a;
        row.features[1] = b;
        row.label = (a != b) ? 1 : 0;
        return row;
    };
    ds.rows = {xor_row("a", 0.0, 0.0), xor_row("b", 0.0, 1.0), xor_row("c", 1.0, 0.0),
               xor_row("d", 1.0, 1.0)};

    LearnerSpec spec;
    spec.kind = LearnerKind::Mlp;
    spec.seed = 1;
    spec.epochs = 5000;
    const TrainedModel model = train(spec, ds);

    for (const auto& r : ds.rows)
        CHECK(classify(predict_proba(model, r.features)) == r.label);
}

TEST_CASE("network training is reproducible per seed") {
    Rng rng(6);
    const LabeledDataset ds = test::synthetic_blobs(rng, 40, 2.0);

    LearnerSpec spec;
    spec.kind = LearnerKind::Mlp;
    spec.seed = 9;
    spec.epochs = 50;

    const MlpModel a = std::get<MlpModel>(train(spec, ds).model);
    const MlpModel b = std::get<MlpModel>(train(spec, ds).model);
    CHECK(a == b);
}

TEST_CASE("training is invariant to row order") {
    Rng rng(8);
    const LabeledDataset ds = test::synthetic_blobs(rng, 50, 1.5);
    LabeledDataset shuffled = ds;
    Rng order(99);
    order.shuffle(shuffled.rows);

    for (const LearnerKind kind :
         {LearnerKind::NaiveBayes, LearnerKind::RandomForest, LearnerKind::Mlp}) {
        LearnerSpec spec;
        spec.kind = kind;
        spec.seed = 21;
        spec.trees = 10;
        spec.epochs = 30;

        const TrainedModel a = train(spec, ds);
        const TrainedModel b = train(spec, shuffled);
        for (const auto& r : ds.rows)
            CHECK(predict_proba(a, r.features) == predict_proba(b, r.features));
    }
}

TEST_CASE("analytic network gradients match finite differences") {
    Rng rng(77);
    const int hidden = 4;
    const std::size_t params = mlp::param_count(hidden);

    std::vector<std::array<double, kFeatureCount>> inputs;
    std::vector<int> labels;
    for (int i = 0; i < 6; ++i) {
        std::array<double, kFeatureCount> x{};
        for (int f = 0; f < kFeatureCount; ++f) x[f] = rng.normal();
        inputs.push_back(x);
        labels.push_back(static_cast<int>(rng.below(2)));
    }

    for (int point = 0; point < 5; ++point) {
        std::vector<double> theta(params);
        for (auto& v : theta) v = rng.normal() * 0.5;

        const std::vector<double> grad = mlp::gradient(theta, hidden, inputs, labels);
        REQUIRE(grad.size() == params);

        const double h = 1e-5;
        for (std::size_t i = 0; i < params; ++i) {
            std::vector<double> hi = theta, lo = theta;
            hi[i] += h;
            lo[i] -= h;
            const double fd =
                (mlp::loss(hi, hidden, inputs, labels) - mlp::loss(lo, hidden, inputs, labels)) /
                (2.0 * h);
            const double rel =
                std::abs(grad[i] - fd) / std::max({1.0, std::abs(grad[i]), std::abs(fd)});
            CHECK(rel < 1e-4);
        }
    }
}

TEST_CASE("classification thresholds strictly above one half") {
    CHECK(classify(0.51) == 1);
    CHECK(classify(1.0) == 1);
    CHECK(classify(0.5) == 0);
    CHECK(classify(0.49) == 0);
    CHECK(classify(0.0) == 0);
}

TEST_CASE("probabilities stay inside the unit interval") {
    Rng rng(14);
    const LabeledDataset ds = test::synthetic_blobs(rng, 60, 1.0);

    for (const LearnerKind kind :
         {LearnerKind::NaiveBayes, LearnerKind::RandomForest, LearnerKind::Mlp}) {
        LearnerSpec spec;
        spec.kind = kind;
        spec.seed = 2;
        spec.trees = 10;
        spec.epochs = 20;
        const TrainedModel model = train(spec, ds);
        for (const auto& r : ds.rows) {
            const double p = predict_proba(model, r.features);
            CHECK(p >= 0.0);
            CHECK(p <= 1.0);
        }
    }
}
