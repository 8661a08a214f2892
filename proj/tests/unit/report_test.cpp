#include <string>
#include <vector>

#include "doctest.h"
#include "support/testutil.hpp"
#include "vulnet/csv.hpp"
#include "vulnet/errors.hpp"
#include "vulnet/report.hpp"

using namespace vulnet;

namespace {

ConfusionMatrix cm_of(long tp, long fp, long tn, long fn) {
    ConfusionMatrix cm;
    cm.tp = tp;
    cm.fp = fp;
    cm.tn = tn;
    cm.fn = fn;
    return cm;
}

LearnerReport learner_of(LearnerKind kind, std::vector<ConfusionMatrix> matrices) {
    LearnerReport lr;
    lr.spec.kind = kind;
    lr.matrices = std::move(matrices);
    return lr;
}

EvalReport single_nb_report() {
    EvalReport report;
    report.seed = 7;
    report.repeats = 1;
    report.folds = 1;
    report.dataset = {200, 105, 95};
    report.learners = {learner_of(LearnerKind::NaiveBayes, {cm_of(90, 10, 85, 15)})};
    return report;
}

}  // namespace

TEST_CASE("technique names") {
    CHECK(technique_name(LearnerKind::NaiveBayes) == "NB");
    CHECK(technique_name(LearnerKind::RandomForest) == "RF");
    CHECK(technique_name(LearnerKind::Mlp) == "MLP");
}

TEST_CASE("table rendering for a single learner") {
    const std::string table = render_table(single_nb_report());
    CHECK(table ==
          "Technique, Acc(%), Pr(%), FP(%), Re(%)\n"
          "NB, 87.50, 90.00, 10.53, 85.71\n");
}

TEST_CASE("table rendering appends an average row for several learners") {
    EvalReport report = single_nb_report();
    report.learners.push_back(learner_of(LearnerKind::RandomForest, {cm_of(5, 0, 5, 0)}));
    const std::string table = render_table(report);
    CHECK(table ==
          "Technique, Acc(%), Pr(%), FP(%), Re(%)\n"
          "NB, 87.50, 90.00, 10.53, 85.71\n"
          "RF, 100.00, 100.00, 0.00, 100.00\n"
          "Average, 93.75, 95.00, 5.26, 92.86\n");
}

TEST_CASE("undefined measures render as n/a") {
    EvalReport report = single_nb_report();
    report.learners = {learner_of(LearnerKind::NaiveBayes, {cm_of(0, 0, 5, 5)})};
    CHECK(render_table(report) ==
          "Technique, Acc(%), Pr(%), FP(%), Re(%)\n"
          "NB, 50.00, n/a, 0.00, 0.00\n");

    // The average skips columns that are undefined for a learner.
    report.learners.push_back(learner_of(LearnerKind::RandomForest, {cm_of(5, 0, 5, 0)}));
    CHECK(render_table(report) ==
          "Technique, Acc(%), Pr(%), FP(%), Re(%)\n"
          "NB, 50.00, n/a, 0.00, 0.00\n"
          "RF, 100.00, 100.00, 0.00, 100.00\n"
          "Average, 75.00, 100.00, 0.00, 50.00\n");
}

TEST_CASE("csv rendering uses bare commas") {
    const std::string csv = render_csv(single_nb_report());
    CHECK(csv ==
          "Technique,Acc(%),Pr(%),FP(%),Re(%)\n"
          "NB,87.50,90.00,10.53,85.71\n");
}

TEST_CASE("json rendering is deterministic and ordered") {
    const EvalReport report = single_nb_report();
    const std::string a = render_json(report);
    const std::string b = render_json(report);
    CHECK(a == b);
    REQUIRE(!a.empty());
    CHECK(a.back() == '\n');
    CHECK(a.front() == '{');

    // Top-level keys appear in their declared order.
    const std::size_t seed_at = a.find("\"seed\"");
    const std::size_t repeats_at = a.find("\"repeats\"");
    const std::size_t folds_at = a.find("\"folds\"");
    const std::size_t dataset_at = a.find("\"dataset\"");
    const std::size_t learners_at = a.find("\"learners\"");
    const std::size_t table_at = a.find("\"table\"");
    REQUIRE(seed_at != std::string::npos);
    REQUIRE(table_at != std::string::npos);
    CHECK(seed_at < repeats_at);
    CHECK(repeats_at < folds_at);
    CHECK(folds_at < dataset_at);
    CHECK(dataset_at < learners_at);
    CHECK(learners_at < table_at);

    CHECK(a.find("\"model\": \"nb\"") != std::string::npos);
    CHECK(a.find("\"tp\": 90") != std::string::npos);
    CHECK(a.find("\"learning_rate\": 0.1") != std::string::npos);
    CHECK(a.find("NB, 87.50, 90.00, 10.53, 85.71") != std::string::npos);
}

TEST_CASE("save and load round-trip the report") {
    const test::TempDir tmp;
    const auto path = tmp.path() / "report.json";

    EvalReport report = single_nb_report();
    report.learners.push_back(
        learner_of(LearnerKind::Mlp, {cm_of(1, 2, 3, 4), cm_of(0, 0, 5, 5)}));
    report.learners[1].spec.seed = 99;
    report.learners[1].spec.epochs = 250;

    save_report(report, path);
    const EvalReport loaded = load_report(path);

    CHECK(loaded.seed == report.seed);
    CHECK(loaded.repeats == report.repeats);
    CHECK(loaded.folds == report.folds);
    CHECK(loaded.dataset == report.dataset);
    REQUIRE(loaded.learners.size() == 2);
    CHECK(loaded.learners[1].spec == report.learners[1].spec);
    CHECK(loaded.learners[1].matrices == report.learners[1].matrices);

    // A re-render of the loaded report reproduces the file bytes.
    CHECK(render_json(loaded) == render_json(report));
}

TEST_CASE("load rejects malformed reports") {
    const test::TempDir tmp;
    auto write_and_load = [&](const std::string& name, const std::string& text) {
        const auto path = tmp.path() / name;
        csv::write_text_file(path, text);
        return load_report(path);
    };

    CHECK_THROWS_AS(static_cast<void>(write_and_load("bad.json", "{nope")), ValidationError);
    CHECK_THROWS_AS(
        static_cast<void>(write_and_load("missing.json", R"({"seed": 1, "repeats": 1})")),
        ValidationError);
    CHECK_THROWS_AS(static_cast<void>(write_and_load("cell.json", R"({
        "seed": 1, "repeats": 1, "folds": 2,
        "dataset": {"rows": 2, "positives": 1, "negatives": 1},
        "learners": [{
            "model": "nb",
            "settings": {"seed": 0, "trees": 100, "min_leaf": 1, "mtry": 0,
                         "hidden": 8, "epochs": 500, "learning_rate": 0.1},
            "matrices": [{"tp": -1, "fp": 0, "tn": 1, "fn": 0}]
        }]
    })")),
                    ValidationError);
    CHECK_THROWS_AS(static_cast<void>(write_and_load("settings.json", R"({
        "seed": 1, "repeats": 1, "folds": 2,
        "dataset": {"rows": 2, "positives": 1, "negatives": 1},
        "learners": [{"model": "nb", "settings": {"seed": 0}, "matrices": []}]
    })")),
                    ValidationError);
    CHECK_THROWS_AS(static_cast<void>(load_report(tmp.path() / "absent.json")), IoError);
}
