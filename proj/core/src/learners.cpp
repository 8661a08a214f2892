#include "vulnet/learners.hpp"

#include <algorithm>
#include <cmath>

#include "vulnet/errors.hpp"

namespace vulnet {

LearnerKind parse_learner_kind(const std::string& name) {
    if (name == "nb") return LearnerKind::NaiveBayes;
    if (name == "rf") return LearnerKind::RandomForest;
    if (name == "mlp") return LearnerKind::Mlp;
    throw ValidationError("unknown model '" + name + "' (expected nb, rf, or mlp)");
}

std::string learner_kind_name(LearnerKind kind) {
    switch (kind) {
        case LearnerKind::NaiveBayes: return "nb";
        case LearnerKind::RandomForest: return "rf";
        case LearnerKind::Mlp: return "mlp";
    }
    throw ValidationError("invalid learner kind");
}

void validate_spec(const LearnerSpec& spec) {
    std::vector<std::string> problems;
    if (spec.trees < 1) problems.push_back("trees must be >= 1");
    if (spec.min_leaf < 1) problems.push_back("min-leaf must be >= 1");
    if (spec.mtry < 0 || spec.mtry > kFeatureCount)
        problems.push_back("mtry must be in [0, " + std::to_string(kFeatureCount) + "]");
    if (spec.hidden < 1) problems.push_back("hidden must be >= 1");
    if (spec.epochs < 1) problems.push_back("epochs must be >= 1");
    if (!(spec.learning_rate > 0.0) || !std::isfinite(spec.learning_rate))
        problems.push_back("learning rate must be positive and finite");
    if (!problems.empty()) throw ValidationError("invalid learner settings", problems);
}

std::array<double, kFeatureCount> Standardizer::apply(
    const std::array<double, kFeatureCount>& x) const {
    std::array<double, kFeatureCount> out;
    for (int f = 0; f < kFeatureCount; ++f) out[f] = (x[f] - mean[f]) / scale[f];
    return out;
}

Standardizer fit_standardizer(const std::vector<LabeledRow>& rows) {
    if (rows.empty()) throw ValidationError("cannot standardize an empty slice");
    Standardizer st;
    const double n = static_cast<double>(rows.size());
    for (const auto& r : rows)
        for (int f = 0; f < kFeatureCount; ++f) st.mean[f] += r.features[f];
    for (int f = 0; f < kFeatureCount; ++f) st.mean[f] /= n;

    std::array<double, kFeatureCount> var{};
    for (const auto& r : rows)
        for (int f = 0; f < kFeatureCount; ++f) {
            const double d = r.features[f] - st.mean[f];
            var[f] += d * d;
        }
    for (int f = 0; f < kFeatureCount; ++f) {
        var[f] /= n;
        st.scale[f] = var[f] > 0.0 ? std::sqrt(var[f]) : 1.0;
    }
    return st;
}

std::vector<LabeledRow> prepare_training_rows(const LabeledDataset& ds) {
    if (ds.rows.empty()) throw ValidationError("empty training slice");

    std::vector<std::string> problems;
    bool saw0 = false, saw1 = false;
    for (const auto& r : ds.rows) {
        if (r.label == 0) saw0 = true;
        else if (r.label == 1) saw1 = true;
        else problems.push_back("row " + r.class_id + " has label " + std::to_string(r.label));
        for (int f = 0; f < kFeatureCount; ++f)
            if (!std::isfinite(r.features[f])) {
                problems.push_back("row " + r.class_id + " has a non-finite feature");
                break;
            }
    }
    if (!saw0 || !saw1) problems.push_back("training slice must contain both labels");
    if (!problems.empty()) throw ValidationError("degenerate training slice", problems);

    std::vector<LabeledRow> rows = ds.rows;
    std::sort(rows.begin(), rows.end(),
              [](const LabeledRow& a, const LabeledRow& b) { return a.class_id < b.class_id; });
    return rows;
}

namespace {

double gaussian_log_density(double x, double mean, double var) {
    constexpr double kLog2Pi = 1.8378770664093454836;
    const double d = x - mean;
    return -0.5 * (kLog2Pi + std::log(var) + d * d / var);
}

}  // namespace

NaiveBayesModel train_naive_bayes(const std::vector<LabeledRow>& rows) {
    const double n = static_cast<double>(rows.size());

    // Pooled per-feature variance sets the scale of the variance floor, so
    // a class with constant feature values cannot collapse the density.
    std::array<double, kFeatureCount> pooled_mean{}, pooled_var{};
    for (const auto& r : rows)
        for (int f = 0; f < kFeatureCount; ++f) pooled_mean[f] += r.features[f];
    for (int f = 0; f < kFeatureCount; ++f) pooled_mean[f] /= n;
    for (const auto& r : rows)
        for (int f = 0; f < kFeatureCount; ++f) {
            const double d = r.features[f] - pooled_mean[f];
            pooled_var[f] += d * d;
        }
    for (int f = 0; f < kFeatureCount; ++f) pooled_var[f] /= n;

    NaiveBayesModel m;
    std::array<double, kFeatureCount> sum0{}, sum1{};
    long n0 = 0, n1 = 0;
    for (const auto& r : rows) {
        auto& sum = r.label == 1 ? sum1 : sum0;
        (r.label == 1 ? n1 : n0)++;
        for (int f = 0; f < kFeatureCount; ++f) sum[f] += r.features[f];
    }
    for (int f = 0; f < kFeatureCount; ++f) {
        m.mean0[f] = sum0[f] / n0;
        m.mean1[f] = sum1[f] / n1;
    }
    for (const auto& r : rows) {
        auto& mean = r.label == 1 ? m.mean1 : m.mean0;
        auto& var = r.label == 1 ? m.var1 : m.var0;
        for (int f = 0; f < kFeatureCount; ++f) {
            const double d = r.features[f] - mean[f];
            var[f] += d * d;
        }
    }
    for (int f = 0; f < kFeatureCount; ++f) {
        const double floor = 1e-9 * (pooled_var[f] + 1e-12);
        m.var0[f] = std::max(m.var0[f] / n0, floor);
        m.var1[f] = std::max(m.var1[f] / n1, floor);
    }
    m.log_prior0 = std::log(n0 / n);
    m.log_prior1 = std::log(n1 / n);
    return m;
}

double predict_proba(const NaiveBayesModel& model, const std::array<double, kFeatureCount>& x) {
    double l0 = model.log_prior0;
    double l1 = model.log_prior1;
    for (int f = 0; f < kFeatureCount; ++f) {
        l0 += gaussian_log_density(x[f], model.mean0[f], model.var0[f]);
        l1 += gaussian_log_density(x[f], model.mean1[f], model.var1[f]);
    }
    // Posterior of class 1 as a sigmoid of the log-odds; sums with the
    // class-0 posterior to 1 by construction.
    return 1.0 / (1.0 + std::exp(l0 - l1));
}

int classify(double p) { return p > 0.5 ? 1 : 0; }

TrainedModel train(const LearnerSpec& spec, const LabeledDataset& ds) {
    validate_spec(spec);
    const std::vector<LabeledRow> rows = prepare_training_rows(ds);

    TrainedModel tm;
    tm.spec = spec;
    switch (spec.kind) {
        case LearnerKind::NaiveBayes:
            tm.model = train_naive_bayes(rows);
            break;
        case LearnerKind::RandomForest:
            tm.model = train_random_forest(spec, rows);
            break;
        case LearnerKind::Mlp:
            tm.model = train_mlp(spec, rows);
            break;
    }
    return tm;
}

double predict_proba(const TrainedModel& model, const std::array<double, kFeatureCount>& x) {
    return std::visit([&](const auto& m) { return predict_proba(m, x); }, model.model);
}

}  // namespace vulnet
