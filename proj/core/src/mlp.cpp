#include <cmath>

#include "vulnet/errors.hpp"
#include "vulnet/learners.hpp"
#include "vulnet/rng.hpp"

namespace vulnet {

namespace {

double sigmoid(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

// log(1 + e^z), stable for large |z|.
double softplus(double z) {
    if (z > 0.0) return z + std::log1p(std::exp(-z));
    return std::log1p(std::exp(z));
}

// Offsets into the parameter vector: W1 row-major, b1, w2, b2.
struct Layout {
    int hidden;
    std::size_t w1_at(int h, int f) const {
        return static_cast<std::size_t>(h) * kFeatureCount + f;
    }
    std::size_t b1_at(int h) const {
        return static_cast<std::size_t>(hidden) * kFeatureCount + h;
    }
    std::size_t w2_at(int h) const {
        return static_cast<std::size_t>(hidden) * kFeatureCount + hidden + h;
    }
    std::size_t b2_at() const {
        return static_cast<std::size_t>(hidden) * kFeatureCount + 2 * static_cast<std::size_t>(hidden);
    }
};

// Pre-sigmoid output for one input; fills the hidden activations.
double forward(const std::vector<double>& params, const Layout& lay,
               const std::array<double, kFeatureCount>& x, std::vector<double>& hidden_act) {
    hidden_act.resize(lay.hidden);
    double z = params[lay.b2_at()];
    for (int h = 0; h < lay.hidden; ++h) {
        double pre = params[lay.b1_at(h)];
        for (int f = 0; f < kFeatureCount; ++f) pre += params[lay.w1_at(h, f)] * x[f];
        hidden_act[h] = std::tanh(pre);
        z += params[lay.w2_at(h)] * hidden_act[h];
    }
    return z;
}

void check_shapes(const std::vector<double>& params, int hidden,
                  const std::vector<std::array<double, kFeatureCount>>& inputs,
                  const std::vector<int>& labels) {
    if (hidden < 1) throw ValidationError("hidden must be >= 1");
    if (params.size() != mlp::param_count(hidden))
        throw ValidationError("parameter vector size mismatch");
    if (inputs.empty() || inputs.size() != labels.size())
        throw ValidationError("inputs and labels must be non-empty and equal-length");
}

}  // namespace

namespace mlp {

std::size_t param_count(int hidden) {
    return static_cast<std::size_t>(hidden) * kFeatureCount + 2 * static_cast<std::size_t>(hidden) +
           1;
}

double loss(const std::vector<double>& params, int hidden,
            const std::vector<std::array<double, kFeatureCount>>& inputs,
            const std::vector<int>& labels) {
    check_shapes(params, hidden, inputs, labels);
    const Layout lay{hidden};
    std::vector<double> act;
    double total = 0.0;
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        const double z = forward(params, lay, inputs[i], act);
        // Cross-entropy through the logit: softplus(z) - y*z.
        total += softplus(z) - static_cast<double>(labels[i]) * z;
    }
    return total / static_cast<double>(inputs.size());
}

std::vector<double> gradient(const std::vector<double>& params, int hidden,
                             const std::vector<std::array<double, kFeatureCount>>& inputs,
                             const std::vector<int>& labels) {
    check_shapes(params, hidden, inputs, labels);
    const Layout lay{hidden};
    std::vector<double> grad(params.size(), 0.0);
    std::vector<double> act;
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        const double z = forward(params, lay, inputs[i], act);
        const double dz = sigmoid(z) - static_cast<double>(labels[i]);
        grad[lay.b2_at()] += dz;
        for (int h = 0; h < hidden; ++h) {
            grad[lay.w2_at(h)] += dz * act[h];
            const double dpre = dz * params[lay.w2_at(h)] * (1.0 - act[h] * act[h]);
            grad[lay.b1_at(h)] += dpre;
            for (int f = 0; f < kFeatureCount; ++f)
                grad[lay.w1_at(h, f)] += dpre * inputs[i][f];
        }
    }
    const double n = static_cast<double>(inputs.size());
    for (double& g : grad) g /= n;
    return grad;
}

}  // namespace mlp

MlpModel train_mlp(const LearnerSpec& spec, const std::vector<LabeledRow>& rows) {
    MlpModel model;
    model.hidden = spec.hidden;
    model.standardizer = fit_standardizer(rows);

    std::vector<std::array<double, kFeatureCount>> inputs;
    std::vector<int> labels;
    inputs.reserve(rows.size());
    labels.reserve(rows.size());
    for (const auto& r : rows) {
        inputs.push_back(model.standardizer.apply(r.features));
        labels.push_back(r.label);
    }

    Rng rng(spec.seed);
    model.params.resize(mlp::param_count(spec.hidden));
    for (double& p : model.params) p = rng.unit_real() - 0.5;

    for (int epoch = 0; epoch < spec.epochs; ++epoch) {
        const std::vector<double> grad = mlp::gradient(model.params, spec.hidden, inputs, labels);
        for (std::size_t i = 0; i < model.params.size(); ++i)
            model.params[i] -= spec.learning_rate * grad[i];
    }
    return model;
}

double predict_proba(const MlpModel& model, const std::array<double, kFeatureCount>& x) {
    const Layout lay{model.hidden};
    std::vector<double> act;
    return sigmoid(forward(model.params, lay, model.standardizer.apply(x), act));
}

}  // namespace vulnet
