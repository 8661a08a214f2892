#include "vulnet/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "vulnet/csv.hpp"
#include "vulnet/errors.hpp"
#include "vulnet/parallel.hpp"
#include "vulnet/rng.hpp"

namespace vulnet {

JoinResult join_features_labels(const std::vector<FeatureVector>& features,
                                const std::vector<LabelRow>& labels) {
    std::map<std::string, const FeatureVector*> by_id;
    std::map<std::string, const LabelRow*> label_by_id;
    std::vector<std::string> problems;
    for (const auto& f : features)
        if (!by_id.emplace(f.class_id, &f).second)
            problems.push_back("duplicate feature row for " + f.class_id);
    for (const auto& l : labels)
        if (!label_by_id.emplace(l.class_id, &l).second)
            problems.push_back("duplicate label row for " + l.class_id);
    if (!problems.empty()) throw ValidationError("cannot join features with labels", problems);

    JoinResult out;
    for (const auto& [id, f] : by_id) {
        const auto it = label_by_id.find(id);
        if (it == label_by_id.end()) {
            out.warnings.push_back("feature row " + id + " has no label; excluded");
            continue;
        }
        LabeledRow row;
        row.class_id = id;
        row.features = feature_values(*f);
        row.label = it->second->label;
        out.ds.rows.push_back(std::move(row));
    }
    for (const auto& [id, l] : label_by_id)
        if (!by_id.count(id)) out.warnings.push_back("label row " + id + " has no features; excluded");

    if (out.ds.rows.empty())
        throw ValidationError("features and labels share no class ids");
    return out;
}

LabeledDataset undersample(const LabeledDataset& ds, std::uint64_t seed) {
    std::vector<std::size_t> idx0, idx1;
    for (std::size_t i = 0; i < ds.rows.size(); ++i)
        (ds.rows[i].label == 1 ? idx1 : idx0).push_back(i);
    if (idx0.empty() || idx1.empty())
        throw ValidationError("undersampling needs rows of both labels");

    const auto& minority = idx1.size() <= idx0.size() ? idx1 : idx0;
    const auto& majority = idx1.size() <= idx0.size() ? idx0 : idx1;

    LabeledDataset out;
    for (const std::size_t i : minority) out.rows.push_back(ds.rows[i]);
    Rng rng(seed);
    for (const std::size_t pick :
         rng.sample_without_replacement(majority.size(), minority.size()))
        out.rows.push_back(ds.rows[majority[pick]]);

    std::sort(out.rows.begin(), out.rows.end(),
              [](const LabeledRow& a, const LabeledRow& b) { return a.class_id < b.class_id; });
    return out;
}

FoldPlan stratified_folds(const LabeledDataset& ds, int k, std::uint64_t seed) {
    if (k < 2) throw ValidationError("fold count must be >= 2");

    std::vector<std::size_t> idx0, idx1;
    for (std::size_t i = 0; i < ds.rows.size(); ++i)
        (ds.rows[i].label == 1 ? idx1 : idx0).push_back(i);
    for (const auto* group : {&idx0, &idx1})
        if (static_cast<long>(group->size()) < k)
            throw ValidationError("each label needs at least " + std::to_string(k) +
                                  " rows, got " + std::to_string(group->size()));

    FoldPlan plan;
    plan.k = k;
    plan.assignments.assign(ds.rows.size(), -1);

    // Shuffled rows go round-robin over folds. The starting fold carries
    // over between label groups, so the folds holding an extra row form
    // consecutive cyclic windows, which bounds both the per-label and the
    // total fold-size spread by one.
    Rng rng(seed);
    int offset = 0;
    for (auto* group : {&idx0, &idx1}) {
        rng.shuffle(*group);
        for (std::size_t t = 0; t < group->size(); ++t)
            plan.assignments[(*group)[t]] = (offset + static_cast<int>(t % k)) % k;
        offset = (offset + static_cast<int>(group->size() % k)) % k;
    }
    return plan;
}

std::vector<ConfusionMatrix> run_cv(const LabeledDataset& ds, const LearnerSpec& spec,
                                    int repeats, int k, std::uint64_t seed) {
    if (repeats < 1) throw ValidationError("repeats must be >= 1");
    validate_spec(spec);

    std::vector<FoldPlan> plans;
    std::vector<std::uint64_t> repeat_seeds;
    plans.reserve(repeats);
    for (int r = 0; r < repeats; ++r) {
        const std::uint64_t repeat_seed = derive_seed(seed, static_cast<std::uint64_t>(r));
        repeat_seeds.push_back(repeat_seed);
        plans.push_back(stratified_folds(ds, k, repeat_seed));
    }

    const std::size_t jobs = static_cast<std::size_t>(repeats) * k;
    std::vector<ConfusionMatrix> matrices(jobs);
    parallel_for(jobs, [&](std::size_t job) {
        const int r = static_cast<int>(job) / k;
        const int f = static_cast<int>(job) % k;
        try {
            LabeledDataset train_slice;
            std::vector<int> actuals;
            std::vector<const LabeledRow*> test_rows;
            for (std::size_t i = 0; i < ds.rows.size(); ++i) {
                if (plans[r].assignments[i] == f) {
                    test_rows.push_back(&ds.rows[i]);
                    actuals.push_back(ds.rows[i].label);
                } else {
                    train_slice.rows.push_back(ds.rows[i]);
                }
            }
            LearnerSpec fold_spec = spec;
            fold_spec.seed = derive_seed(repeat_seeds[r], static_cast<std::uint64_t>(1 + f));
            const TrainedModel model = train(fold_spec, train_slice);
            std::vector<int> preds;
            preds.reserve(test_rows.size());
            for (const LabeledRow* row : test_rows)
                preds.push_back(classify(predict_proba(model, row->features)));
            matrices[job] = confusion(preds, actuals);
        } catch (const ValidationError& e) {
            throw ValidationError("repeat " + std::to_string(r) + ", fold " + std::to_string(f) +
                                  ": " + e.what());
        }
    });
    return matrices;
}

namespace {

std::string dataset_header() {
    std::string h = "class_id";
    for (const char* name : kFeatureNames) {
        h += ',';
        h += name;
    }
    h += ",label";
    return h;
}

}  // namespace

void save_dataset(const LabeledDataset& ds, const std::filesystem::path& path) {
    std::string out = dataset_header();
    out += '\n';
    for (const auto& r : ds.rows) {
        out += r.class_id;
        for (int f = 0; f < kFeatureCount; ++f) out += ',' + csv::format_real(r.features[f]);
        out += ',' + std::to_string(r.label);
        out += '\n';
    }
    csv::write_text_file(path, out);
}

LabeledDataset load_dataset(const std::filesystem::path& path) {
    const std::vector<std::string> lines = csv::read_lines(path);
    const std::string header = dataset_header();
    if (lines.empty() || lines[0] != header)
        throw ValidationError(path.string() + ": expected header '" + header + "'");

    LabeledDataset ds;
    std::vector<std::string> problems;
    std::set<std::string> seen;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        const std::vector<std::string> f = csv::split(lines[i]);
        const std::string where = path.string() + ":" + std::to_string(i + 1);
        if (f.size() != kFeatureCount + 2) {
            problems.push_back(where + ": expected " + std::to_string(kFeatureCount + 2) +
                               " fields, got " + std::to_string(f.size()));
            continue;
        }
        try {
            LabeledRow row;
            row.class_id = f[0];
            for (int c = 0; c < kFeatureCount; ++c) {
                row.features[c] = csv::parse_real(f[c + 1], where);
                if (!std::isfinite(row.features[c]))
                    throw ValidationError(where + ": non-finite feature value");
            }
            const long label = csv::parse_long(f[kFeatureCount + 1], where);
            if (label != 0 && label != 1)
                throw ValidationError(where + ": label must be 0 or 1, got " +
                                      f[kFeatureCount + 1]);
            row.label = static_cast<int>(label);
            if (!seen.insert(row.class_id).second)
                throw ValidationError(where + ": duplicate class id " + row.class_id);
            ds.rows.push_back(std::move(row));
        } catch (const ValidationError& e) {
            problems.push_back(e.what());
        }
    }
    if (!problems.empty()) throw ValidationError("invalid dataset", problems);
    return ds;
}

}  // namespace vulnet
