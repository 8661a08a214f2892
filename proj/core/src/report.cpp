#include "vulnet/report.hpp"

#include <cstdio>
#include <optional>

#include <nlohmann/json.hpp>

#include "vulnet/csv.hpp"
#include "vulnet/errors.hpp"

namespace vulnet {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string percent(const std::optional<double>& value) {
    if (!value) return "n/a";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", *value * 100.0);
    return buf;
}

struct TableRow {
    std::string technique;
    std::optional<double> acc, pr, fp, re;
};

std::vector<TableRow> table_rows(const EvalReport& report) {
    std::vector<TableRow> rows;
    for (const auto& lr : report.learners) {
        const AggregatedMeasures agg = aggregate(lr.matrices);
        rows.push_back({technique_name(lr.spec.kind), agg.mean.acc, agg.mean.pr,
                        agg.mean.fp_rate, agg.mean.re});
    }
    if (rows.size() > 1) {
        TableRow avg;
        avg.technique = "Average";
        auto mean_of = [&](std::optional<double> TableRow::* field) {
            double sum = 0.0;
            long n = 0;
            for (const auto& r : rows)
                if (r.*field) {
                    sum += *(r.*field);
                    ++n;
                }
            return n > 0 ? std::optional<double>(sum / n) : std::nullopt;
        };
        avg.acc = mean_of(&TableRow::acc);
        avg.pr = mean_of(&TableRow::pr);
        avg.fp = mean_of(&TableRow::fp);
        avg.re = mean_of(&TableRow::re);
        rows.push_back(std::move(avg));
    }
    return rows;
}

std::string render_rows(const EvalReport& report, const std::string& sep) {
    std::string out = "Technique" + sep + "Acc(%)" + sep + "Pr(%)" + sep + "FP(%)" + sep + "Re(%)";
    out += '\n';
    for (const auto& r : table_rows(report)) {
        out += r.technique + sep + percent(r.acc) + sep + percent(r.pr) + sep + percent(r.fp) +
               sep + percent(r.re);
        out += '\n';
    }
    return out;
}

ordered_json spec_to_json(const LearnerSpec& spec) {
    ordered_json j;
    j["seed"] = spec.seed;
    j["trees"] = spec.trees;
    j["min_leaf"] = spec.min_leaf;
    j["mtry"] = spec.mtry;
    j["hidden"] = spec.hidden;
    j["epochs"] = spec.epochs;
    j["learning_rate"] = spec.learning_rate;
    return j;
}

ordered_json summary_to_json(const AggregatedMeasures& agg) {
    auto one = [](const std::optional<double>& mean, long undefined) {
        ordered_json j;
        if (mean) j["mean"] = *mean;
        else j["mean"] = nullptr;
        j["undefined"] = undefined;
        return j;
    };
    ordered_json j;
    j["matrices"] = agg.matrices;
    j["acc"] = one(agg.mean.acc, agg.acc_undefined);
    j["pr"] = one(agg.mean.pr, agg.pr_undefined);
    j["fp"] = one(agg.mean.fp_rate, agg.fp_undefined);
    j["re"] = one(agg.mean.re, agg.re_undefined);
    return j;
}

}  // namespace

std::string technique_name(LearnerKind kind) {
    switch (kind) {
        case LearnerKind::NaiveBayes: return "NB";
        case LearnerKind::RandomForest: return "RF";
        case LearnerKind::Mlp: return "MLP";
    }
    throw ValidationError("invalid learner kind");
}

std::string render_json(const EvalReport& report) {
    ordered_json doc;
    doc["seed"] = report.seed;
    doc["repeats"] = report.repeats;
    doc["folds"] = report.folds;
    doc["dataset"]["rows"] = report.dataset.rows;
    doc["dataset"]["positives"] = report.dataset.positives;
    doc["dataset"]["negatives"] = report.dataset.negatives;

    doc["learners"] = ordered_json::array();
    for (const auto& lr : report.learners) {
        ordered_json jl;
        jl["model"] = learner_kind_name(lr.spec.kind);
        jl["settings"] = spec_to_json(lr.spec);
        jl["matrices"] = ordered_json::array();
        for (const auto& cm : lr.matrices) {
            ordered_json jm;
            jm["tp"] = cm.tp;
            jm["fp"] = cm.fp;
            jm["tn"] = cm.tn;
            jm["fn"] = cm.fn;
            jl["matrices"].push_back(std::move(jm));
        }
        jl["summary"] = summary_to_json(aggregate(lr.matrices));
        doc["learners"].push_back(std::move(jl));
    }

    // The rendered table rides along so the layout is visible in the file.
    doc["table"] = ordered_json::array();
    const std::string table = render_table(report);
    std::size_t start = 0;
    while (start < table.size()) {
        const std::size_t end = table.find('\n', start);
        doc["table"].push_back(table.substr(start, end - start));
        start = end + 1;
    }
    return doc.dump(2) + "\n";
}

void save_report(const EvalReport& report, const std::filesystem::path& path) {
    csv::write_text_file(path, render_json(report));
}

EvalReport load_report(const std::filesystem::path& path) {
    const std::string text = csv::read_text_file(path);
    ordered_json doc;
    try {
        doc = ordered_json::parse(text);
    } catch (const ordered_json::parse_error& e) {
        throw ValidationError(path.string() + ": " + e.what());
    }

    auto need = [&](const ordered_json& j, const char* key) -> const ordered_json& {
        if (!j.is_object() || !j.contains(key))
            throw ValidationError(path.string() + ": missing field '" + key + "'");
        return j[key];
    };

    EvalReport report;
    try {
        report.seed = need(doc, "seed").get<std::uint64_t>();
        report.repeats = need(doc, "repeats").get<int>();
        report.folds = need(doc, "folds").get<int>();
        const ordered_json& ds = need(doc, "dataset");
        report.dataset.rows = need(ds, "rows").get<long>();
        report.dataset.positives = need(ds, "positives").get<long>();
        report.dataset.negatives = need(ds, "negatives").get<long>();
        for (const ordered_json& jl : need(doc, "learners")) {
            LearnerReport lr;
            lr.spec.kind = parse_learner_kind(need(jl, "model").get<std::string>());
            const ordered_json& js = need(jl, "settings");
            lr.spec.seed = need(js, "seed").get<std::uint64_t>();
            lr.spec.trees = need(js, "trees").get<int>();
            lr.spec.min_leaf = need(js, "min_leaf").get<int>();
            lr.spec.mtry = need(js, "mtry").get<int>();
            lr.spec.hidden = need(js, "hidden").get<int>();
            lr.spec.epochs = need(js, "epochs").get<int>();
            lr.spec.learning_rate = need(js, "learning_rate").get<double>();
            for (const ordered_json& jm : need(jl, "matrices")) {
                ConfusionMatrix cm;
                cm.tp = need(jm, "tp").get<long>();
                cm.fp = need(jm, "fp").get<long>();
                cm.tn = need(jm, "tn").get<long>();
                cm.fn = need(jm, "fn").get<long>();
                if (cm.tp < 0 || cm.fp < 0 || cm.tn < 0 || cm.fn < 0)
                    throw ValidationError(path.string() + ": negative confusion cell");
                lr.matrices.push_back(cm);
            }
            report.learners.push_back(std::move(lr));
        }
    } catch (const ordered_json::exception& e) {
        throw ValidationError(path.string() + ": " + e.what());
    }
    return report;
}

std::string render_table(const EvalReport& report) { return render_rows(report, ", "); }

std::string render_csv(const EvalReport& report) { return render_rows(report, ","); }

}  // namespace vulnet
