#include "commands.hpp"

#include <cstdio>
#include <iostream>
#include <sstream>

#include "vulnet/csv.hpp"
#include "vulnet/dataset.hpp"
#include "vulnet/errors.hpp"
#include "vulnet/extractor.hpp"
#include "vulnet/netmetrics.hpp"
#include "vulnet/vulnlabels.hpp"
#include "vulnet/wsn.hpp"

namespace vulnet::cli {

namespace {

void print_warnings(const std::vector<std::string>& warnings) {
    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
}

}  // namespace

LearnerSpec make_spec(LearnerKind kind, std::uint64_t seed, const HyperParams& hp) {
    LearnerSpec spec;
    spec.kind = kind;
    spec.seed = seed;
    spec.trees = hp.trees;
    spec.min_leaf = hp.min_leaf;
    spec.mtry = hp.mtry;
    spec.hidden = hp.hidden;
    spec.epochs = hp.epochs;
    spec.learning_rate = hp.learning_rate;
    validate_spec(spec);
    return spec;
}

std::vector<LearnerKind> parse_model_list(const std::string& models) {
    std::vector<LearnerKind> kinds;
    std::stringstream in(models);
    std::string token;
    while (std::getline(in, token, ',')) {
        const LearnerKind kind = parse_learner_kind(token);
        for (const LearnerKind seen : kinds)
            if (seen == kind)
                throw ValidationError("model '" + token + "' listed twice");
        kinds.push_back(kind);
    }
    if (kinds.empty()) throw ValidationError("no model given");
    return kinds;
}

void cmd_extract(const std::filesystem::path& src_dir, const std::string& extension,
                 const std::filesystem::path& out) {
    const minilang::ExtractResult result = minilang::extract_tree(src_dir, extension);
    print_warnings(result.warnings);
    for (const auto& u : result.unresolved)
        std::cerr << "warning: " << u.file << ":" << u.line << ": unresolved call to '"
                  << u.target << "' from " << u.caller_fn << "\n";
    save_facts(result.facts, out);
    std::cerr << "extracted " << result.facts.classes().size() << " classes, "
              << result.facts.functions().size() << " functions, "
              << result.facts.deps().size() << " deps\n";
}

void cmd_graph_build(const std::filesystem::path& facts_path, const std::filesystem::path& out) {
    const CodeFacts facts = load_facts(facts_path);
    const Wsn wsn = build_wsn(facts);
    save_wsn(wsn, out);
    std::cerr << "graph: " << wsn.nodes.size() << " nodes, " << wsn.edges.size() << " edges\n";
}

void cmd_metrics_compute(const std::filesystem::path& wsn_path,
                         const std::filesystem::path& facts_path,
                         const std::filesystem::path& out) {
    const Wsn wsn = load_wsn(wsn_path);
    const CodeFacts facts = load_facts(facts_path);
    const FeatureTable table = feature_table(wsn, facts);
    print_warnings(table.warnings);
    save_features(table.rows, out);
    std::cerr << "metrics: " << table.rows.size() << " rows\n";
}

void cmd_labels_ingest(const std::filesystem::path& advisories_path,
                       const std::filesystem::path& bugs_path,
                       const std::filesystem::path& diffs_dir,
                       const std::filesystem::path& facts_path,
                       const std::filesystem::path& out) {
    const std::vector<AdvisoryRecord> advisories = load_advisories(advisories_path);
    const std::vector<BugRecord> bugs = load_bugs(bugs_path);
    const CodeFacts facts = load_facts(facts_path);
    const DirDiffStore store(diffs_dir);
    const CountingResult counted = count_vulnerabilities(advisories, bugs, store, facts);
    print_warnings(counted.warnings);
    const std::vector<LabelRow> rows = label_rows(counted.table, facts);
    save_labels(rows, out);
    long vulnerable = 0;
    for (const auto& r : rows) vulnerable += r.label;
    std::cerr << "labels: " << rows.size() << " classes, " << vulnerable << " vulnerable\n";
}

void cmd_dataset_build(const std::filesystem::path& features_path,
                       const std::filesystem::path& labels_path, const std::string& balance,
                       std::uint64_t seed, const std::filesystem::path& out) {
    if (balance != "under" && balance != "none")
        throw ValidationError("unknown balance strategy '" + balance +
                              "' (expected under or none)");
    const std::vector<FeatureVector> features = load_features(features_path);
    const std::vector<LabelRow> labels = load_labels(labels_path);
    JoinResult joined = join_features_labels(features, labels);
    print_warnings(joined.warnings);
    const LabeledDataset ds =
        balance == "under" ? undersample(joined.ds, seed) : std::move(joined.ds);
    save_dataset(ds, out);
    std::cerr << "dataset: " << ds.rows.size() << " rows (" << ds.count_label(1)
              << " positive, " << ds.count_label(0) << " negative)\n";
}

EvalReport cmd_train_eval(const std::filesystem::path& dataset_path,
                          const std::vector<LearnerKind>& models, int repeats, int folds,
                          std::uint64_t seed, const HyperParams& hp,
                          const std::filesystem::path& out) {
    const LabeledDataset ds = load_dataset(dataset_path);

    EvalReport report;
    report.seed = seed;
    report.repeats = repeats;
    report.folds = folds;
    report.dataset = {static_cast<long>(ds.rows.size()), ds.count_label(1), ds.count_label(0)};
    for (const LearnerKind kind : models) {
        const LearnerSpec spec = make_spec(kind, seed, hp);
        LearnerReport lr;
        lr.spec = spec;
        lr.matrices = run_cv(ds, spec, repeats, folds, seed);
        report.learners.push_back(std::move(lr));
        std::cerr << "trained " << learner_kind_name(kind) << ": "
                  << report.learners.back().matrices.size() << " folds evaluated\n";
    }
    save_report(report, out);
    return report;
}

void cmd_stats_wilcoxon(const std::filesystem::path& features_path,
                        const std::filesystem::path& labels_path,
                        const std::filesystem::path& out) {
    const std::vector<FeatureVector> features = load_features(features_path);
    const std::vector<LabelRow> labels = load_labels(labels_path);
    JoinResult joined = join_features_labels(features, labels);
    print_warnings(joined.warnings);

    std::string text = "metric,u,p,method,significant\n";
    for (int f = 0; f < kFeatureCount; ++f) {
        std::vector<double> xs, ys;  // vulnerable vs not
        for (const auto& row : joined.ds.rows)
            (row.label == 1 ? xs : ys).push_back(row.features[f]);
        if (xs.empty() || ys.empty())
            throw ValidationError("rank-sum test needs classes of both labels");
        const WilcoxonResult res = wilcoxon_rank_sum(xs, ys);
        char buf[96];
        std::snprintf(buf, sizeof(buf), "%.1f,%.9g", res.u_statistic, res.p_value);
        text += std::string(kFeatureNames[f]) + ',' + buf + ',' + res.method + ',' +
                (res.significant_at_0_05 ? "true" : "false") + '\n';
    }
    csv::write_text_file(out, text);
    std::cerr << "rank-sum table written for " << kFeatureCount << " metrics\n";
}

void cmd_report_render(const std::filesystem::path& report_path, const std::string& format,
                       const std::filesystem::path& out) {
    const EvalReport report = load_report(report_path);
    std::string text;
    if (format == "table") text = render_table(report);
    else if (format == "csv") text = render_csv(report);
    else if (format == "json") text = render_json(report);
    else
        throw ValidationError("unknown format '" + format + "' (expected table, csv, or json)");

    if (out.empty()) std::cout << text;
    else csv::write_text_file(out, text);
}

}  // namespace vulnet::cli
