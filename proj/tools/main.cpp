// main.cpp -- the vulnet executable: one binary, subcommand per stage.
//
// Exit codes: 0 success, 1 validation failure (including bad flags),
// 2 IO failure.

#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "commands.hpp"
#include "pipeline.hpp"
#include "vulnet/errors.hpp"
#include "vulnet/parallel.hpp"

namespace {

constexpr const char* kVersion = VULNET_VERSION;

// Pipeline override flags and the config keys they map to.
const std::vector<std::pair<const char*, const char*>> kPipelineFlags = {
    {"--source-dir", "source_dir"}, {"--ext", "source_ext"},
    {"--advisories", "advisories"}, {"--bugs", "bugs"},
    {"--diffs", "diffs"},           {"--out-dir", "out_dir"},
    {"--facts", "facts"},           {"--wsn", "wsn"},
    {"--features", "features"},     {"--labels", "labels"},
    {"--dataset", "dataset"},       {"--report", "report"},
    {"--seed", "seed"},             {"--repeats", "repeats"},
    {"--folds", "folds"},           {"--balance", "balance"},
    {"--model", "model"},           {"--trees", "trees"},
    {"--min-leaf", "min_leaf"},     {"--mtry", "mtry"},
    {"--hidden", "hidden"},         {"--epochs", "epochs"},
    {"--learning-rate", "learning_rate"},
};

CLI::App* make_sub(CLI::App* parent, const std::string& name, const std::string& desc) {
    CLI::App* sub = parent->add_subcommand(name, desc);
    sub->set_version_flag("--version", kVersion);
    sub->fallthrough();
    return sub;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"class-level vulnerability prediction toolchain"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);
    app.add_option_function<int>(
           "--threads", [](int n) { vulnet::set_max_threads(n); },
           "max worker threads (0 = all cores)")
        ->check(CLI::NonNegativeNumber);

    using vulnet::cli::HyperParams;

    // extract
    std::string src_dir, src_ext = ".ml";
    std::string extract_out;
    CLI::App* extract = make_sub(&app, "extract", "parse a source tree into code facts");
    extract->add_option("src", src_dir, "source directory")->required();
    extract->add_option("--ext", src_ext, "source file suffix (default .ml)");
    extract->add_option("-o,--out", extract_out, "facts output path (JSONL)")->required();
    extract->callback(
        [&] { vulnet::cli::cmd_extract(src_dir, src_ext, extract_out); });

    // graph build
    std::string gb_facts, gb_out;
    CLI::App* graph = make_sub(&app, "graph", "dependency network commands");
    graph->require_subcommand(1);
    CLI::App* graph_build = make_sub(graph, "build", "build the weighted class network");
    graph_build->add_option("facts", gb_facts, "facts file")->required();
    graph_build->add_option("-o,--out", gb_out, "network output path (JSON)")->required();
    graph_build->callback([&] { vulnet::cli::cmd_graph_build(gb_facts, gb_out); });

    // metrics compute
    std::string mc_wsn, mc_facts, mc_out;
    CLI::App* metrics = make_sub(&app, "metrics", "node metric commands");
    metrics->require_subcommand(1);
    CLI::App* metrics_compute = make_sub(metrics, "compute", "compute the seven node metrics");
    metrics_compute->add_option("wsn", mc_wsn, "network file")->required();
    metrics_compute->add_option("facts", mc_facts, "facts file")->required();
    metrics_compute->add_option("-o,--out", mc_out, "features output path (CSV)")->required();
    metrics_compute->callback(
        [&] { vulnet::cli::cmd_metrics_compute(mc_wsn, mc_facts, mc_out); });

    // labels ingest
    std::string li_advisories, li_bugs, li_diffs, li_facts, li_out;
    CLI::App* labels = make_sub(&app, "labels", "vulnerability label commands");
    labels->require_subcommand(1);
    CLI::App* labels_ingest = make_sub(labels, "ingest", "count vulnerabilities per class");
    labels_ingest->add_option("--advisories", li_advisories, "advisory records (JSONL)")
        ->required();
    labels_ingest->add_option("--bugs", li_bugs, "bug records (JSONL)")->required();
    labels_ingest->add_option("--diffs", li_diffs, "directory of patch diffs")->required();
    labels_ingest->add_option("--facts", li_facts, "facts file")->required();
    labels_ingest->add_option("-o,--out", li_out, "labels output path (CSV)")->required();
    labels_ingest->callback([&] {
        vulnet::cli::cmd_labels_ingest(li_advisories, li_bugs, li_diffs, li_facts, li_out);
    });

    // dataset build
    std::string db_features, db_labels, db_balance = "under", db_out;
    std::uint64_t db_seed = 1;
    CLI::App* dataset = make_sub(&app, "dataset", "dataset commands");
    dataset->require_subcommand(1);
    CLI::App* dataset_build = make_sub(dataset, "build", "join features with labels and balance");
    dataset_build->add_option("features", db_features, "features CSV")->required();
    dataset_build->add_option("labels", db_labels, "labels CSV")->required();
    dataset_build->add_option("--balance", db_balance, "under or none (default under)");
    dataset_build->add_option("--seed", db_seed, "sampling seed (default 1)");
    dataset_build->add_option("-o,--out", db_out, "dataset output path (CSV)")->required();
    dataset_build->callback([&] {
        vulnet::cli::cmd_dataset_build(db_features, db_labels, db_balance, db_seed, db_out);
    });

    // train-eval
    std::string te_dataset, te_models = "nb", te_out;
    int te_repeats = 10, te_folds = 10;
    std::uint64_t te_seed = 1;
    HyperParams te_hp;
    CLI::App* train_eval = make_sub(&app, "train-eval", "cross-validate learners on a dataset");
    train_eval->add_option("dataset", te_dataset, "dataset CSV")->required();
    train_eval->add_option("--model", te_models,
                           "comma list of nb, rf, mlp (default nb)");
    train_eval->add_option("--repeats", te_repeats, "CV repetitions (default 10)");
    train_eval->add_option("--folds", te_folds, "folds per repetition (default 10)");
    train_eval->add_option("--seed", te_seed, "master seed (default 1)");
    train_eval->add_option("--trees", te_hp.trees, "forest size (default 100)");
    train_eval->add_option("--min-leaf", te_hp.min_leaf, "minimum leaf size (default 1)");
    train_eval->add_option("--mtry", te_hp.mtry,
                           "features per split, 0 = ceil(sqrt(7)) (default 0)");
    train_eval->add_option("--hidden", te_hp.hidden, "hidden units (default 8)");
    train_eval->add_option("--epochs", te_hp.epochs, "training epochs (default 500)");
    train_eval->add_option("--lr,--learning-rate", te_hp.learning_rate,
                           "learning rate (default 0.1)");
    train_eval->add_option("-o,--out", te_out, "report output path (JSON)")->required();
    train_eval->callback([&] {
        vulnet::cli::cmd_train_eval(te_dataset, vulnet::cli::parse_model_list(te_models),
                                    te_repeats, te_folds, te_seed, te_hp, te_out);
    });

    // stats wilcoxon
    std::string sw_features, sw_labels, sw_out;
    CLI::App* stats = make_sub(&app, "stats", "statistical test commands");
    stats->require_subcommand(1);
    CLI::App* stats_wilcoxon =
        make_sub(stats, "wilcoxon", "rank-sum test per metric, vulnerable vs not");
    stats_wilcoxon->add_option("features", sw_features, "features CSV")->required();
    stats_wilcoxon->add_option("labels", sw_labels, "labels CSV")->required();
    stats_wilcoxon->add_option("-o,--out", sw_out, "test table output path (CSV)")->required();
    stats_wilcoxon->callback(
        [&] { vulnet::cli::cmd_stats_wilcoxon(sw_features, sw_labels, sw_out); });

    // report render
    std::string rr_report, rr_format = "table", rr_out;
    CLI::App* report = make_sub(&app, "report", "report commands");
    report->require_subcommand(1);
    CLI::App* report_render = make_sub(report, "render", "render a report file");
    report_render->add_option("report", rr_report, "report JSON")->required();
    report_render->add_option("--format", rr_format, "table, csv, or json (default table)");
    report_render->add_option("-o,--out", rr_out, "output path (default stdout)");
    report_render->callback(
        [&] { vulnet::cli::cmd_report_render(rr_report, rr_format, rr_out); });

    // pipeline run
    std::string pr_config;
    std::map<std::string, std::string> pr_storage;
    CLI::App* pipeline = make_sub(&app, "pipeline", "full-chain commands");
    pipeline->require_subcommand(1);
    CLI::App* pipeline_run = make_sub(pipeline, "run", "run every stage from a config file");
    pipeline_run->add_option("--config", pr_config, "flat key = value config file")->required();
    for (const auto& [flag, key] : kPipelineFlags)
        pipeline_run->add_option(flag, pr_storage[key],
                                 "override config key '" + std::string(key) + "'");
    pipeline_run->callback([&] {
        vulnet::cli::PipelineOverrides overrides;
        for (const auto& [flag, key] : kPipelineFlags)
            if (pipeline_run->count(flag) > 0) overrides.values[key] = pr_storage[key];
        vulnet::cli::cmd_pipeline_run(
            vulnet::cli::load_pipeline_config(pr_config, overrides));
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    } catch (const vulnet::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const vulnet::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
