#include "pipeline.hpp"

#include <algorithm>
#include <set>

#include "commands.hpp"
#include "vulnet/csv.hpp"
#include "vulnet/errors.hpp"

namespace vulnet::cli {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && (s[a] == ' ' || s[a] == '\t')) ++a;
    while (b > a && (s[b - 1] == ' ' || s[b - 1] == '\t')) --b;
    return s.substr(a, b - a);
}

const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys = {
        "source_dir", "source_ext", "advisories", "bugs",    "diffs",
        "out_dir",    "facts",      "wsn",        "features", "labels",
        "dataset",    "report",     "seed",       "repeats",  "folds",
        "balance",    "model",      "trees",      "min_leaf", "mtry",
        "hidden",     "epochs",     "learning_rate"};
    return keys;
}

std::uint64_t parse_u64(const std::string& value, const std::string& key) {
    try {
        std::size_t used = 0;
        const std::uint64_t v = std::stoull(value, &used);
        if (used != value.size()) throw std::invalid_argument("trailing text");
        return v;
    } catch (const std::exception&) {
        throw ValidationError("config key '" + key + "': not an unsigned integer: " + value);
    }
}

int parse_int(const std::string& value, const std::string& key) {
    const long v = csv::parse_long(value, "config key '" + key + "'");
    if (v < -(1L << 30) || v > (1L << 30))
        throw ValidationError("config key '" + key + "': out of range: " + value);
    return static_cast<int>(v);
}

}  // namespace

PipelineConfig load_pipeline_config(const std::filesystem::path& path,
                                    const PipelineOverrides& overrides) {
    std::map<std::string, std::string> kv;
    const std::vector<std::string> lines = csv::read_lines(path);
    std::vector<std::string> problems;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        std::string line = lines[i];
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        const std::string where = path.string() + ":" + std::to_string(i + 1);
        if (eq == std::string::npos) {
            problems.push_back(where + ": expected 'key = value'");
            continue;
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (!known_keys().count(key)) {
            problems.push_back(where + ": unknown key '" + key + "'");
            continue;
        }
        if (!kv.emplace(key, value).second)
            problems.push_back(where + ": duplicate key '" + key + "'");
    }
    if (!problems.empty()) throw ValidationError("invalid config " + path.string(), problems);

    for (const auto& [key, value] : overrides.values) kv[key] = value;

    const std::filesystem::path base = path.has_parent_path()
                                           ? path.parent_path()
                                           : std::filesystem::path(".");
    auto resolve = [&](const std::string& raw) {
        const std::filesystem::path p(raw);
        return p.is_absolute() ? p : base / p;
    };

    PipelineConfig cfg;
    auto take = [&](const char* key) -> std::optional<std::string> {
        const auto it = kv.find(key);
        if (it == kv.end()) return std::nullopt;
        return it->second;
    };

    for (const char* required : {"source_dir", "advisories", "bugs", "diffs"})
        if (!kv.count(required))
            throw ValidationError("config " + path.string() + ": missing required key '" +
                                  std::string(required) + "'");

    cfg.source_dir = resolve(kv.at("source_dir"));
    if (const auto v = take("source_ext")) cfg.source_ext = *v;
    cfg.advisories = resolve(kv.at("advisories"));
    cfg.bugs = resolve(kv.at("bugs"));
    cfg.diffs = resolve(kv.at("diffs"));

    const std::filesystem::path out_dir = resolve(take("out_dir").value_or("out"));
    auto artifact = [&](const char* key, const char* fallback) {
        const auto v = take(key);
        return v ? resolve(*v) : out_dir / fallback;
    };
    cfg.facts = artifact("facts", "facts.jsonl");
    cfg.wsn = artifact("wsn", "wsn.json");
    cfg.features = artifact("features", "features.csv");
    cfg.labels = artifact("labels", "labels.csv");
    cfg.dataset = artifact("dataset", "dataset.csv");
    cfg.report = artifact("report", "report.json");

    if (const auto v = take("seed")) cfg.seed = parse_u64(*v, "seed");
    if (const auto v = take("repeats")) cfg.repeats = parse_int(*v, "repeats");
    if (const auto v = take("folds")) cfg.folds = parse_int(*v, "folds");
    if (const auto v = take("balance")) cfg.balance = *v;
    if (const auto v = take("model")) cfg.model = *v;
    if (const auto v = take("trees")) cfg.trees = parse_int(*v, "trees");
    if (const auto v = take("min_leaf")) cfg.min_leaf = parse_int(*v, "min_leaf");
    if (const auto v = take("mtry")) cfg.mtry = parse_int(*v, "mtry");
    if (const auto v = take("hidden")) cfg.hidden = parse_int(*v, "hidden");
    if (const auto v = take("epochs")) cfg.epochs = parse_int(*v, "epochs");
    if (const auto v = take("learning_rate"))
        cfg.learning_rate = csv::parse_real(*v, "config key 'learning_rate'");
    return cfg;
}

namespace {

template <typename Fn>
void stage(const char* name, Fn&& fn) {
    try {
        fn();
    } catch (const ValidationError& e) {
        ValidationError out(std::string(name) + ": " + e.what());
        throw out;
    } catch (const IoError& e) {
        throw IoError(std::string(name) + ": " + e.what());
    }
}

}  // namespace

void cmd_pipeline_run(const PipelineConfig& config) {
    stage("extract", [&] { cmd_extract(config.source_dir, config.source_ext, config.facts); });
    stage("graph build", [&] { cmd_graph_build(config.facts, config.wsn); });
    stage("metrics compute",
          [&] { cmd_metrics_compute(config.wsn, config.facts, config.features); });
    stage("labels ingest", [&] {
        cmd_labels_ingest(config.advisories, config.bugs, config.diffs, config.facts,
                          config.labels);
    });
    stage("dataset build", [&] {
        cmd_dataset_build(config.features, config.labels, config.balance, config.seed,
                          config.dataset);
    });
    stage("train-eval", [&] {
        HyperParams hp;
        hp.trees = config.trees;
        hp.min_leaf = config.min_leaf;
        hp.mtry = config.mtry;
        hp.hidden = config.hidden;
        hp.epochs = config.epochs;
        hp.learning_rate = config.learning_rate;
        cmd_train_eval(config.dataset, parse_model_list(config.model), config.repeats,
                       config.folds, config.seed, hp, config.report);
    });
}

}  // namespace vulnet::cli
