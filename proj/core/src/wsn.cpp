#include "vulnet/wsn.hpp"

#include <algorithm>
#include <set>
#include <tuple>

#include <nlohmann/json.hpp>

#include "vulnet/csv.hpp"
#include "vulnet/errors.hpp"

namespace vulnet {

namespace {

using ordered_json = nlohmann::ordered_json;

// Distinct (caller function, callee function) endpoints of the deps that
// cross from class i into class j. Function ids are unique, so distinct
// sets give the distinct-function counts directly.
struct CrossDeps {
    std::set<std::string> sources;
    std::set<std::string> targets;
};

CrossDeps cross_deps(const CodeFacts& facts, const std::string& class_i,
                     const std::string& class_j) {
    CrossDeps out;
    for (const auto& dep : facts.deps()) {
        const FunctionRecord* from = facts.find_function(dep.from_fn);
        const FunctionRecord* to = facts.find_function(dep.to_fn);
        if (from->class_id == class_i && to->class_id == class_j) {
            out.sources.insert(dep.from_fn);
            out.targets.insert(dep.to_fn);
        }
    }
    return out;
}

long function_count(const CodeFacts& facts, const std::string& class_id) {
    long n = 0;
    for (const auto& fn : facts.functions())
        if (fn.class_id == class_id) ++n;
    return n;
}

}  // namespace

bool Wsn::has_node(const std::string& id) const {
    return std::binary_search(nodes.begin(), nodes.end(), id);
}

DependencyTally tally_dependencies(const CodeFacts& facts, const std::string& class_i,
                                   const std::string& class_j) {
    if (class_i == class_j)
        throw ValidationError("tally requires two distinct classes, got '" + class_i + "' twice");
    if (!facts.find_class(class_i)) throw ValidationError("unknown class id '" + class_i + "'");
    if (!facts.find_class(class_j)) throw ValidationError("unknown class id '" + class_j + "'");

    DependencyTally t;
    t.vf_i = function_count(facts, class_i);
    t.vf_j = function_count(facts, class_j);
    const CrossDeps cd = cross_deps(facts, class_i, class_j);
    t.vf_ij = static_cast<long>(cd.sources.size());
    t.vf_ji = static_cast<long>(cd.targets.size());
    return t;
}

Rational edge_weight(const DependencyTally& tally) {
    if (tally.vf_i < 1 || tally.vf_j < 1)
        throw ValidationError("edge weight needs at least one function on each side");
    return Rational(tally.vf_ij, tally.vf_i) * Rational(tally.vf_ji, tally.vf_j);
}

Wsn build_wsn(const CodeFacts& facts) {
    Wsn wsn;
    wsn.nodes.reserve(facts.classes().size());
    for (const auto& cls : facts.classes()) wsn.nodes.push_back(cls.id);

    // Group cross-class dep endpoints per ordered class pair in one pass.
    std::map<std::pair<std::string, std::string>, CrossDeps> pairs;
    for (const auto& dep : facts.deps()) {
        const FunctionRecord* from = facts.find_function(dep.from_fn);
        const FunctionRecord* to = facts.find_function(dep.to_fn);
        if (from->class_id == to->class_id) continue;
        auto& cd = pairs[{from->class_id, to->class_id}];
        cd.sources.insert(dep.from_fn);
        cd.targets.insert(dep.to_fn);
    }

    std::map<std::string, long> fn_counts;
    for (const auto& fn : facts.functions()) ++fn_counts[fn.class_id];

    for (const auto& [key, cd] : pairs) {
        DependencyTally t;
        t.vf_i = fn_counts[key.first];
        t.vf_j = fn_counts[key.second];
        t.vf_ij = static_cast<long>(cd.sources.size());
        t.vf_ji = static_cast<long>(cd.targets.size());
        wsn.edges.push_back({key.first, key.second, edge_weight(t).to_double()});
    }
    return wsn;  // map iteration already yields canonical (from, to) order
}

void save_wsn(const Wsn& wsn, const std::filesystem::path& path) {
    ordered_json doc;
    doc["nodes"] = wsn.nodes;
    doc["edges"] = ordered_json::array();
    for (const auto& e : wsn.edges) {
        ordered_json je;
        je["from"] = e.from;
        je["to"] = e.to;
        je["weight"] = e.weight;
        doc["edges"].push_back(std::move(je));
    }
    csv::write_text_file(path, doc.dump(2) + "\n");
}

Wsn load_wsn(const std::filesystem::path& path) {
    const std::string text = csv::read_text_file(path);
    ordered_json doc;
    try {
        doc = ordered_json::parse(text);
    } catch (const ordered_json::parse_error& e) {
        throw ValidationError(path.string() + ": " + e.what());
    }
    if (!doc.is_object() || !doc.contains("nodes") || !doc.contains("edges"))
        throw ValidationError(path.string() + ": expected an object with nodes and edges");

    Wsn wsn;
    std::vector<std::string> problems;
    for (const auto& n : doc["nodes"]) {
        if (!n.is_string()) {
            problems.push_back("node entries must be strings");
            continue;
        }
        wsn.nodes.push_back(n.get<std::string>());
    }
    for (const auto& je : doc["edges"]) {
        if (!je.is_object() || !je.contains("from") || !je.contains("to") ||
            !je.contains("weight") || !je["from"].is_string() || !je["to"].is_string() ||
            !je["weight"].is_number()) {
            problems.push_back("edge entries must be {from, to, weight} objects");
            continue;
        }
        wsn.edges.push_back(
            {je["from"].get<std::string>(), je["to"].get<std::string>(), je["weight"].get<double>()});
    }

    std::sort(wsn.nodes.begin(), wsn.nodes.end());
    std::sort(wsn.edges.begin(), wsn.edges.end(), [](const WsnEdge& a, const WsnEdge& b) {
        return std::tie(a.from, a.to) < std::tie(b.from, b.to);
    });

    std::set<std::pair<std::string, std::string>> seen;
    for (const auto& e : wsn.edges) {
        if (!wsn.has_node(e.from) || !wsn.has_node(e.to))
            problems.push_back("edge " + e.from + " -> " + e.to + " references an unknown node");
        if (e.from == e.to) problems.push_back("self-loop on node " + e.from);
        if (!(e.weight > 0.0) || e.weight > 1.0)
            problems.push_back("edge " + e.from + " -> " + e.to + " has weight outside (0,1]");
        if (!seen.emplace(e.from, e.to).second)
            problems.push_back("duplicate edge " + e.from + " -> " + e.to);
    }
    for (std::size_t i = 1; i < wsn.nodes.size(); ++i)
        if (wsn.nodes[i] == wsn.nodes[i - 1]) problems.push_back("duplicate node " + wsn.nodes[i]);

    if (!problems.empty()) throw ValidationError("invalid network in " + path.string(), problems);
    return wsn;
}

}  // namespace vulnet
