#include "vulnet/netmetrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <set>
#include <unordered_map>

#include "vulnet/csv.hpp"
#include "vulnet/errors.hpp"
#include "vulnet/parallel.hpp"

namespace vulnet {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Index-based view of the graph for the path algorithms.
struct IndexedGraph {
    std::vector<std::string> nodes;  // canonical order, index = id
    std::vector<std::vector<std::pair<int, double>>> out;  // out[u] = {(v, w)}
    std::vector<std::vector<std::pair<int, double>>> in;   // in[v] = {(u, w)}

    explicit IndexedGraph(const Wsn& wsn) : nodes(wsn.nodes) {
        out.resize(nodes.size());
        in.resize(nodes.size());
        for (const auto& e : wsn.edges) {
            const int u = index_of(e.from);
            const int v = index_of(e.to);
            out[u].push_back({v, e.weight});
            in[v].push_back({u, e.weight});
        }
    }

    int index_of(const std::string& id) const {
        const auto it = std::lower_bound(nodes.begin(), nodes.end(), id);
        if (it == nodes.end() || *it != id)
            throw ValidationError("unknown node '" + id + "'");
        return static_cast<int>(it - nodes.begin());
    }
};

int require_node(const Wsn& wsn, const std::string& node) {
    const auto it = std::lower_bound(wsn.nodes.begin(), wsn.nodes.end(), node);
    if (it == wsn.nodes.end() || *it != node)
        throw ValidationError("unknown node '" + node + "'");
    return static_cast<int>(it - wsn.nodes.begin());
}

// Per-source contribution to every other node's betweenness.
//
// After Dijkstra from s, the shortest-path DAG keeps edge (u, v) when
// dist[u] + w ties dist[v]. sigma[v] counts shortest s->v paths. ext[v]
// counts shortest paths that start at v and strictly extend within the
// DAG to any target: ext[v] = sum over DAG successors w of (1 + ext[w]).
// A node i then lies on sigma[i] * ext[i] shortest paths over all ordered
// pairs (s, t) with t != i, which is exactly its share for this source.
void betweenness_from_source(const IndexedGraph& g, int s, std::vector<double>& score) {
    const int n = static_cast<int>(g.nodes.size());
    std::vector<double> dist(n, kInf);
    dist[s] = 0.0;

    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
    heap.push({0.0, s});
    std::vector<char> done(n, 0);
    while (!heap.empty()) {
        const auto [d, u] = heap.top();
        heap.pop();
        if (done[u]) continue;
        done[u] = 1;
        for (const auto& [v, w] : g.out[u]) {
            const double nd = d + w;
            if (dist[v] == kInf || (nd < dist[v] && !paths_tie(nd, dist[v]))) {
                dist[v] = nd;
                heap.push({nd, v});
            }
        }
    }

    std::vector<int> order;  // reachable nodes by increasing distance
    order.reserve(n);
    for (int v = 0; v < n; ++v)
        if (dist[v] < kInf) order.push_back(v);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return dist[a] < dist[b]; });

    std::vector<double> sigma(n, 0.0);
    sigma[s] = 1.0;
    for (const int v : order) {
        if (v == s) continue;
        for (const auto& [u, w] : g.in[v])
            if (dist[u] < kInf && paths_tie(dist[u] + w, dist[v])) sigma[v] += sigma[u];
    }

    std::vector<double> ext(n, 0.0);
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        const int v = *it;
        for (const auto& [w, wt] : g.out[v])
            if (dist[w] < kInf && paths_tie(dist[v] + wt, dist[w])) ext[v] += 1.0 + ext[w];
    }

    for (const int v : order)
        if (v != s) score[v] += sigma[v] * ext[v];
}

}  // namespace

bool paths_tie(double a, double b) {
    return std::abs(a - b) <= kPathTieRelTol * std::max(std::abs(a), std::abs(b));
}

std::array<double, kFeatureCount> feature_values(const FeatureVector& row) {
    return {static_cast<double>(row.num_of_ln),
            static_cast<double>(row.num_of_fn),
            row.ave_cc_of_fn,
            row.int_of_in,
            row.int_of_out,
            row.clus_coe,
            row.betw};
}

SizeMetrics size_metrics(const CodeFacts& facts, const std::string& class_id) {
    const ClassRecord* cls = facts.find_class(class_id);
    if (!cls) throw ValidationError("unknown class id '" + class_id + "'");

    SizeMetrics m;
    m.num_of_ln = cls->loc;
    long cc_sum = 0;
    for (const auto& fn : facts.functions()) {
        if (fn.class_id != class_id) continue;
        ++m.num_of_fn;
        cc_sum += fn.cyclomatic;
    }
    m.ave_cc_of_fn = m.num_of_fn == 0 ? 0.0 : static_cast<double>(cc_sum) / m.num_of_fn;
    return m;
}

double int_of_in(const Wsn& wsn, const std::string& node) {
    require_node(wsn, node);
    double sum = 0.0;
    for (const auto& e : wsn.edges)
        if (e.to == node) sum += e.weight;
    return sum;
}

double int_of_out(const Wsn& wsn, const std::string& node) {
    require_node(wsn, node);
    double sum = 0.0;
    for (const auto& e : wsn.edges)
        if (e.from == node) sum += e.weight;
    return sum;
}

NeighborhoodStats neighborhood(const Wsn& wsn, const std::string& node) {
    require_node(wsn, node);
    std::set<std::string> neighbors;
    for (const auto& e : wsn.edges) {
        if (e.from == node) neighbors.insert(e.to);
        if (e.to == node) neighbors.insert(e.from);
    }
    neighbors.erase(node);

    NeighborhoodStats st;
    st.k = static_cast<long>(neighbors.size());
    for (const auto& e : wsn.edges)
        if (e.from != e.to && neighbors.count(e.from) && neighbors.count(e.to)) ++st.m;
    return st;
}

double clustering_coefficient(const Wsn& wsn, const std::string& node) {
    const NeighborhoodStats st = neighborhood(wsn, node);
    if (st.k <= 1) return 0.0;
    return static_cast<double>(st.m) / (static_cast<double>(st.k) * (st.k - 1));
}

std::map<std::string, double> betweenness_all(const Wsn& wsn) {
    for (const auto& e : wsn.edges)
        if (!(e.weight > 0.0))
            throw ValidationError("edge " + e.from + " -> " + e.to + " has non-positive weight");

    const IndexedGraph g(wsn);
    const std::size_t n = g.nodes.size();
    std::vector<std::vector<double>> partial(n, std::vector<double>(n, 0.0));
    parallel_for(n, [&](std::size_t s) {
        betweenness_from_source(g, static_cast<int>(s), partial[s]);
    });

    std::map<std::string, double> result;
    for (std::size_t v = 0; v < n; ++v) {
        double total = 0.0;
        for (std::size_t s = 0; s < n; ++s) total += partial[s][v];
        result[g.nodes[v]] = total;
    }
    return result;
}

FeatureTable feature_table(const Wsn& wsn, const CodeFacts& facts) {
    std::vector<std::string> problems;
    for (const auto& cls : facts.classes())
        if (!wsn.has_node(cls.id)) problems.push_back("class " + cls.id + " missing from graph");
    for (const auto& node : wsn.nodes)
        if (!facts.find_class(node)) problems.push_back("graph node " + node + " not in facts");
    if (!problems.empty())
        throw ValidationError("graph does not match code facts", problems);

    // Per-node incident weight sums in one edge pass.
    std::unordered_map<std::string, double> in_sum, out_sum;
    for (const auto& e : wsn.edges) {
        out_sum[e.from] += e.weight;
        in_sum[e.to] += e.weight;
    }
    const std::map<std::string, double> betw = betweenness_all(wsn);

    FeatureTable table;
    for (const auto& cls : facts.classes()) {
        const SizeMetrics sm = size_metrics(facts, cls.id);
        FeatureVector row;
        row.class_id = cls.id;
        row.num_of_ln = sm.num_of_ln;
        row.num_of_fn = sm.num_of_fn;
        row.ave_cc_of_fn = sm.ave_cc_of_fn;
        const auto in_it = in_sum.find(cls.id);
        const auto out_it = out_sum.find(cls.id);
        row.int_of_in = in_it == in_sum.end() ? 0.0 : in_it->second;
        row.int_of_out = out_it == out_sum.end() ? 0.0 : out_it->second;
        row.clus_coe = clustering_coefficient(wsn, cls.id);
        row.betw = betw.at(cls.id);
        if (sm.num_of_fn == 0)
            table.warnings.push_back("class " + cls.id +
                                     " has no functions; average complexity reported as 0");
        table.rows.push_back(std::move(row));
    }
    return table;
}

namespace {

const char* kFeatureHeader =
    "class_id,NumofLn,NumofFn,AveCCofFn,IntofIn,IntofOut,ClusCoeofNode,BetwofNode";

}  // namespace

void save_features(const std::vector<FeatureVector>& rows, const std::filesystem::path& path) {
    std::string out = kFeatureHeader;
    out += '\n';
    for (const auto& r : rows) {
        out += r.class_id;
        out += ',' + std::to_string(r.num_of_ln);
        out += ',' + std::to_string(r.num_of_fn);
        out += ',' + csv::format_real(r.ave_cc_of_fn);
        out += ',' + csv::format_real(r.int_of_in);
        out += ',' + csv::format_real(r.int_of_out);
        out += ',' + csv::format_real(r.clus_coe);
        out += ',' + csv::format_real(r.betw);
        out += '\n';
    }
    csv::write_text_file(path, out);
}

std::vector<FeatureVector> load_features(const std::filesystem::path& path) {
    const std::vector<std::string> lines = csv::read_lines(path);
    if (lines.empty() || lines[0] != kFeatureHeader)
        throw ValidationError(path.string() + ": expected header '" + kFeatureHeader + "'");

    std::vector<FeatureVector> rows;
    std::vector<std::string> problems;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        const std::vector<std::string> f = csv::split(lines[i]);
        const std::string where = path.string() + ":" + std::to_string(i + 1);
        if (f.size() != 8) {
            problems.push_back(where + ": expected 8 fields, got " + std::to_string(f.size()));
            continue;
        }
        try {
            FeatureVector row;
            row.class_id = f[0];
            row.num_of_ln = csv::parse_long(f[1], where);
            row.num_of_fn = csv::parse_long(f[2], where);
            row.ave_cc_of_fn = csv::parse_real(f[3], where);
            row.int_of_in = csv::parse_real(f[4], where);
            row.int_of_out = csv::parse_real(f[5], where);
            row.clus_coe = csv::parse_real(f[6], where);
            row.betw = csv::parse_real(f[7], where);
            rows.push_back(std::move(row));
        } catch (const ValidationError& e) {
            problems.push_back(e.what());
        }
    }
    if (!problems.empty()) throw ValidationError("invalid feature table", problems);
    return rows;
}

}  // namespace vulnet
