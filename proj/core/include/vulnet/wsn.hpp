// wsn.hpp -- weighted directed class-level software network.
//
// Nodes are class ids. A directed edge i -> j exists exactly when at least
// one function of i depends on a function of j; its weight is
//   (vf_ij / vf_i) * (vf_ji / vf_j)
// where vf_i, vf_j count the functions of each class, vf_ij counts the
// distinct functions of i with a dependency into j, and vf_ji counts the
// distinct functions of j depended on from i. Weights lie in (0, 1].
// Intra-class dependencies never form edges.

#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "vulnet/facts.hpp"
#include "vulnet/rational.hpp"

namespace vulnet {

struct DependencyTally {
    long vf_i = 0;   // functions in class i
    long vf_ij = 0;  // distinct functions of i depending on >=1 function of j
    long vf_j = 0;   // functions in class j
    long vf_ji = 0;  // distinct functions of j depended on by >=1 function of i

    bool operator==(const DependencyTally&) const = default;
};

struct WsnEdge {
    std::string from;
    std::string to;
    double weight = 0.0;  // in (0, 1]

    bool operator==(const WsnEdge&) const = default;
};

// Immutable after construction. Nodes and edges are kept in canonical
// order: nodes ascending, edges ascending by (from, to).
struct Wsn {
    std::vector<std::string> nodes;
    std::vector<WsnEdge> edges;

    bool has_node(const std::string& id) const;
};

// Counts the dependency tally for the ordered class pair (i, j).
// Throws ValidationError when either class is unknown or i == j.
DependencyTally tally_dependencies(const CodeFacts& facts, const std::string& class_i,
                                   const std::string& class_j);

// Evaluates the edge-weight formula exactly. Throws ValidationError when a
// class-side function count is zero (no valid tally has one).
Rational edge_weight(const DependencyTally& tally);

// Builds the network: one node per class, edges wherever vf_ij > 0.
Wsn build_wsn(const CodeFacts& facts);

// JSON serialization: {"nodes":[...],"edges":[{"from":..,"to":..,"weight":..}]}
// with nodes and edges in canonical order.
void save_wsn(const Wsn& wsn, const std::filesystem::path& path);
Wsn load_wsn(const std::filesystem::path& path);

}  // namespace vulnet
