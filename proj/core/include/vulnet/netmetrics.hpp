// netmetrics.hpp -- the seven per-class node metrics.
//
// Size metrics (NumofLn, NumofFn, AveCCofFn) come from code facts; graph
// metrics (IntofIn, IntofOut, ClusCoeofNode, BetwofNode) come from the
// weighted network. Shortest paths use the edge weight literally as the
// edge length. Betweenness is the total count of shortest paths passing
// through a node over all ordered (source, target) pairs, as raw path
// counts, not fractions.

#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "vulnet/facts.hpp"
#include "vulnet/labeled_data.hpp"
#include "vulnet/wsn.hpp"

namespace vulnet {

// Relative tolerance for comparing path lengths when detecting ties.
// Assumes edge weights are large relative to 1e-9 times the path scale,
// which holds for weights from function-count rationals.
inline constexpr double kPathTieRelTol = 1e-9;

// True when a and b agree within kPathTieRelTol relative tolerance.
bool paths_tie(double a, double b);

struct SizeMetrics {
    long num_of_ln = 0;
    long num_of_fn = 0;
    double ave_cc_of_fn = 0.0;  // 0 by convention for function-less classes

    bool operator==(const SizeMetrics&) const = default;
};

struct NeighborhoodStats {
    long k = 0;  // neighbors, ignoring edge direction for membership
    long m = 0;  // directed edges among those neighbors, orientations counted separately

    bool operator==(const NeighborhoodStats&) const = default;
};

struct FeatureVector {
    std::string class_id;
    long num_of_ln = 0;
    long num_of_fn = 0;
    double ave_cc_of_fn = 0.0;
    double int_of_in = 0.0;
    double int_of_out = 0.0;
    double clus_coe = 0.0;
    double betw = 0.0;

    bool operator==(const FeatureVector&) const = default;
};

// The seven metric values as a fixed-order array (CSV column order).
std::array<double, kFeatureCount> feature_values(const FeatureVector& row);

SizeMetrics size_metrics(const CodeFacts& facts, const std::string& class_id);

double int_of_in(const Wsn& wsn, const std::string& node);
double int_of_out(const Wsn& wsn, const std::string& node);

NeighborhoodStats neighborhood(const Wsn& wsn, const std::string& node);
double clustering_coefficient(const Wsn& wsn, const std::string& node);

// Betweenness for every node at once; per-source passes run in parallel.
std::map<std::string, double> betweenness_all(const Wsn& wsn);

struct FeatureTable {
    std::vector<FeatureVector> rows;  // canonical class-id order
    std::vector<std::string> warnings;
};

// Assembles one row per class. The graph's nodes must be exactly the
// classes of the facts. Function-less classes are flagged in warnings.
FeatureTable feature_table(const Wsn& wsn, const CodeFacts& facts);

// CSV: class_id,NumofLn,NumofFn,AveCCofFn,IntofIn,IntofOut,ClusCoeofNode,BetwofNode
// Counts print as integers, reals with 6 fractional digits.
void save_features(const std::vector<FeatureVector>& rows, const std::filesystem::path& path);
std::vector<FeatureVector> load_features(const std::filesystem::path& path);

}  // namespace vulnet
