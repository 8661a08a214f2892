// labeled_data.hpp -- feature rows joined with binary labels.
//
// Shared leaf header for the dataset builder and the learners: the fixed
// feature column order and the row/dataset types that cross that boundary.

#pragma once

#include <array>
#include <string>
#include <vector>

namespace vulnet {

inline constexpr int kFeatureCount = 7;

// Column order of the feature CSV and of every feature array.
inline constexpr std::array<const char*, kFeatureCount> kFeatureNames = {
    "NumofLn", "NumofFn", "AveCCofFn", "IntofIn", "IntofOut", "ClusCoeofNode", "BetwofNode"};

struct LabeledRow {
    std::string class_id;
    std::array<double, kFeatureCount> features{};
    int label = 0;  // 1 = vulnerable

    bool operator==(const LabeledRow&) const = default;
};

struct LabeledDataset {
    std::vector<LabeledRow> rows;

    long count_label(int label) const {
        long n = 0;
        for (const auto& r : rows)
            if (r.label == label) ++n;
        return n;
    }

    bool operator==(const LabeledDataset&) const = default;
};

}  // namespace vulnet
