// evalstats.hpp -- confusion-matrix measures and the rank-sum test.
//
// Measures follow the four formulas Acc=(TP+TN)/total, Pr=TP/(TP+FP),
// FP=FP/(FP+TN), Re=TP/(TP+FN). A measure with a zero denominator is
// undefined: it is reported as absent and excluded from averages with an
// exclusion count, never coerced to 0.
//
// The rank-sum test is Mann-Whitney U with midranks. p is two-sided:
// exact by enumeration of rank assignments when the combined sample has
// at most 12 values and no ties, otherwise a normal approximation with
// tie correction and continuity correction.

#pragma once

#include <optional>
#include <string>
#include <vector>

namespace vulnet {

struct ConfusionMatrix {
    long tp = 0;
    long fp = 0;
    long tn = 0;
    long fn = 0;

    long total() const { return tp + fp + tn + fn; }

    bool operator==(const ConfusionMatrix&) const = default;
};

// Cell counts for prediction/actual label vectors (labels 0/1).
// Throws ValidationError on length mismatch or empty input.
ConfusionMatrix confusion(const std::vector<int>& predictions, const std::vector<int>& actuals);

struct MeasureSet {
    std::optional<double> acc;
    std::optional<double> pr;
    std::optional<double> fp_rate;
    std::optional<double> re;

    bool operator==(const MeasureSet&) const = default;
};

MeasureSet measures(const ConfusionMatrix& cm);

struct AggregatedMeasures {
    MeasureSet mean;       // per-measure mean over the cells where it is defined
    long matrices = 0;     // matrices aggregated
    long acc_undefined = 0;
    long pr_undefined = 0;
    long fp_undefined = 0;
    long re_undefined = 0;
};

// Macro-average of per-matrix measures. Throws ValidationError on an
// empty list.
AggregatedMeasures aggregate(const std::vector<ConfusionMatrix>& matrices);

enum class WilcoxonMethod {
    Auto,          // exact when possible, else normal approximation
    Exact,         // force enumeration; error if ties make it invalid
    NormalApprox,  // force the approximation
};

struct WilcoxonResult {
    double u_statistic = 0.0;  // U of the first sample
    double p_value = 1.0;
    std::string method;  // "exact" or "normal-approx"
    bool significant_at_0_05 = false;
};

// Two-sided rank-sum test of xs against ys. Throws ValidationError on an
// empty sample, or when Exact is forced on a tied sample.
WilcoxonResult wilcoxon_rank_sum(const std::vector<double>& xs, const std::vector<double>& ys,
                                 WilcoxonMethod method = WilcoxonMethod::Auto);

}  // namespace vulnet
