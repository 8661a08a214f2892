#include "vulnet/evalstats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "vulnet/errors.hpp"

namespace vulnet {

ConfusionMatrix confusion(const std::vector<int>& predictions, const std::vector<int>& actuals) {
    if (predictions.size() != actuals.size())
        throw ValidationError("prediction/actual length mismatch: " +
                              std::to_string(predictions.size()) + " vs " +
                              std::to_string(actuals.size()));
    if (predictions.empty()) throw ValidationError("empty prediction vector");

    ConfusionMatrix cm;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        const bool pred = predictions[i] != 0;
        const bool act = actuals[i] != 0;
        if (pred && act) ++cm.tp;
        else if (pred && !act) ++cm.fp;
        else if (!pred && act) ++cm.fn;
        else ++cm.tn;
    }
    return cm;
}

MeasureSet measures(const ConfusionMatrix& cm) {
    MeasureSet m;
    const long total = cm.total();
    if (total > 0) m.acc = static_cast<double>(cm.tp + cm.tn) / total;
    if (cm.tp + cm.fp > 0) m.pr = static_cast<double>(cm.tp) / (cm.tp + cm.fp);
    if (cm.fp + cm.tn > 0) m.fp_rate = static_cast<double>(cm.fp) / (cm.fp + cm.tn);
    if (cm.tp + cm.fn > 0) m.re = static_cast<double>(cm.tp) / (cm.tp + cm.fn);
    return m;
}

AggregatedMeasures aggregate(const std::vector<ConfusionMatrix>& matrices) {
    if (matrices.empty()) throw ValidationError("nothing to aggregate");

    AggregatedMeasures agg;
    agg.matrices = static_cast<long>(matrices.size());
    double acc = 0, pr = 0, fpr = 0, re = 0;
    long acc_n = 0, pr_n = 0, fpr_n = 0, re_n = 0;
    for (const auto& cm : matrices) {
        const MeasureSet m = measures(cm);
        if (m.acc) { acc += *m.acc; ++acc_n; } else ++agg.acc_undefined;
        if (m.pr) { pr += *m.pr; ++pr_n; } else ++agg.pr_undefined;
        if (m.fp_rate) { fpr += *m.fp_rate; ++fpr_n; } else ++agg.fp_undefined;
        if (m.re) { re += *m.re; ++re_n; } else ++agg.re_undefined;
    }
    if (acc_n > 0) agg.mean.acc = acc / acc_n;
    if (pr_n > 0) agg.mean.pr = pr / pr_n;
    if (fpr_n > 0) agg.mean.fp_rate = fpr / fpr_n;
    if (re_n > 0) agg.mean.re = re / re_n;
    return agg;
}

namespace {

struct RankedSample {
    double r1 = 0.0;     // midrank sum of the first sample
    bool has_ties = false;
    double tie_term = 0.0;  // sum of t^3 - t over tie groups
};

RankedSample rank(const std::vector<double>& xs, const std::vector<double>& ys) {
    struct Entry {
        double value;
        bool first_sample;
    };
    std::vector<Entry> all;
    all.reserve(xs.size() + ys.size());
    for (const double v : xs) all.push_back({v, true});
    for (const double v : ys) all.push_back({v, false});
    std::sort(all.begin(), all.end(),
              [](const Entry& a, const Entry& b) { return a.value < b.value; });

    RankedSample out;
    std::size_t i = 0;
    while (i < all.size()) {
        std::size_t j = i;
        while (j < all.size() && all[j].value == all[i].value) ++j;
        const double t = static_cast<double>(j - i);
        // Tied values share the mean of the ranks they occupy (1-based).
        const double midrank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
        for (std::size_t k = i; k < j; ++k)
            if (all[k].first_sample) out.r1 += midrank;
        if (t > 1) {
            out.has_ties = true;
            out.tie_term += t * t * t - t;
        }
        i = j;
    }
    return out;
}

// Exact tail counts: walks every n-subset of ranks {1..N} and tallies the
// subsets whose U falls in each two-sided tail.
double exact_p(long n, long N, double u_stat) {
    const long m = N - n;
    const double nm = static_cast<double>(n) * m;
    const double u_lo = std::min(u_stat, nm - u_stat);
    const double u_hi = nm - u_lo;

    std::uint64_t total = 0, in_tail = 0;
    std::vector<int> pick(n);
    for (long i = 0; i < n; ++i) pick[i] = static_cast<int>(i + 1);
    while (true) {
        long rank_sum = 0;
        for (const int r : pick) rank_sum += r;
        const double u = static_cast<double>(rank_sum) - static_cast<double>(n) * (n + 1) / 2.0;
        ++total;
        if (u <= u_lo || u >= u_hi) ++in_tail;

        // Advance to the next combination in lexicographic order.
        long i = n - 1;
        while (i >= 0 && pick[i] == N - (n - 1 - i)) --i;
        if (i < 0) break;
        ++pick[i];
        for (long j = i + 1; j < n; ++j) pick[j] = pick[j - 1] + 1;
    }
    double p = static_cast<double>(in_tail) / static_cast<double>(total);
    return std::min(p, 1.0);
}

double normal_approx_p(long n, long m, double u_stat, double tie_term) {
    const double N = static_cast<double>(n + m);
    const double nm = static_cast<double>(n) * m;
    const double mu = nm / 2.0;
    const double var = nm / 12.0 * ((N + 1.0) - tie_term / (N * (N - 1.0)));
    if (var <= 0.0) return 1.0;  // every value identical
    const double d = std::max(std::abs(u_stat - mu) - 0.5, 0.0);
    const double z = d / std::sqrt(var);
    const double p = std::erfc(z / std::sqrt(2.0));
    return std::clamp(p, 0.0, 1.0);
}

}  // namespace

WilcoxonResult wilcoxon_rank_sum(const std::vector<double>& xs, const std::vector<double>& ys,
                                 WilcoxonMethod method) {
    if (xs.empty() || ys.empty()) throw ValidationError("rank-sum test needs two non-empty samples");

    const long n = static_cast<long>(xs.size());
    const long m = static_cast<long>(ys.size());
    const RankedSample ranked = rank(xs, ys);

    WilcoxonResult res;
    res.u_statistic = ranked.r1 - static_cast<double>(n) * (n + 1) / 2.0;

    const bool exact_valid = !ranked.has_ties && n + m <= 12;
    bool use_exact = false;
    switch (method) {
        case WilcoxonMethod::Auto:
            use_exact = exact_valid;
            break;
        case WilcoxonMethod::Exact:
            if (ranked.has_ties)
                throw ValidationError("exact rank-sum enumeration requires a tie-free sample");
            use_exact = true;
            break;
        case WilcoxonMethod::NormalApprox:
            use_exact = false;
            break;
    }

    if (use_exact) {
        res.p_value = exact_p(n, n + m, res.u_statistic);
        res.method = "exact";
    } else {
        res.p_value = normal_approx_p(n, m, res.u_statistic, ranked.tie_term);
        res.method = "normal-approx";
    }
    res.significant_at_0_05 = res.p_value < 0.05;
    return res;
}

}  // namespace vulnet
