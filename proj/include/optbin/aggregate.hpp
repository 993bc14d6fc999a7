// Aggregated lower-triangular matrices over every run of consecutive pre-bins.
//
// Entry (i, j) with j <= i describes the bin obtained by merging pre-bins
// j..i (zero-based, inclusive). Precomputing them turns every metric of a
// merged bin into a table lookup, so the objective of a partition is a plain
// sum over its intervals.
#pragma once

#include <cstdint>
#include <vector>

#include "optbin/core.hpp"
#include "optbin/preprocess.hpp"

namespace optbin {

template <typename T>
class TriMatrix {
public:
    TriMatrix() = default;
    explicit TriMatrix(int n, T fill = T{})
        : n_(n), data_(static_cast<std::size_t>(n) * (n + 1) / 2, fill) {}

    int size() const noexcept { return n_; }
    bool empty() const noexcept { return n_ == 0; }

    T& operator()(int i, int j) { return data_[offset(i, j)]; }
    const T& operator()(int i, int j) const { return data_[offset(i, j)]; }
    const T& at(const Interval& iv) const { return (*this)(iv.end, iv.start); }

private:
    std::size_t offset(int i, int j) const noexcept {
        return static_cast<std::size_t>(i) * (i + 1) / 2 + static_cast<std::size_t>(j);
    }

    int n_ = 0;
    std::vector<T> data_;
};

// log((ne / ne_total) / (e / e_total)); throws ZeroCount if any count is 0.
double woe(std::int64_t nonevent, std::int64_t event, std::int64_t nonevent_total,
           std::int64_t event_total);

// IV: (p - q) log(p / q), requires p, q > 0 (ZeroCount otherwise).
// JSD: (p log(p/m) + q log(q/m)) / 2 with m = (p + q) / 2 and 0 log 0 = 0.
double divergence_contrib(double p, double q, Divergence kind);

// Pooled two-proportion z statistic between (events1, nonevents1) and
// (events2, nonevents2); 0 when the pooled rate is 0 or 1.
double two_proportion_z(std::int64_t events1, std::int64_t nonevents1, std::int64_t events2,
                        std::int64_t nonevents2);
// Two-sided p-value of the pooled z-test.
double two_proportion_pvalue(std::int64_t events1, std::int64_t nonevents1,
                             std::int64_t events2, std::int64_t nonevents2);
// Standard normal quantile.
double normal_quantile(double p);

struct AggregateSet {
    TargetKind target = TargetKind::binary();
    Divergence divergence = Divergence::IV;
    NormP norm = NormP::L2;
    int n = 0;

    // Per pre-bin inputs, kept for bin statistics.
    std::vector<std::int64_t> count;
    std::vector<std::int64_t> nonevent;
    std::vector<std::int64_t> event;
    std::vector<double> sum;
    std::vector<std::vector<std::int64_t>> class_count;

    std::int64_t total = 0;
    std::int64_t total_nonevent = 0;
    std::int64_t total_event = 0;
    std::vector<std::int64_t> class_totals;

    TriMatrix<std::int64_t> records;    // R
    TriMatrix<std::int64_t> nonevents;  // R^NE (binary)
    TriMatrix<std::int64_t> events;     // R^E  (binary)
    TriMatrix<double> divergence_value;  // V   (binary)
    TriMatrix<double> event_rate;        // D   (binary)
    TriMatrix<double> mean;              // U   (continuous)
    TriMatrix<double> deviation;         // L   (continuous)
    std::vector<TriMatrix<double>> class_divergence;  // V^c (multi-class)
    std::vector<TriMatrix<double>> class_event_rate;  // D^c (multi-class)
};

// Requires a refined table (every pre-bin has events and non-events).
AggregateSet build_binary(const PrebinTable& table, Divergence kind);
// L(i, j) is the unweighted p-norm of (mean_z - U(i, j)) for z = j..i.
AggregateSet build_continuous(const PrebinTable& table, NormP norm);
// One-vs-rest per class. Throws InfeasibleInput if a class is absent and
// BinningError for tables that are not multi-class.
AggregateSet build_multiclass(const PrebinTable& table, Divergence kind);
// Dispatches on the table's target kind.
AggregateSet build_aggregates(const PrebinTable& table, Divergence kind, NormP norm);

// Merging pre-bins j..i and l..k (l = i + 1) yields adjacent bins whose
// event rates are not significantly different.
struct PValuePair {
    int i = 0;
    int j = 0;
    int k = 0;
    int l = 0;
    friend bool operator==(const PValuePair&, const PValuePair&) = default;
};

class PValuePairs {
public:
    PValuePairs() = default;
    PValuePairs(int n, std::optional<double> alpha, std::vector<PValuePair> pairs);

    // Empty set (no p-value constraint).
    static PValuePairs off() { return {}; }

    const std::vector<PValuePair>& pairs() const noexcept { return pairs_; }
    std::optional<double> alpha() const noexcept { return alpha_; }
    bool empty() const noexcept { return pairs_.empty(); }
    // True iff bins [j, i] and [i + 1, k] violate the p-value constraint.
    bool contains(int i, int j, int k) const;

private:
    int n_ = 0;
    std::optional<double> alpha_;
    std::vector<PValuePair> pairs_;
    std::vector<char> lookup_;
};

// Quadruples whose adjacent merged bins have |z| < Phi^-1(1 - alpha / 2).
PValuePairs pvalue_pairs(int n, const TriMatrix<std::int64_t>& nonevents,
                         const TriMatrix<std::int64_t>& events, double alpha);

}  // namespace optbin
