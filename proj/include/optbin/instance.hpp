// A binning problem assembled for search: interval scores, trended value
// sequences, resolved bounds and the p-value pair set.
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "optbin/aggregate.hpp"
#include "optbin/core.hpp"

namespace optbin {

struct PresolveMask;

struct SearchInstance {
    int n = 0;
    ResolvedLimits limits;
    // Score contribution of each interval (to be maximized).
    TriMatrix<double> value;
    // Static feasibility of each interval (record bounds and presolve mask).
    TriMatrix<char> interval_ok;
    // One value sequence per trend (event rates, means, or per-class rates).
    std::vector<const TriMatrix<double>*> sequences;
    std::vector<TrendSpec> trends;
    double beta = 0.0;
    const PValuePairs* pairs = nullptr;
    const TriMatrix<std::int64_t>* records = nullptr;
    const TriMatrix<std::int64_t>* nonevents = nullptr;  // binary only
    const TriMatrix<std::int64_t>* events = nullptr;     // binary only
    Concentration concentration;
    std::int64_t total = 0;
};

// Contribution of merging pre-bins iv.start..iv.end: V (binary), -L
// (continuous) or the per-class sum of V^c (multi-class).
double interval_value(const AggregateSet& agg, const Interval& iv);

// Full problem. `trends` must be concrete (no Auto) and hold one entry per
// sequence: one for binary/continuous, one per class for multi-class.
SearchInstance make_instance(const AggregateSet& agg, const BinningConfig& cfg,
                             const PValuePairs& pairs, const std::vector<TrendSpec>& trends,
                             const PresolveMask* mask = nullptr);

// One class of a multi-class problem treated as a binary one-vs-rest problem
// (record-count bounds kept, no p-value pairs).
SearchInstance make_class_instance(const AggregateSet& agg, const BinningConfig& cfg, int cls,
                                   const TrendSpec& trend);

// Score of a partition: interval values summed left to right minus
// gamma * concentration penalty. Ignores feasibility.
double instance_score(const SearchInstance& inst, const std::vector<Interval>& intervals);

// Every violated constraint (bin count, record bounds, p-values, trends).
std::vector<std::string> instance_violations(const SearchInstance& inst,
                                             const std::vector<Interval>& intervals);

// Score adjustment shared by every solver.
double penalized(double interval_sum, const SearchInstance& inst,
                 std::span<const std::int64_t> bin_counts);

}  // namespace optbin
