// Exact optimal binning over contiguous partitions of pre-bins.
//
// A solution is stored as the interval list it induces rather than the
// lower-triangular indicator matrix: an interval [j, i] corresponds to the
// first one of row i sitting in column j. All solvers maximize a score:
//
//   binary / multi-class : sum of interval divergences - gamma * penalty
//   continuous           : -(sum of interval deviations) - gamma * penalty
//
// and report `Solution::objective` in the natural sense (divergence to be
// maximized, deviation to be minimized).
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "optbin/aggregate.hpp"
#include "optbin/core.hpp"

namespace optbin {

// ---------------------------------------------------------------------------
// Constraint predicates
// ---------------------------------------------------------------------------

// Pairwise and triple conditions, shared by every check so that incremental
// and full evaluations agree bit for bit.
inline bool ascending_pair_ok(double earlier, double later, double beta) {
    return earlier + beta <= later;
}
inline bool descending_pair_ok(double earlier, double later, double beta) {
    return later + beta <= earlier;
}
inline bool concave_triple_ok(double first, double middle, double last) {
    return (2.0 * middle - last) - first >= 0.0;
}
inline bool convex_triple_ok(double first, double middle, double last) {
    return (last - 2.0 * middle) + first >= 0.0;
}

// Checks a complete sequence of bin values against a trend. Ascending and
// descending compare every earlier/later pair; concave and convex every
// triple; peak (valley) requires some split into an ascending (descending)
// prefix and descending (ascending) suffix, with beta applied within each
// phase only. Fixed change-point trends need the zero-based end pre-bin of
// each bin in `ends`: bins ending before the change point form the first
// phase. Auto is not a concrete trend and throws.
bool check_trend(std::span<const double> values, const TrendSpec& trend, double beta,
                 std::span<const int> ends = {});

// Peak/valley predicate of check_trend (free change point).
bool unimodal_ok(std::span<const double> values, bool peak, double beta);

// Std: sample standard deviation of the bin record counts (0 for one bin).
// HHI: sum of squared counts over total^2. MaxMinDiff: largest - smallest.
double concentration_penalty(std::span<const std::int64_t> bin_counts,
                             Concentration::Kind kind, std::int64_t total);
double concentration_penalty(const std::vector<Interval>& intervals,
                             const TriMatrix<std::int64_t>& records, Concentration::Kind kind,
                             std::int64_t total);

// False iff two adjacent intervals form a quadruple of `pairs`.
bool apply_pvalue_constraint(const std::vector<Interval>& intervals, const PValuePairs& pairs);

// ---------------------------------------------------------------------------
// Presolve
// ---------------------------------------------------------------------------

// Pre-bins that may not close a bin. Forbidding a bin end i fixes the whole
// row i of the indicator matrix to zero, i.e. every interval [j, i].
struct PresolveMask {
    int n = 0;
    std::vector<char> forbidden_end;

    bool forbids_end(int i) const { return !forbidden_end.empty() && forbidden_end[i] != 0; }
    bool forbids(const Interval& iv) const { return forbids_end(iv.end); }
    bool empty() const;
    // Every (end, start) pair excluded from branching.
    std::vector<Interval> forbidden_intervals() const;
};

// For an ascending (descending) trend, forbids ending a bin at i when merging
// it with the following pre-bins raises (lowers) the event rate above (below)
// that of their last pre-bin. Any other trend yields an empty mask.
PresolveMask presolve_monotonic(const TriMatrix<double>& event_rate, const TrendSpec& trend);

// The fixing above only preserves optimal solutions when bins are constrained
// by the trend, max_bins, beta and p-values: minimum bin counts above 2,
// binding record/event bounds or a concentration penalty can make it drop
// the optimum. solve() applies the mask only when this returns true.
bool presolve_applicable(const AggregateSet& agg, const BinningConfig& cfg);

// ---------------------------------------------------------------------------
// Solving
// ---------------------------------------------------------------------------

// Per-class trends of a multi-class configuration (class_trends or `trend`).
std::vector<TrendSpec> class_trends(const BinningConfig& cfg, const TargetKind& target);

// Throws InvalidConfig for options the target kind does not support or for
// change points outside [0, n).
void check_config_for(const BinningConfig& cfg, const AggregateSet& agg);

// P-value pair set for cfg.max_pvalue (empty when unset or not binary).
PValuePairs pairs_for(const AggregateSet& agg, const BinningConfig& cfg);

// Dispatching entry point. Uses the presolve mask when cfg.presolve is set
// and presolve_applicable() holds.
// Infeasibility is reported through Solution::status.
Solution solve(const AggregateSet& agg, const BinningConfig& cfg, const PValuePairs& pairs);

// Same as solve() with an explicit mask (nullptr: none), applied without the
// applicability check. Only ascending/descending trends use it; Auto solves
// its monotone candidates through solve().
Solution solve_with_mask(const AggregateSet& agg, const BinningConfig& cfg,
                         const PValuePairs& pairs, const PresolveMask* mask);

// Peak/valley trends. A free change point is resolved by solving every fixed
// t in [0, n) and keeping the best (smaller t on ties).
Solution solve_peak_valley(const AggregateSet& agg, const BinningConfig& cfg,
                           const PValuePairs& pairs);

// Single shared partition maximizing the sum of per-class divergences, each
// class's event rates following its own trend.
Solution solve_multiclass(const AggregateSet& agg, const BinningConfig& cfg,
                          const PValuePairs& pairs);

// Solves ascending, descending, peak and valley; peak/valley is kept only if
// it beats the best monotone solution by at least 10% (relative).
Solution auto_trend(const AggregateSet& agg, const BinningConfig& cfg, const PValuePairs& pairs);

// Enumerates every contiguous partition (n <= 20). Reference semantics for
// all other solvers, sharing only the predicates above.
Solution brute_force_oracle(const AggregateSet& agg, const BinningConfig& cfg,
                            const PValuePairs& pairs);

// Applies the auto-trend selection rule to already solved candidates.
const Solution& select_auto_trend(const Solution& ascending, const Solution& descending,
                                  const Solution& peak, const Solution& valley, bool minimize);

// ---------------------------------------------------------------------------
// Evaluation helpers
// ---------------------------------------------------------------------------

// Score of an interval partition (see file comment), ignoring feasibility.
double partition_score(const AggregateSet& agg, const BinningConfig& cfg,
                       const std::vector<Interval>& intervals);

// Per-bin statistics, objective and status for a partition.
Solution make_solution(const AggregateSet& agg, const BinningConfig& cfg,
                       std::vector<Interval> intervals, SolveStatus status);

// Every constraint a partition violates (empty when feasible). Trends are
// checked with check_trend using `trend_used` / `class_trends_used` when given.
std::vector<std::string> feasibility_violations(const AggregateSet& agg,
                                                const BinningConfig& cfg,
                                                const PValuePairs& pairs,
                                                const std::vector<Interval>& intervals,
                                                const std::vector<TrendSpec>& trends);

// Values (event rates or means) of each bin, one sequence per trended class.
std::vector<std::vector<double>> bin_sequences(const AggregateSet& agg,
                                               const std::vector<Interval>& intervals);

// Smallest change point t for which a free peak (valley) partition also
// satisfies the fixed trend at t; nullopt when none does.
std::optional<int> smallest_change_point(const AggregateSet& agg,
                                         const std::vector<Interval>& intervals, bool peak,
                                         double beta);

// Strict ordering on (score desc, bins asc, start vector lexicographic).
bool better_partition(double score_a, const std::vector<Interval>& a, double score_b,
                      const std::vector<Interval>& b);

}  // namespace optbin
