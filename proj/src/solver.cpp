#include "optbin/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "optbin/instance.hpp"

namespace optbin {

// ---------------------------------------------------------------------------
// Predicates
// ---------------------------------------------------------------------------

namespace {

using PairRule = bool (*)(double, double, double);

bool all_pairs(std::span<const double> v, PairRule rule, double beta) {
    for (std::size_t l = 1; l < v.size(); ++l)
        for (std::size_t k = 0; k < l; ++k)
            if (!rule(v[k], v[l], beta)) return false;
    return true;
}

template <typename TripleRule>
bool all_triples(std::span<const double> v, TripleRule rule) {
    for (std::size_t i = 2; i < v.size(); ++i)
        for (std::size_t j = 1; j < i; ++j)
            for (std::size_t k = 0; k < j; ++k)
                if (!rule(v[k], v[j], v[i])) return false;
    return true;
}

// Rules of the first and second phase of a peak (valley) trend.
PairRule first_phase(bool peak) { return peak ? ascending_pair_ok : descending_pair_ok; }
PairRule second_phase(bool peak) { return peak ? descending_pair_ok : ascending_pair_ok; }

bool fixed_phase_ok(std::span<const double> v, std::span<const int> ends, bool peak, int t,
                    double beta) {
    if (ends.size() != v.size())
        throw BinningError("fixed change-point trend needs the bin ends");
    for (std::size_t l = 1; l < v.size(); ++l) {
        const bool l_first = ends[l] < t;
        for (std::size_t k = 0; k < l; ++k) {
            const bool k_first = ends[k] < t;
            if (k_first != l_first) continue;
            const PairRule rule = l_first ? first_phase(peak) : second_phase(peak);
            if (!rule(v[k], v[l], beta)) return false;
        }
    }
    return true;
}

}  // namespace

bool unimodal_ok(std::span<const double> v, bool peak, double beta) {
    const std::size_t m = v.size();
    const PairRule first = first_phase(peak);
    const PairRule second = second_phase(peak);
    // prefix_ok[s]: v[0, s) satisfies the first phase pairwise.
    std::vector<char> prefix_ok(m + 1, 1);
    for (std::size_t s = 0; s < m; ++s) {
        bool ok = prefix_ok[s] != 0;
        for (std::size_t k = 0; ok && k < s; ++k) ok = first(v[k], v[s], beta);
        prefix_ok[s + 1] = ok ? 1 : 0;
    }
    // suffix_ok[s]: v[s, m) satisfies the second phase pairwise.
    std::vector<char> suffix_ok(m + 1, 1);
    for (std::size_t s = m; s-- > 0;) {
        bool ok = suffix_ok[s + 1] != 0;
        for (std::size_t l = s + 1; ok && l < m; ++l) ok = second(v[s], v[l], beta);
        suffix_ok[s] = ok ? 1 : 0;
    }
    for (std::size_t s = 0; s <= m; ++s)
        if (prefix_ok[s] && suffix_ok[s]) return true;
    return false;
}

bool check_trend(std::span<const double> values, const TrendSpec& trend, double beta,
                 std::span<const int> ends) {
    switch (trend.kind) {
        case TrendSpec::Kind::None: return true;
        case TrendSpec::Kind::Ascending: return all_pairs(values, ascending_pair_ok, beta);
        case TrendSpec::Kind::Descending: return all_pairs(values, descending_pair_ok, beta);
        case TrendSpec::Kind::Concave: return all_triples(values, concave_triple_ok);
        case TrendSpec::Kind::Convex: return all_triples(values, convex_triple_ok);
        case TrendSpec::Kind::Peak: return unimodal_ok(values, true, beta);
        case TrendSpec::Kind::Valley: return unimodal_ok(values, false, beta);
        case TrendSpec::Kind::PeakFixed:
            return fixed_phase_ok(values, ends, true, trend.change_point, beta);
        case TrendSpec::Kind::ValleyFixed:
            return fixed_phase_ok(values, ends, false, trend.change_point, beta);
        case TrendSpec::Kind::Auto: break;
    }
    throw BinningError("auto is not a concrete trend");
}

double concentration_penalty(std::span<const std::int64_t> bin_counts, Concentration::Kind kind,
                             std::int64_t total) {
    const std::size_t m = bin_counts.size();
    if (m == 0) return 0.0;
    switch (kind) {
        case Concentration::Kind::Off: return 0.0;
        case Concentration::Kind::Std: {
            if (m == 1) return 0.0;
            double mean = 0.0;
            for (auto c : bin_counts) mean += static_cast<double>(c);
            mean /= static_cast<double>(m);
            double ss = 0.0;
            for (auto c : bin_counts) {
                const double w = static_cast<double>(c) - mean;
                ss += w * w;
            }
            return std::sqrt(ss / static_cast<double>(m - 1));
        }
        case Concentration::Kind::HHI: {
            const double t = static_cast<double>(total);
            double s = 0.0;
            for (auto c : bin_counts) s += static_cast<double>(c) * static_cast<double>(c);
            return s / (t * t);
        }
        case Concentration::Kind::MaxMinDiff: {
            const auto [lo, hi] = std::minmax_element(bin_counts.begin(), bin_counts.end());
            return static_cast<double>(*hi - *lo);
        }
    }
    return 0.0;
}

double concentration_penalty(const std::vector<Interval>& intervals,
                             const TriMatrix<std::int64_t>& records, Concentration::Kind kind,
                             std::int64_t total) {
    std::vector<std::int64_t> counts;
    for (const auto& iv : intervals) counts.push_back(records.at(iv));
    return concentration_penalty(counts, kind, total);
}

bool apply_pvalue_constraint(const std::vector<Interval>& intervals, const PValuePairs& pairs) {
    if (pairs.empty()) return true;
    for (std::size_t b = 1; b < intervals.size(); ++b) {
        const auto& prev = intervals[b - 1];
        const auto& next = intervals[b];
        if (pairs.contains(prev.end, prev.start, next.end)) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Presolve
// ---------------------------------------------------------------------------

bool PresolveMask::empty() const {
    return std::none_of(forbidden_end.begin(), forbidden_end.end(), [](char c) { return c; });
}

std::vector<Interval> PresolveMask::forbidden_intervals() const {
    std::vector<Interval> out;
    for (int i = 0; i < n; ++i)
        if (forbids_end(i))
            for (int j = 0; j <= i; ++j) out.push_back({j, i});
    return out;
}

PresolveMask presolve_monotonic(const TriMatrix<double>& d, const TrendSpec& trend) {
    PresolveMask mask;
    mask.n = d.size();
    mask.forbidden_end.assign(mask.n, 0);
    const bool asc = trend.kind == TrendSpec::Kind::Ascending;
    const bool desc = trend.kind == TrendSpec::Kind::Descending;
    if (!asc && !desc) return mask;
    // Ascending fixes on a positive difference, descending on a negative one.
    const auto fires = [&](double diff) { return asc ? diff > 0.0 : diff < 0.0; };
    const int n = mask.n;
    for (int i = 0; i + 1 < n; ++i) {
        if (fires(d(i + 1, i) - d(i + 1, i + 1))) mask.forbidden_end[i] = 1;
        for (int j = 1; i + 1 + j < n; ++j) {
            if (fires(d(i + 1 + j, i) - d(i + 1 + j, i + 1 + j))) mask.forbidden_end[i + j] = 1;
        }
    }
    return mask;
}

bool presolve_applicable(const AggregateSet& agg, const BinningConfig& cfg) {
    if (!agg.target.is_binary() || agg.n < 1) return false;
    if (cfg.trend.kind != TrendSpec::Kind::Ascending &&
        cfg.trend.kind != TrendSpec::Kind::Descending)
        return false;
    if (cfg.concentration.kind != Concentration::Kind::Off && cfg.concentration.gamma != 0.0)
        return false;
    const auto lim = resolve_limits(cfg, agg.target, agg.n, agg.total);
    if (lim.min_bins > 2) return false;
    // Bounds every interval satisfies anyway are harmless.
    const auto smallest = [](const std::vector<std::int64_t>& v) {
        return *std::min_element(v.begin(), v.end());
    };
    return lim.min_bin_size <= smallest(agg.count) &&
           lim.min_bin_nonevent <= smallest(agg.nonevent) &&
           lim.min_bin_event <= smallest(agg.event) && lim.max_bin_size >= agg.total &&
           lim.max_bin_nonevent >= agg.total_nonevent && lim.max_bin_event >= agg.total_event;
}

// ---------------------------------------------------------------------------
// Search
// ---------------------------------------------------------------------------

bool better_partition(double score_a, const std::vector<Interval>& a, double score_b,
                      const std::vector<Interval>& b) {
    if (score_a != score_b) return score_a > score_b;
    if (a.size() != b.size()) return a.size() < b.size();
    for (std::size_t k = 0; k < a.size(); ++k)
        if (a[k].start != b[k].start) return a[k].start < b[k].start;
    return false;
}

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct SearchResult {
    bool found = false;
    double score = kNegInf;
    std::vector<Interval> intervals;
};

// Depth-first branch and bound over the end of the next interval.
class BranchAndBound {
public:
    explicit BranchAndBound(const SearchInstance& inst) : inst_(inst) {
        values_.resize(inst.sequences.size());
        build_bounds();
    }

    SearchResult run() {
        if (inst_.n > 0) dfs(0, 0.0);
        return result_;
    }

private:
    // best_[s][k]: best interval-value sum for pre-bins s..n-1 split into
    // exactly k statically feasible intervals.
    void build_bounds() {
        const int n = inst_.n;
        best_.assign(n + 1, std::vector<double>(n + 1, kNegInf));
        best_[n][0] = 0.0;
        for (int s = n - 1; s >= 0; --s) {
            for (int e = s; e < n; ++e) {
                if (!inst_.interval_ok(e, s)) continue;
                const double v = inst_.value(e, s);
                for (int k = 1; k <= n - s; ++k) {
                    const double rest = best_[e + 1][k - 1];
                    if (rest == kNegInf) continue;
                    best_[s][k] = std::max(best_[s][k], v + rest);
                }
            }
        }
    }

    double rest_bound(int next, int used) const {
        const auto& lim = inst_.limits;
        const int kmin = std::max(1, lim.min_bins - used);
        const int kmax = std::min(lim.max_bins - used, inst_.n - next);
        double out = kNegInf;
        for (int k = kmin; k <= kmax; ++k) out = std::max(out, best_[next][k]);
        return out;
    }

    bool prunable(double bound) const {
        if (!result_.found) return false;
        const double tol = 1e-9 * (1.0 + std::abs(result_.score));
        return bound < result_.score - tol;
    }

    bool trend_ok(std::size_t s, double x, int end) const {
        const auto& prev = values_[s];
        const auto& trend = inst_.trends[s];
        const double beta = inst_.beta;
        switch (trend.kind) {
            case TrendSpec::Kind::None: return true;
            case TrendSpec::Kind::Ascending:
                for (double p : prev)
                    if (!ascending_pair_ok(p, x, beta)) return false;
                return true;
            case TrendSpec::Kind::Descending:
                for (double p : prev)
                    if (!descending_pair_ok(p, x, beta)) return false;
                return true;
            case TrendSpec::Kind::Concave:
            case TrendSpec::Kind::Convex: {
                const bool concave = trend.kind == TrendSpec::Kind::Concave;
                for (std::size_t j = 1; j < prev.size(); ++j)
                    for (std::size_t k = 0; k < j; ++k) {
                        const bool ok = concave ? concave_triple_ok(prev[k], prev[j], x)
                                                : convex_triple_ok(prev[k], prev[j], x);
                        if (!ok) return false;
                    }
                return true;
            }
            case TrendSpec::Kind::PeakFixed:
            case TrendSpec::Kind::ValleyFixed: {
                const bool peak = trend.kind == TrendSpec::Kind::PeakFixed;
                const bool x_first = end < trend.change_point;
                const PairRule rule = x_first ? first_phase(peak) : second_phase(peak);
                for (std::size_t k = 0; k < prev.size(); ++k) {
                    if ((ends_[k] < trend.change_point) != x_first) continue;
                    if (!rule(prev[k], x, beta)) return false;
                }
                return true;
            }
            case TrendSpec::Kind::Peak:
            case TrendSpec::Kind::Valley: {
                // The predicate is prefix-closed, so checking prefixes is exact.
                std::vector<double> seq = prev;
                seq.push_back(x);
                return unimodal_ok(seq, trend.kind == TrendSpec::Kind::Peak, beta);
            }
            case TrendSpec::Kind::Auto: break;
        }
        return false;
    }

    void dfs(int start, double sum) {
        const int n = inst_.n;
        const auto& lim = inst_.limits;
        const int used = static_cast<int>(path_.size());
        const int bins = used + 1;
        if (bins > lim.max_bins) return;

        for (int e = start; e < n; ++e) {
            const bool last = e == n - 1;
            if (!inst_.interval_ok(e, start)) continue;
            if (last) {
                if (bins < lim.min_bins) continue;
            } else {
                if (bins + 1 > lim.max_bins) continue;
                if (bins + (n - 1 - e) < lim.min_bins) continue;
            }
            if (used > 0 && inst_.pairs != nullptr) {
                const auto& prev = path_.back();
                if (inst_.pairs->contains(prev.end, prev.start, e)) continue;
            }
            bool ok = true;
            for (std::size_t s = 0; ok && s < values_.size(); ++s)
                ok = trend_ok(s, (*inst_.sequences[s])(e, start), e);
            if (!ok) continue;

            const double next_sum = sum + inst_.value(e, start);
            if (!last) {
                const double rest = rest_bound(e + 1, bins);
                if (rest == kNegInf || prunable(next_sum + rest)) continue;
            } else if (prunable(next_sum)) {
                continue;
            }

            path_.push_back({start, e});
            ends_.push_back(e);
            counts_.push_back((*inst_.records)(e, start));
            for (std::size_t s = 0; s < values_.size(); ++s)
                values_[s].push_back((*inst_.sequences[s])(e, start));

            if (last)
                leaf(next_sum);
            else
                dfs(e + 1, next_sum);

            path_.pop_back();
            ends_.pop_back();
            counts_.pop_back();
            for (auto& v : values_) v.pop_back();
        }
    }

    void leaf(double sum) {
        const double score = penalized(sum, inst_, counts_);
        if (!result_.found || better_partition(score, path_, result_.score, result_.intervals)) {
            result_.found = true;
            result_.score = score;
            result_.intervals = path_;
        }
    }

    const SearchInstance& inst_;
    std::vector<std::vector<double>> best_;
    std::vector<Interval> path_;
    std::vector<int> ends_;
    std::vector<std::int64_t> counts_;
    std::vector<std::vector<double>> values_;
    SearchResult result_;
};

SearchResult enumerate_partitions(const SearchInstance& inst) {
    SearchResult result;
    const int n = inst.n;
    if (n < 1) return result;
    if (n > 20) throw BinningError("brute force oracle limited to 20 pre-bins");
    const std::uint32_t combos = 1u << (n - 1);
    std::vector<Interval> intervals;
    for (std::uint32_t mask = 0; mask < combos; ++mask) {
        intervals.clear();
        int start = 0;
        for (int b = 0; b < n - 1; ++b) {
            if (mask & (1u << b)) {
                intervals.push_back({start, b});
                start = b + 1;
            }
        }
        intervals.push_back({start, n - 1});
        if (!instance_violations(inst, intervals).empty()) continue;
        const double score = instance_score(inst, intervals);
        if (!result.found || better_partition(score, intervals, result.score, result.intervals)) {
            result.found = true;
            result.score = score;
            result.intervals = intervals;
        }
    }
    return result;
}

bool minimizes(const AggregateSet& agg) { return agg.target.is_continuous(); }

Solution to_solution(const AggregateSet& agg, const BinningConfig& cfg, const SearchResult& r,
                     SolveStatus status_if_found) {
    if (!r.found) {
        Solution s;
        s.status = SolveStatus::Infeasible;
        return s;
    }
    return make_solution(agg, cfg, r.intervals, status_if_found);
}

Solution single_trend_solve(const AggregateSet& agg, const BinningConfig& cfg,
                            const PValuePairs& pairs, const TrendSpec& trend,
                            const PresolveMask* mask) {
    const auto inst = make_instance(agg, cfg, pairs, {trend}, mask);
    auto sol = to_solution(agg, cfg, BranchAndBound(inst).run(), SolveStatus::Optimal);
    sol.trend_used = trend;
    if (trend.is_fixed() && sol.feasible()) sol.change_point = trend.change_point;
    return sol;
}

Solution peak_valley_impl(const AggregateSet& agg, const BinningConfig& cfg,
                          const PValuePairs& pairs, const TrendSpec& trend,
                          const PresolveMask* mask) {
    if (trend.is_fixed()) return single_trend_solve(agg, cfg, pairs, trend, mask);
    const bool peak = trend.kind == TrendSpec::Kind::Peak;
    Solution best;
    best.status = SolveStatus::Infeasible;
    double best_score = kNegInf;
    for (int t = 0; t < agg.n; ++t) {
        const auto fixed = peak ? TrendSpec::peak_fixed(t) : TrendSpec::valley_fixed(t);
        const auto inst = make_instance(agg, cfg, pairs, {fixed}, mask);
        const auto r = BranchAndBound(inst).run();
        if (!r.found) continue;
        if (!best.feasible() || better_partition(r.score, r.intervals, best_score, best.intervals)) {
            best = make_solution(agg, cfg, r.intervals, SolveStatus::Optimal);
            best.change_point = t;
            best_score = r.score;
        }
    }
    best.trend_used = trend;
    return best;
}

// Ascending/descending candidates go through solve() so that they get the
// presolve mask of their own trend.
Solution auto_impl(const AggregateSet& agg, const BinningConfig& cfg, const PValuePairs& pairs) {
    BinningConfig sub = cfg;
    sub.trend = TrendSpec::ascending();
    const auto a = solve(agg, sub, pairs);
    sub.trend = TrendSpec::descending();
    const auto d = solve(agg, sub, pairs);
    const auto p = peak_valley_impl(agg, cfg, pairs, TrendSpec::peak(), nullptr);
    const auto v = peak_valley_impl(agg, cfg, pairs, TrendSpec::valley(), nullptr);
    return select_auto_trend(a, d, p, v, minimizes(agg));
}

double score_of(const Solution& s, bool minimize) { return minimize ? -s.objective : s.objective; }

// Better of two candidates: higher score, then fewer bins, then `first`.
const Solution& pick(const Solution& first, const Solution& second, bool minimize) {
    if (!second.feasible()) return first;
    if (!first.feasible()) return second;
    const double a = score_of(first, minimize);
    const double b = score_of(second, minimize);
    if (a != b) return a > b ? first : second;
    return second.intervals.size() < first.intervals.size() ? second : first;
}

TrendSpec resolve_class_auto(const AggregateSet& agg, const BinningConfig& cfg, int cls) {
    auto solve_for = [&](const TrendSpec& t) {
        const auto inst = make_class_instance(agg, cfg, cls, t);
        auto sol = to_solution(agg, cfg, BranchAndBound(inst).run(), SolveStatus::Optimal);
        if (sol.feasible()) sol.objective = instance_score(inst, sol.intervals);
        sol.trend_used = t;
        return sol;
    };
    const auto a = solve_for(TrendSpec::ascending());
    const auto d = solve_for(TrendSpec::descending());
    const auto p = solve_for(TrendSpec::peak());
    const auto v = solve_for(TrendSpec::valley());
    const auto& chosen = select_auto_trend(a, d, p, v, false);
    return chosen.feasible() ? chosen.trend_used : TrendSpec::none();
}

}  // namespace

const Solution& select_auto_trend(const Solution& ascending, const Solution& descending,
                                  const Solution& peak, const Solution& valley, bool minimize) {
    const Solution& mono = pick(descending, ascending, minimize);
    const Solution& uni = pick(peak, valley, minimize);
    if (!uni.feasible()) return mono;
    if (!mono.feasible()) return uni;
    const double m = score_of(mono, minimize);
    const double u = score_of(uni, minimize);
    if (u > m && u - m >= 0.1 * std::abs(m)) return uni;
    return mono;
}

std::vector<TrendSpec> class_trends(const BinningConfig& cfg, const TargetKind& target) {
    if (!target.is_multiclass()) return {cfg.trend};
    if (cfg.class_trends.empty())
        return std::vector<TrendSpec>(static_cast<std::size_t>(target.class_count), cfg.trend);
    return cfg.class_trends;
}

void check_config_for(const BinningConfig& cfg, const AggregateSet& agg) {
    auto errors = config_errors(cfg);
    if (!agg.target.is_binary()) {
        if (cfg.max_pvalue) errors.push_back("max_pvalue requires a binary target");
        if (cfg.min_bin_nonevent || cfg.max_bin_nonevent || cfg.min_bin_event ||
            cfg.max_bin_event)
            errors.push_back("event/non-event bounds require a binary target");
    }
    if (!cfg.class_trends.empty()) {
        if (!agg.target.is_multiclass())
            errors.push_back("class trends require a multi-class target");
        else if (static_cast<int>(cfg.class_trends.size()) != agg.target.class_count)
            errors.push_back("one class trend per class expected");
    }
    for (const auto& t : class_trends(cfg, agg.target)) {
        if (t.is_fixed() && t.change_point >= agg.n)
            errors.push_back("trend change point " + std::to_string(t.change_point) +
                             " outside [0, " + std::to_string(agg.n) + ")");
    }
    if (agg.n < 1) errors.push_back("no pre-bins to optimize");
    if (!errors.empty()) throw InvalidConfig(std::move(errors));
}

PValuePairs pairs_for(const AggregateSet& agg, const BinningConfig& cfg) {
    if (!cfg.max_pvalue || !agg.target.is_binary()) return PValuePairs::off();
    return pvalue_pairs(agg.n, agg.nonevents, agg.events, *cfg.max_pvalue);
}

Solution solve(const AggregateSet& agg, const BinningConfig& cfg, const PValuePairs& pairs) {
    if (!cfg.presolve || !presolve_applicable(agg, cfg))
        return solve_with_mask(agg, cfg, pairs, nullptr);
    const auto mask = presolve_monotonic(agg.event_rate, cfg.trend);
    return solve_with_mask(agg, cfg, pairs, &mask);
}

Solution solve_with_mask(const AggregateSet& agg, const BinningConfig& cfg,
                         const PValuePairs& pairs, const PresolveMask* mask) {
    check_config_for(cfg, agg);
    if (agg.target.is_multiclass()) return solve_multiclass(agg, cfg, pairs);
    switch (cfg.trend.kind) {
        case TrendSpec::Kind::Auto: return auto_impl(agg, cfg, pairs);
        case TrendSpec::Kind::Peak:
        case TrendSpec::Kind::Valley:
        case TrendSpec::Kind::PeakFixed:
        case TrendSpec::Kind::ValleyFixed:
            return peak_valley_impl(agg, cfg, pairs, cfg.trend, mask);
        default: return single_trend_solve(agg, cfg, pairs, cfg.trend, mask);
    }
}

Solution solve_peak_valley(const AggregateSet& agg, const BinningConfig& cfg,
                           const PValuePairs& pairs) {
    if (!cfg.trend.is_unimodal())
        throw InvalidConfig({"solve_peak_valley needs a peak or valley trend"});
    if (agg.target.is_multiclass()) throw InvalidConfig({"use solve_multiclass"});
    check_config_for(cfg, agg);
    return peak_valley_impl(agg, cfg, pairs, cfg.trend, nullptr);
}

Solution solve_multiclass(const AggregateSet& agg, const BinningConfig& cfg,
                          const PValuePairs& pairs) {
    if (!agg.target.is_multiclass()) throw InvalidConfig({"solve_multiclass needs multi-class"});
    check_config_for(cfg, agg);
    auto trends = class_trends(cfg, agg.target);
    for (int c = 0; c < static_cast<int>(trends.size()); ++c)
        if (trends[c].kind == TrendSpec::Kind::Auto) trends[c] = resolve_class_auto(agg, cfg, c);
    const auto inst = make_instance(agg, cfg, pairs, trends);
    auto sol = to_solution(agg, cfg, BranchAndBound(inst).run(), SolveStatus::Optimal);
    sol.trend_used = cfg.trend;
    sol.class_trends = trends;
    return sol;
}

Solution auto_trend(const AggregateSet& agg, const BinningConfig& cfg, const PValuePairs& pairs) {
    check_config_for(cfg, agg);
    if (agg.target.is_multiclass()) {
        BinningConfig sub = cfg;
        sub.trend = TrendSpec::auto_select();
        sub.class_trends.clear();
        return solve_multiclass(agg, sub, pairs);
    }
    return auto_impl(agg, cfg, pairs);
}

Solution brute_force_oracle(const AggregateSet& agg, const BinningConfig& cfg,
                            const PValuePairs& pairs) {
    check_config_for(cfg, agg);
    auto oracle = [&](const std::vector<TrendSpec>& trends) {
        const auto inst = make_instance(agg, cfg, pairs, trends);
        auto sol = to_solution(agg, cfg, enumerate_partitions(inst), SolveStatus::Optimal);
        if (trends.size() == 1) {
            const auto& t = trends.front();
            sol.trend_used = t;
            if (sol.feasible() && t.is_fixed()) sol.change_point = t.change_point;
            if (sol.feasible() && (t.kind == TrendSpec::Kind::Peak ||
                                   t.kind == TrendSpec::Kind::Valley))
                sol.change_point = smallest_change_point(
                    agg, sol.intervals, t.kind == TrendSpec::Kind::Peak, cfg.min_diff);
        }
        return sol;
    };

    if (agg.target.is_multiclass()) {
        auto trends = class_trends(cfg, agg.target);
        for (int c = 0; c < static_cast<int>(trends.size()); ++c) {
            if (trends[c].kind != TrendSpec::Kind::Auto) continue;
            auto class_oracle = [&](const TrendSpec& t) {
                const auto inst = make_class_instance(agg, cfg, c, t);
                const auto r = enumerate_partitions(inst);
                Solution s;
                s.status = r.found ? SolveStatus::Optimal : SolveStatus::Infeasible;
                s.intervals = r.intervals;
                s.objective = r.score;
                s.trend_used = t;
                return s;
            };
            const auto& chosen = select_auto_trend(
                class_oracle(TrendSpec::ascending()), class_oracle(TrendSpec::descending()),
                class_oracle(TrendSpec::peak()), class_oracle(TrendSpec::valley()), false);
            trends[c] = chosen.feasible() ? chosen.trend_used : TrendSpec::none();
        }
        auto sol = oracle(trends);
        sol.trend_used = cfg.trend;
        sol.class_trends = trends;
        return sol;
    }

    if (cfg.trend.kind == TrendSpec::Kind::Auto) {
        const auto a = oracle({TrendSpec::ascending()});
        const auto d = oracle({TrendSpec::descending()});
        const auto p = oracle({TrendSpec::peak()});
        const auto v = oracle({TrendSpec::valley()});
        return select_auto_trend(a, d, p, v, minimizes(agg));
    }
    return oracle({cfg.trend});
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

std::optional<int> smallest_change_point(const AggregateSet& agg,
                                         const std::vector<Interval>& intervals, bool peak,
                                         double beta) {
    const auto seqs = bin_sequences(agg, intervals);
    std::vector<int> ends;
    for (const auto& iv : intervals) ends.push_back(iv.end);
    for (int t = 0; t < agg.n; ++t) {
        const auto trend = peak ? TrendSpec::peak_fixed(t) : TrendSpec::valley_fixed(t);
        if (check_trend(seqs.front(), trend, beta, ends)) return t;
    }
    return std::nullopt;
}

std::vector<std::vector<double>> bin_sequences(const AggregateSet& agg,
                                               const std::vector<Interval>& intervals) {
    std::vector<const TriMatrix<double>*> sources;
    switch (agg.target.kind) {
        case TargetKind::Kind::Binary: sources = {&agg.event_rate}; break;
        case TargetKind::Kind::Continuous: sources = {&agg.mean}; break;
        case TargetKind::Kind::Multiclass:
            for (const auto& d : agg.class_event_rate) sources.push_back(&d);
            break;
    }
    std::vector<std::vector<double>> out;
    for (const auto* src : sources) {
        std::vector<double> seq;
        for (const auto& iv : intervals) seq.push_back(src->at(iv));
        out.push_back(std::move(seq));
    }
    return out;
}

double partition_score(const AggregateSet& agg, const BinningConfig& cfg,
                       const std::vector<Interval>& intervals) {
    double sum = 0.0;
    std::vector<std::int64_t> counts;
    for (const auto& iv : intervals) {
        sum += interval_value(agg, iv);
        counts.push_back(agg.records.at(iv));
    }
    if (cfg.concentration.kind == Concentration::Kind::Off) return sum;
    return sum - cfg.concentration.gamma *
                     concentration_penalty(counts, cfg.concentration.kind, agg.total);
}

Solution make_solution(const AggregateSet& agg, const BinningConfig& cfg,
                       std::vector<Interval> intervals, SolveStatus status) {
    Solution sol;
    sol.status = status;
    sol.trend_used = cfg.trend;
    const double score = partition_score(agg, cfg, intervals);
    sol.objective = minimizes(agg) ? -score : score;
    for (const auto& iv : intervals) {
        BinStats st;
        st.count = agg.records.at(iv);
        if (agg.target.is_binary()) {
            st.nonevent = agg.nonevents.at(iv);
            st.event = agg.events.at(iv);
            st.event_rate = agg.event_rate.at(iv);
            st.woe = woe(st.nonevent, st.event, agg.total_nonevent, agg.total_event);
            const double p =
                static_cast<double>(st.nonevent) / static_cast<double>(agg.total_nonevent);
            const double q = static_cast<double>(st.event) / static_cast<double>(agg.total_event);
            st.iv = divergence_contrib(p, q, Divergence::IV);
            st.js = divergence_contrib(p, q, Divergence::JSD);
        } else if (agg.target.is_continuous()) {
            for (int z = iv.start; z <= iv.end; ++z) st.sum += agg.sum[z];
            st.mean = agg.mean.at(iv);
        } else {
            st.class_counts.assign(agg.class_totals.size(), 0);
            for (int z = iv.start; z <= iv.end; ++z)
                for (std::size_t c = 0; c < st.class_counts.size(); ++c)
                    st.class_counts[c] += agg.class_count[z][c];
        }
        sol.per_bin.push_back(std::move(st));
    }
    sol.intervals = std::move(intervals);
    return sol;
}

std::vector<std::string> feasibility_violations(const AggregateSet& agg,
                                                const BinningConfig& cfg,
                                                const PValuePairs& pairs,
                                                const std::vector<Interval>& intervals,
                                                const std::vector<TrendSpec>& trends) {
    const auto inst = make_instance(agg, cfg, pairs, trends);
    return instance_violations(inst, intervals);
}

}  // namespace optbin
