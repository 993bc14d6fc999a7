#include "optbin/localsearch.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <random>

#include "optbin/instance.hpp"
#include "optbin/solver.hpp"

namespace optbin {

DiagonalEncoding decode(const std::vector<int>& x) {
    if (x.empty()) throw MalformedEncoding("empty encoding");
    if (x.back() != 1) throw MalformedEncoding("last pre-bin must close a bin");
    DiagonalEncoding enc;
    enc.x = x;
    const int n = static_cast<int>(x.size());
    enc.a.assign(n, 0);
    enc.z.assign(n, 0);
    int a_prev = 0;
    int x_prev = 0;
    for (int i = 0; i < n; ++i) {
        if (x[i] != 0 && x[i] != 1) throw MalformedEncoding("encoding entries must be 0 or 1");
        enc.a[i] = (a_prev + 1) * (1 - x[i]);
        enc.z[i] = a_prev * (1 - x_prev) * x[i];
        if (x[i] == 1) enc.intervals.push_back({i - enc.z[i], i});
        a_prev = enc.a[i];
        x_prev = x[i];
    }
    return enc;
}

std::vector<int> encode(const std::vector<Interval>& intervals, int n) {
    if (!is_partition(intervals, n)) throw MalformedEncoding("intervals are not a partition");
    std::vector<int> x(n, 0);
    for (const auto& iv : intervals) x[iv.end] = 1;
    return x;
}

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

using PairRule = bool (*)(double, double, double);

int pair_violations(const std::vector<double>& v, std::size_t from, std::size_t to, PairRule rule,
                    double beta) {
    int count = 0;
    for (std::size_t l = from + 1; l < to; ++l)
        for (std::size_t k = from; k < l; ++k)
            if (!rule(v[k], v[l], beta)) ++count;
    return count;
}

// Number of violated pairs/triples; 0 iff check_trend holds.
int trend_violations(const std::vector<double>& v, const std::vector<int>& ends,
                     const TrendSpec& t, double beta) {
    const std::size_t m = v.size();
    switch (t.kind) {
        case TrendSpec::Kind::None: return 0;
        case TrendSpec::Kind::Ascending: return pair_violations(v, 0, m, ascending_pair_ok, beta);
        case TrendSpec::Kind::Descending:
            return pair_violations(v, 0, m, descending_pair_ok, beta);
        case TrendSpec::Kind::Concave:
        case TrendSpec::Kind::Convex: {
            const bool concave = t.kind == TrendSpec::Kind::Concave;
            int count = 0;
            for (std::size_t i = 2; i < m; ++i)
                for (std::size_t j = 1; j < i; ++j)
                    for (std::size_t k = 0; k < j; ++k) {
                        const bool ok = concave ? concave_triple_ok(v[k], v[j], v[i])
                                                : convex_triple_ok(v[k], v[j], v[i]);
                        if (!ok) ++count;
                    }
            return count;
        }
        case TrendSpec::Kind::Peak:
        case TrendSpec::Kind::Valley: {
            const bool peak = t.kind == TrendSpec::Kind::Peak;
            const PairRule first = peak ? ascending_pair_ok : descending_pair_ok;
            const PairRule second = peak ? descending_pair_ok : ascending_pair_ok;
            int best = std::numeric_limits<int>::max();
            for (std::size_t s = 0; s <= m; ++s)
                best = std::min(best, pair_violations(v, 0, s, first, beta) +
                                          pair_violations(v, s, m, second, beta));
            return best;
        }
        case TrendSpec::Kind::PeakFixed:
        case TrendSpec::Kind::ValleyFixed: {
            const bool peak = t.kind == TrendSpec::Kind::PeakFixed;
            std::size_t s = 0;
            while (s < m && ends[s] < t.change_point) ++s;
            return pair_violations(v, 0, s, peak ? ascending_pair_ok : descending_pair_ok, beta) +
                   pair_violations(v, s, m, peak ? descending_pair_ok : ascending_pair_ok, beta);
        }
        case TrendSpec::Kind::Auto: break;
    }
    throw BinningError("auto is not a concrete trend");
}

struct Evaluation {
    std::int64_t violation = 0;
    double score = kNegInf;

    // Fewer violations first, then higher score.
    bool better_than(const Evaluation& o) const {
        if (violation != o.violation) return violation < o.violation;
        return score > o.score;
    }
};

Evaluation evaluate(const SearchInstance& inst, const std::vector<int>& x) {
    const auto intervals = decode(x).intervals;
    Evaluation ev;
    const auto& lim = inst.limits;
    const int m = static_cast<int>(intervals.size());
    if (m < lim.min_bins) ev.violation += lim.min_bins - m;
    if (m > lim.max_bins) ev.violation += m - lim.max_bins;
    std::vector<int> ends;
    for (const auto& iv : intervals) {
        if (!inst.interval_ok.at(iv)) ++ev.violation;
        ends.push_back(iv.end);
    }
    if (inst.pairs != nullptr && !inst.pairs->empty()) {
        for (std::size_t b = 1; b < intervals.size(); ++b)
            if (inst.pairs->contains(intervals[b - 1].end, intervals[b - 1].start,
                                     intervals[b].end))
                ++ev.violation;
    }
    for (std::size_t s = 0; s < inst.sequences.size(); ++s) {
        std::vector<double> v;
        for (const auto& iv : intervals) v.push_back(inst.sequences[s]->at(iv));
        ev.violation += trend_violations(v, ends, inst.trends[s], inst.beta);
    }
    ev.score = instance_score(inst, intervals);
    return ev;
}

struct LsResult {
    bool found = false;
    double score = kNegInf;
    std::vector<Interval> intervals;
};

class LocalSearch {
public:
    LocalSearch(const SearchInstance& inst, const LsBudget& budget, std::uint64_t seed)
        : inst_(inst), budget_(budget), rng_(seed) {}

    LsResult run() {
        const int n = inst_.n;
        if (n < 1) return best_;
        const auto deadline =
            std::chrono::steady_clock::now() + std::chrono::duration<double>(budget_.seconds);
        std::vector<int> x(n, 1);
        Evaluation cur = evaluate(inst_, x);
        record(x, cur);
        std::int64_t iterations = 0;
        while (iterations < budget_.iterations && std::chrono::steady_clock::now() < deadline) {
            ++iterations;
            std::vector<int> best_x;
            Evaluation best_ev;
            best_ev.violation = std::numeric_limits<std::int64_t>::max();
            auto consider = [&](const std::vector<int>& cand) {
                const auto ev = evaluate(inst_, cand);
                if (best_x.empty() || ev.better_than(best_ev)) {
                    best_x = cand;
                    best_ev = ev;
                }
            };
            std::vector<int> cand = x;
            for (int i = 0; i + 1 < n; ++i) {
                cand[i] ^= 1;
                consider(cand);
                cand[i] ^= 1;
            }
            for (int i = 0; i + 1 < n; ++i) {
                if (x[i] != 1) continue;
                for (int d : {-1, 1}) {
                    const int k = i + d;
                    if (k < 0 || k + 1 >= n || x[k] == 1) continue;
                    cand[i] = 0;
                    cand[k] = 1;
                    consider(cand);
                    cand[i] = 1;
                    cand[k] = 0;
                }
            }
            if (!best_x.empty() && best_ev.better_than(cur)) {
                x = std::move(best_x);
                cur = best_ev;
                record(x, cur);
            } else {
                x = random_encoding();
                cur = evaluate(inst_, x);
                record(x, cur);
            }
        }
        return best_;
    }

private:
    std::vector<int> random_encoding() {
        const int n = inst_.n;
        std::uniform_real_distribution<double> density(0.05, 0.95);
        std::bernoulli_distribution bit(density(rng_));
        std::vector<int> x(n, 0);
        for (int i = 0; i + 1 < n; ++i) x[i] = bit(rng_) ? 1 : 0;
        x[n - 1] = 1;
        return x;
    }

    void record(const std::vector<int>& x, const Evaluation& ev) {
        if (ev.violation != 0) return;
        const auto intervals = decode(x).intervals;
        if (!best_.found || better_partition(ev.score, intervals, best_.score, best_.intervals)) {
            best_.found = true;
            best_.score = ev.score;
            best_.intervals = intervals;
        }
    }

    const SearchInstance& inst_;
    LsBudget budget_;
    std::mt19937_64 rng_;
    LsResult best_;
};

Solution finish(const AggregateSet& agg, const BinningConfig& cfg, const LsResult& r,
                const TrendSpec& trend) {
    Solution sol;
    if (r.found) sol = make_solution(agg, cfg, r.intervals, SolveStatus::Feasible);
    sol.trend_used = trend;
    if (!sol.feasible()) return sol;
    if (trend.is_fixed()) sol.change_point = trend.change_point;
    if (trend.kind == TrendSpec::Kind::Peak || trend.kind == TrendSpec::Kind::Valley)
        sol.change_point = smallest_change_point(agg, sol.intervals,
                                                 trend.kind == TrendSpec::Kind::Peak,
                                                 cfg.min_diff);
    return sol;
}

Solution single(const AggregateSet& agg, const BinningConfig& cfg, const PValuePairs& pairs,
                const TrendSpec& trend, const LsBudget& budget, std::uint64_t seed) {
    const auto inst = make_instance(agg, cfg, pairs, {trend});
    return finish(agg, cfg, LocalSearch(inst, budget, seed).run(), trend);
}

LsBudget quarter(const LsBudget& b) {
    return {std::max<std::int64_t>(1, b.iterations / 4), b.seconds / 4.0};
}

}  // namespace

std::optional<double> ls_objective(const std::vector<int>& x, const AggregateSet& agg,
                                   const BinningConfig& cfg, const PValuePairs& pairs) {
    const auto enc = decode(x);
    if (static_cast<int>(x.size()) != agg.n)
        throw MalformedEncoding("encoding length differs from the pre-bin count");
    const auto trends = class_trends(cfg, agg.target);
    if (!feasibility_violations(agg, cfg, pairs, enc.intervals, trends).empty())
        return std::nullopt;
    const double score = partition_score(agg, cfg, enc.intervals);
    return agg.target.is_continuous() ? -score : score;
}

Solution ls_solve(const AggregateSet& agg, const BinningConfig& cfg, const PValuePairs& pairs,
                  const LsBudget& budget, std::uint64_t seed) {
    check_config_for(cfg, agg);
    if (budget.iterations < 0 || !(budget.seconds >= 0.0))
        throw InvalidConfig({"local search budget must be non-negative"});

    if (agg.target.is_multiclass()) {
        auto trends = class_trends(cfg, agg.target);
        for (int c = 0; c < static_cast<int>(trends.size()); ++c) {
            if (trends[c].kind != TrendSpec::Kind::Auto) continue;
            auto run = [&](const TrendSpec& t) {
                const auto inst = make_class_instance(agg, cfg, c, t);
                const auto r = LocalSearch(inst, quarter(quarter(budget)), seed + c).run();
                Solution s;
                s.status = r.found ? SolveStatus::Feasible : SolveStatus::Infeasible;
                s.intervals = r.intervals;
                s.objective = r.score;
                s.trend_used = t;
                return s;
            };
            const auto& chosen =
                select_auto_trend(run(TrendSpec::ascending()), run(TrendSpec::descending()),
                                  run(TrendSpec::peak()), run(TrendSpec::valley()), false);
            trends[c] = chosen.feasible() ? chosen.trend_used : TrendSpec::none();
        }
        const auto inst = make_instance(agg, cfg, pairs, trends);
        auto sol = finish(agg, cfg, LocalSearch(inst, budget, seed).run(), cfg.trend);
        sol.class_trends = trends;
        return sol;
    }

    if (cfg.trend.kind == TrendSpec::Kind::Auto) {
        const auto b = quarter(budget);
        const auto a = single(agg, cfg, pairs, TrendSpec::ascending(), b, seed);
        const auto d = single(agg, cfg, pairs, TrendSpec::descending(), b, seed + 1);
        const auto p = single(agg, cfg, pairs, TrendSpec::peak(), b, seed + 2);
        const auto v = single(agg, cfg, pairs, TrendSpec::valley(), b, seed + 3);
        return select_auto_trend(a, d, p, v, agg.target.is_continuous());
    }
    return single(agg, cfg, pairs, cfg.trend, budget, seed);
}

}  // namespace optbin
