// Random instances shared by the unit and acceptance tests.
#pragma once

#include <random>
#include <vector>

#include "optbin/aggregate.hpp"
#include "optbin/core.hpp"
#include "optbin/preprocess.hpp"

namespace optbin::testing {

inline PrebinTable binary_table(const std::vector<std::int64_t>& ne,
                                const std::vector<std::int64_t>& e) {
    PrebinTable t;
    t.target = TargetKind::binary();
    t.nonevent = ne;
    t.event = e;
    for (std::size_t i = 0; i < ne.size(); ++i) t.count.push_back(ne[i] + e[i]);
    t.sum.assign(ne.size(), 0.0);
    for (std::size_t i = 0; i + 1 < ne.size(); ++i) t.splits.push_back(static_cast<double>(i));
    return t;
}

inline PrebinTable continuous_table(const std::vector<std::int64_t>& count,
                                    const std::vector<double>& sum) {
    PrebinTable t;
    t.target = TargetKind::continuous();
    t.count = count;
    t.sum = sum;
    t.nonevent.assign(count.size(), 0);
    t.event.assign(count.size(), 0);
    for (std::size_t i = 0; i + 1 < count.size(); ++i) t.splits.push_back(static_cast<double>(i));
    return t;
}

inline PrebinTable multiclass_table(const std::vector<std::vector<std::int64_t>>& counts) {
    PrebinTable t;
    t.target = TargetKind::multiclass(static_cast<int>(counts.front().size()));
    t.class_count = counts;
    for (const auto& row : counts) {
        std::int64_t r = 0;
        for (auto c : row) r += c;
        t.count.push_back(r);
    }
    t.sum.assign(counts.size(), 0.0);
    t.nonevent.assign(counts.size(), 0);
    t.event.assign(counts.size(), 0);
    for (std::size_t i = 0; i + 1 < counts.size(); ++i) t.splits.push_back(static_cast<double>(i));
    return t;
}

inline AggregateSet random_binary(std::mt19937_64& rng, int n, Divergence div = Divergence::IV) {
    std::uniform_int_distribution<std::int64_t> cnt(1, 60);
    std::vector<std::int64_t> ne(n), e(n);
    for (int i = 0; i < n; ++i) {
        ne[i] = cnt(rng);
        e[i] = cnt(rng);
    }
    return build_binary(binary_table(ne, e), div);
}

inline AggregateSet random_continuous(std::mt19937_64& rng, int n, NormP norm = NormP::L2) {
    std::uniform_int_distribution<std::int64_t> cnt(1, 60);
    std::normal_distribution<double> mean(0.0, 3.0);
    std::vector<std::int64_t> c(n);
    std::vector<double> s(n);
    for (int i = 0; i < n; ++i) {
        c[i] = cnt(rng);
        s[i] = mean(rng) * static_cast<double>(c[i]);
    }
    return build_continuous(continuous_table(c, s), norm);
}

inline AggregateSet random_multiclass(std::mt19937_64& rng, int n, int classes = 3,
                                      Divergence div = Divergence::IV) {
    std::uniform_int_distribution<std::int64_t> cnt(1, 40);
    std::vector<std::vector<std::int64_t>> counts(n, std::vector<std::int64_t>(classes));
    for (auto& row : counts)
        for (auto& c : row) c = cnt(rng);
    return build_multiclass(multiclass_table(counts), div);
}

inline std::vector<TrendSpec> all_trend_kinds(int n, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> t(0, n - 1);
    return {TrendSpec::none(),     TrendSpec::ascending(),      TrendSpec::descending(),
            TrendSpec::concave(),  TrendSpec::convex(),         TrendSpec::peak(),
            TrendSpec::valley(),   TrendSpec::peak_fixed(t(rng)), TrendSpec::valley_fixed(t(rng)),
            TrendSpec::auto_select()};
}

// Random mix of bin bounds, record bounds, beta, alpha and concentration.
inline BinningConfig random_config(std::mt19937_64& rng, const AggregateSet& agg,
                                   const TrendSpec& trend) {
    BinningConfig cfg;
    cfg.trend = trend;
    std::uniform_int_distribution<int> coin(0, 1);
    std::uniform_int_distribution<int> pick(0, 3);
    if (coin(rng)) {
        std::uniform_int_distribution<int> lo(1, std::min(agg.n, 3));
        cfg.min_bins = lo(rng);
        std::uniform_int_distribution<int> hi(*cfg.min_bins, agg.n);
        cfg.max_bins = hi(rng);
    } else {
        cfg.min_bins = 1;
    }
    if (coin(rng)) {
        const auto avg = agg.total / agg.n;
        std::uniform_int_distribution<std::int64_t> lo(0, std::max<std::int64_t>(1, avg));
        cfg.min_bin_size = lo(rng);
        if (coin(rng)) cfg.max_bin_size = agg.total / 2 + lo(rng);
    } else {
        cfg.min_bin_size = 0;
    }
    if (agg.target.is_binary() && pick(rng) == 0) {
        cfg.min_bin_event = 3;
        cfg.min_bin_nonevent = 3;
    }
    cfg.min_diff = coin(rng) ? 0.01 : 0.0;
    if (agg.target.is_binary() && coin(rng)) cfg.max_pvalue = 0.05;
    const int conc = pick(rng);
    const Concentration::Kind kinds[] = {Concentration::Kind::Off, Concentration::Kind::Std,
                                         Concentration::Kind::HHI,
                                         Concentration::Kind::MaxMinDiff};
    cfg.concentration.kind = kinds[conc];
    cfg.concentration.gamma = coin(rng) ? 0.1 : 0.0;
    return cfg;
}

}  // namespace optbin::testing
