#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "optbin/solver.hpp"
#include "support.hpp"

using namespace optbin;
using testing::binary_table;

namespace {

BinningConfig loose(TrendSpec trend) {
    BinningConfig cfg;
    cfg.trend = trend;
    cfg.min_bins = 1;
    cfg.min_bin_size = 0;
    return cfg;
}

AggregateSet binary(const std::vector<std::int64_t>& ne, const std::vector<std::int64_t>& e) {
    return build_binary(binary_table(ne, e), Divergence::IV);
}

}  // namespace

TEST_SUITE("solver") {

TEST_CASE("ascending keeps two ascending pre-bins") {
    const auto agg = binary({3, 1}, {1, 3});
    const auto sol = solve(agg, loose(TrendSpec::ascending()), PValuePairs::off());
    REQUIRE(sol.status == SolveStatus::Optimal);
    CHECK(sol.intervals.size() == 2);
    CHECK(std::abs(sol.objective - 0.5 * std::log(3.0) * 2.0) < 1e-6);
}

TEST_CASE("descending on ascending rates merges everything") {
    const auto agg = binary({3, 1}, {1, 3});
    const auto sol = solve(agg, loose(TrendSpec::descending()), PValuePairs::off());
    REQUIRE(sol.status == SolveStatus::Optimal);
    CHECK(sol.intervals == std::vector<Interval>{{0, 1}});
    CHECK(sol.objective == 0.0);
}

TEST_CASE("min_bins = max_bins = n keeps every pre-bin") {
    const auto agg = binary({5, 3, 8, 2}, {1, 4, 2, 6});
    auto cfg = loose(TrendSpec::none());
    cfg.min_bins = 4;
    cfg.max_bins = 4;
    const auto sol = solve(agg, cfg, PValuePairs::off());
    REQUIRE(sol.intervals.size() == 4);
    double sum = 0.0;
    for (int i = 0; i < 4; ++i) sum += agg.divergence_value(i, i);
    CHECK(sol.objective == doctest::Approx(sum));
}

TEST_CASE("beta forces a merge") {
    const auto agg = binary({75, 74}, {25, 26});
    auto cfg = loose(TrendSpec::ascending());
    CHECK(solve(agg, cfg, PValuePairs::off()).intervals.size() == 2);
    cfg.min_diff = 0.05;
    CHECK(solve(agg, cfg, PValuePairs::off()).intervals.size() == 1);
}

TEST_CASE("trend predicate") {
    const std::vector<double> peak{0.1, 0.3, 0.2};
    CHECK(check_trend(peak, TrendSpec::peak(), 0.0));
    CHECK_FALSE(check_trend(peak, TrendSpec::valley(), 0.0));
    const std::vector<double> linear{0.1, 0.2, 0.3};
    CHECK(check_trend(linear, TrendSpec::concave(), 0.0));
    CHECK(check_trend(linear, TrendSpec::ascending(), 0.0));
    CHECK_FALSE(check_trend(linear, TrendSpec::ascending(), 0.15));
    const std::vector<double> zigzag{0.5, 0.3, 0.4, 0.2};
    CHECK_FALSE(check_trend(zigzag, TrendSpec::descending(), 0.0));
    CHECK_FALSE(check_trend(zigzag, TrendSpec::peak(), 0.0));
    CHECK(check_trend(std::vector<double>{0.5, 0.1, 0.4}, TrendSpec::convex(), 0.0));
    CHECK_FALSE(check_trend(std::vector<double>{0.5, 0.1, 0.4}, TrendSpec::concave(), 0.0));
    CHECK_THROWS(check_trend(linear, TrendSpec::auto_select(), 0.0));
}

TEST_CASE("fixed change point uses bin ends") {
    const std::vector<double> v{0.1, 0.3, 0.2};
    const std::vector<int> ends{1, 3, 5};
    CHECK(check_trend(v, TrendSpec::peak_fixed(4), 0.0, ends));   // rise over ends 1, 3
    CHECK(check_trend(v, TrendSpec::peak_fixed(2), 0.0, ends));   // 0.1 | 0.3 > 0.2
    CHECK_FALSE(check_trend(v, TrendSpec::peak_fixed(0), 0.0, ends));
    CHECK_FALSE(check_trend(v, TrendSpec::peak_fixed(6), 0.0, ends));
}

TEST_CASE("presolve on ascending rates is empty") {
    const auto agg = binary({9, 8, 7, 6}, {1, 2, 3, 4});
    CHECK(presolve_monotonic(agg.event_rate, TrendSpec::ascending()).empty());
}

TEST_CASE("presolve forbids closing a bin above the next rate") {
    // Rates 0.75, 0.25, 0.5: merging pre-bins 0 and 1 gives 0.5 > 0.25.
    const auto agg = binary({1, 3, 3}, {3, 1, 3});
    const auto mask = presolve_monotonic(agg.event_rate, TrendSpec::ascending());
    CHECK(mask.forbids_end(0));
    CHECK_FALSE(mask.forbids_end(1));
    CHECK_FALSE(mask.forbids_end(2));
    // Any partition closing a bin at 0 is indeed infeasible for ascending.
    const auto v = bin_sequences(agg, {{0, 0}, {1, 2}});
    CHECK_FALSE(check_trend(v.front(), TrendSpec::ascending(), 0.0));
    CHECK_FALSE(check_trend(bin_sequences(agg, {{0, 0}, {1, 1}, {2, 2}}).front(),
                            TrendSpec::ascending(), 0.0));
}

TEST_CASE("presolve of one pre-bin is empty") {
    const auto agg = binary({4}, {2});
    CHECK(presolve_monotonic(agg.event_rate, TrendSpec::ascending()).empty());
}

TEST_CASE("presolve keeps the optimum when applicable") {
    std::mt19937_64 rng(11);
    for (int rep = 0; rep < 200; ++rep) {
        const int n = 3 + static_cast<int>(rng() % 8);
        const auto agg = testing::random_binary(rng, n);
        for (auto t : {TrendSpec::ascending(), TrendSpec::descending()}) {
            auto cfg = loose(t);
            cfg.presolve = true;
            REQUIRE(presolve_applicable(agg, cfg));
            const auto a = solve(agg, cfg, PValuePairs::off());
            const auto b = brute_force_oracle(agg, cfg, PValuePairs::off());
            REQUIRE(a.status == b.status);
            CHECK(a.objective == doctest::Approx(b.objective).epsilon(1e-12));
        }
    }
}

TEST_CASE("presolve is skipped when binding bounds could drop the optimum") {
    const auto agg = binary({9, 8, 7, 6}, {1, 2, 3, 4});
    auto cfg = loose(TrendSpec::ascending());
    cfg.min_bins = 3;
    CHECK_FALSE(presolve_applicable(agg, cfg));
    cfg.min_bins = 1;
    cfg.min_bin_size = 1000;
    CHECK_FALSE(presolve_applicable(agg, cfg));
    cfg.min_bin_size = 0;
    cfg.concentration = {Concentration::Kind::HHI, 0.1};
    CHECK_FALSE(presolve_applicable(agg, cfg));
    cfg.trend = TrendSpec::peak();
    cfg.concentration = {};
    CHECK_FALSE(presolve_applicable(agg, cfg));
}

TEST_CASE("peak keeps a single-reversal sequence") {
    const auto agg = binary({9, 5, 8}, {1, 5, 2});
    auto cfg = loose(TrendSpec::peak());
    cfg.min_bins = 3;
    const auto sol = solve(agg, cfg, PValuePairs::off());
    REQUIRE(sol.feasible());
    REQUIRE(sol.change_point.has_value());
    const std::vector<int> ends{0, 1, 2};
    CHECK(check_trend(bin_sequences(agg, sol.intervals).front(),
                      TrendSpec::peak_fixed(*sol.change_point), 0.0, ends));
    // Smallest such t: the first bin alone rises, the rest falls.
    CHECK(*sol.change_point == 1);
}

TEST_CASE("peak with change point 0 is descending") {
    std::mt19937_64 rng(3);
    for (int rep = 0; rep < 100; ++rep) {
        const auto agg = testing::random_binary(rng, 3 + static_cast<int>(rng() % 7));
        const auto a = solve(agg, loose(TrendSpec::peak_fixed(0)), PValuePairs::off());
        const auto b = solve(agg, loose(TrendSpec::descending()), PValuePairs::off());
        CHECK(a.objective == doctest::Approx(b.objective).epsilon(1e-12));
        CHECK(a.intervals == b.intervals);
    }
}

TEST_CASE("four pre-bin valley equals exhaustive search") {
    std::mt19937_64 rng(5);
    for (int rep = 0; rep < 100; ++rep) {
        const auto agg = testing::random_binary(rng, 4);
        const auto cfg = loose(TrendSpec::valley());
        const auto s = solve_peak_valley(agg, cfg, PValuePairs::off());
        // Exhaustive: every partition of 4 pre-bins whose rates form a valley.
        double best = -1.0;
        for (int mask = 0; mask < 8; ++mask) {
            std::vector<Interval> parts;
            int start = 0;
            for (int i = 0; i < 4; ++i)
                if (i == 3 || (mask >> i & 1)) {
                    parts.push_back({start, i});
                    start = i + 1;
                }
            if (!unimodal_ok(bin_sequences(agg, parts).front(), false, 0.0)) continue;
            double v = 0.0;
            for (const auto& iv : parts) v += agg.divergence_value.at(iv);
            best = std::max(best, v);
        }
        CHECK(s.objective == doctest::Approx(best).epsilon(1e-12));
    }
}

TEST_CASE("concentration penalties") {
    const std::vector<std::int64_t> even{50, 50};
    CHECK(concentration_penalty(even, Concentration::Kind::Std, 100) == 0.0);
    CHECK(concentration_penalty(even, Concentration::Kind::MaxMinDiff, 100) == 0.0);
    CHECK(concentration_penalty(even, Concentration::Kind::HHI, 100) == doctest::Approx(0.5));
    CHECK(concentration_penalty(std::vector<std::int64_t>{100}, Concentration::Kind::HHI, 100) ==
          doctest::Approx(1.0));
    const std::vector<std::int64_t> skew{30, 70};
    CHECK(concentration_penalty(skew, Concentration::Kind::MaxMinDiff, 100) == 40.0);
    CHECK(concentration_penalty(skew, Concentration::Kind::HHI, 100) == doctest::Approx(0.58));
    CHECK(concentration_penalty(skew, Concentration::Kind::Std, 100) ==
          doctest::Approx(std::sqrt(800.0)));
    CHECK(concentration_penalty(skew, Concentration::Kind::Off, 100) == 0.0);
}

TEST_CASE("p-value constraint on partitions") {
    CHECK(apply_pvalue_constraint({{0, 0}, {1, 1}}, PValuePairs::off()));
    const PValuePairs pairs(2, 0.05, {PValuePair{0, 0, 1, 1}});
    CHECK_FALSE(apply_pvalue_constraint({{0, 0}, {1, 1}}, pairs));
    CHECK(apply_pvalue_constraint({{0, 1}}, pairs));
}

TEST_CASE("identical classes tie at zero; fewer bins win") {
    const auto agg = build_multiclass(
        testing::multiclass_table({{20, 10, 5}, {20, 10, 5}, {20, 10, 5}, {20, 10, 5}}),
        Divergence::IV);
    auto cfg = loose(TrendSpec::none());
    cfg.min_bins = 2;
    const auto sol = solve(agg, cfg, PValuePairs::off());
    REQUIRE(sol.feasible());
    CHECK(sol.objective == 0.0);
    CHECK(sol.intervals == std::vector<Interval>{{0, 0}, {1, 3}});
}

TEST_CASE("opposing class trends force a merge") {
    // Classes 0 and 1 both rise from pre-bin 0 to 1.
    const auto agg = build_multiclass(testing::multiclass_table({{10, 10, 20}, {20, 20, 5}}),
                                      Divergence::IV);
    auto cfg = loose(TrendSpec::none());
    cfg.class_trends = {TrendSpec::ascending(), TrendSpec::descending(), TrendSpec::none()};
    const auto sol = solve(agg, cfg, PValuePairs::off());
    CHECK(sol.intervals == std::vector<Interval>{{0, 1}});
    cfg.min_bins = 2;
    CHECK(solve(agg, cfg, PValuePairs::off()).status == SolveStatus::Infeasible);
}

TEST_CASE("multi-class objective is the sum of class objectives") {
    std::mt19937_64 rng(9);
    for (int rep = 0; rep < 50; ++rep) {
        const auto agg = testing::random_multiclass(rng, 6);
        const auto sol = solve(agg, loose(TrendSpec::none()), PValuePairs::off());
        double sum = 0.0;
        for (int c = 0; c < 3; ++c)
            for (const auto& iv : sol.intervals) sum += agg.class_divergence[c].at(iv);
        CHECK(sol.objective == doctest::Approx(sum).epsilon(1e-12));
    }
}

TEST_CASE("auto picks ascending for ascending rates") {
    const auto agg = binary({90, 80, 70, 60, 50}, {10, 20, 30, 40, 50});
    const auto sol = auto_trend(agg, loose(TrendSpec::auto_select()), PValuePairs::off());
    CHECK(sol.trend_used == TrendSpec::ascending());
    CHECK(sol.intervals.size() == 5);
}

TEST_CASE("auto picks valley for a V shape") {
    const auto agg = binary({50, 70, 90, 70, 50}, {50, 30, 10, 30, 50});
    auto cfg = loose(TrendSpec::auto_select());
    const auto sol = auto_trend(agg, cfg, PValuePairs::off());
    CHECK(sol.trend_used == TrendSpec::valley());
    // Oracle values behind the rule.
    double mono = 0.0;
    for (auto t : {TrendSpec::ascending(), TrendSpec::descending()}) {
        cfg.trend = t;
        mono = std::max(mono, brute_force_oracle(agg, cfg, PValuePairs::off()).objective);
    }
    cfg.trend = TrendSpec::valley();
    const double uni = brute_force_oracle(agg, cfg, PValuePairs::off()).objective;
    CHECK(uni >= 1.1 * mono);
    CHECK(sol.objective == doctest::Approx(uni));
}

TEST_CASE("auto on flat rates returns descending") {
    const auto agg = binary({30, 30, 30, 30}, {10, 10, 10, 10});
    const auto sol = auto_trend(agg, loose(TrendSpec::auto_select()), PValuePairs::off());
    CHECK(sol.trend_used == TrendSpec::descending());
    CHECK(sol.objective == 0.0);
}

TEST_CASE("oracle edge cases") {
    const auto one = binary({4}, {2});
    const auto sol = brute_force_oracle(one, loose(TrendSpec::none()), PValuePairs::off());
    CHECK(sol.intervals == std::vector<Interval>{{0, 0}});
    auto cfg = loose(TrendSpec::none());
    cfg.min_bins = 3;
    CHECK(brute_force_oracle(binary({1, 2}, {2, 1}), cfg, PValuePairs::off()).status ==
          SolveStatus::Infeasible);
    CHECK(solve(binary({1, 2}, {2, 1}), cfg, PValuePairs::off()).status ==
          SolveStatus::Infeasible);
}

TEST_CASE("exact search matches the oracle on n = 12") {
    std::mt19937_64 rng(21);
    for (int rep = 0; rep < 20; ++rep) {
        const auto agg = testing::random_binary(rng, 12);
        const auto trends = testing::all_trend_kinds(12, rng);
        const auto cfg = testing::random_config(rng, agg, trends[rep % trends.size()]);
        const auto pairs = pairs_for(agg, cfg);
        const auto a = solve(agg, cfg, pairs);
        const auto b = brute_force_oracle(agg, cfg, pairs);
        REQUIRE(a.status == b.status);
        if (a.feasible()) CHECK(a.objective == doctest::Approx(b.objective).epsilon(1e-12));
    }
}

TEST_CASE("continuous objective is the deviation") {
    const auto agg = build_continuous(testing::continuous_table({1, 1, 1}, {0.0, 2.0, 1.0}),
                                      NormP::L1);
    auto cfg = loose(TrendSpec::ascending());
    const auto sol = solve(agg, cfg, PValuePairs::off());
    REQUIRE(sol.feasible());
    // Means 0, 2, 1: best ascending is {0}, {2, 1} with deviation 1.
    CHECK(sol.intervals == std::vector<Interval>{{0, 0}, {1, 2}});
    CHECK(sol.objective == doctest::Approx(1.0));
}

TEST_CASE("tie-break ordering") {
    CHECK(better_partition(1.0, {{0, 1}}, 0.5, {{0, 0}, {1, 1}}));
    CHECK(better_partition(1.0, {{0, 1}}, 1.0, {{0, 0}, {1, 1}}));
    CHECK(better_partition(1.0, {{0, 0}, {1, 2}}, 1.0, {{0, 1}, {2, 2}}));
    CHECK_FALSE(better_partition(1.0, {{0, 1}}, 1.0, {{0, 1}}));
}

TEST_CASE("feasibility violations are reported") {
    const auto agg = binary({3, 1}, {1, 3});
    const auto cfg = loose(TrendSpec::descending());
    CHECK_FALSE(feasibility_violations(agg, cfg, PValuePairs::off(), {{0, 0}, {1, 1}},
                                       {TrendSpec::descending()})
                    .empty());
    CHECK(feasibility_violations(agg, cfg, PValuePairs::off(), {{0, 1}}, {TrendSpec::descending()})
              .empty());
}

TEST_CASE("larger gamma never raises the penalty of the optimum") {
    std::mt19937_64 rng(31);
    const Concentration::Kind kinds[] = {Concentration::Kind::Std, Concentration::Kind::HHI,
                                         Concentration::Kind::MaxMinDiff};
    for (int rep = 0; rep < 60; ++rep) {
        const auto agg = testing::random_binary(rng, 4 + static_cast<int>(rng() % 8));
        auto cfg = loose(rep % 2 ? TrendSpec::none() : TrendSpec::ascending());
        cfg.concentration.kind = kinds[rep % 3];
        double previous = std::numeric_limits<double>::infinity();
        for (double gamma : {0.0, 0.001, 0.01, 0.1, 1.0}) {
            cfg.concentration.gamma = gamma;
            const auto sol = solve(agg, cfg, PValuePairs::off());
            REQUIRE(sol.feasible());
            const double pen =
                concentration_penalty(sol.intervals, agg.records, cfg.concentration.kind, agg.total);
            CHECK(pen <= previous + 1e-9);
            previous = pen;
        }
    }
}

TEST_CASE("objective matches the bin statistics") {
    std::mt19937_64 rng(41);
    for (int rep = 0; rep < 100; ++rep) {
        const auto div = rep % 2 ? Divergence::IV : Divergence::JSD;
        const auto agg = testing::random_binary(rng, 3 + static_cast<int>(rng() % 10), div);
        const auto cfg = testing::random_config(rng, agg, TrendSpec::descending());
        const auto sol = solve(agg, cfg, pairs_for(agg, cfg));
        if (!sol.feasible()) continue;
        REQUIRE(sol.per_bin.size() == sol.intervals.size());
        double v = 0.0;
        std::vector<std::int64_t> counts;
        for (const auto& b : sol.per_bin) {
            v += divergence_contrib(double(b.nonevent) / double(agg.total_nonevent),
                                    double(b.event) / double(agg.total_event), div);
            counts.push_back(b.count);
        }
        v -= cfg.concentration.gamma *
             concentration_penalty(counts, cfg.concentration.kind, agg.total);
        CHECK(std::abs(sol.objective - v) <= 1e-10);
    }
}

}
