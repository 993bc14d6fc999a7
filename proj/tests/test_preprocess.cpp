#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "optbin/preprocess.hpp"
#include "support.hpp"

using namespace optbin;

namespace {

RawColumn column(std::vector<Cell> values, std::vector<double> target) {
    return RawColumn{std::move(values), std::move(target)};
}

}  // namespace

TEST_SUITE("preprocess") {

TEST_CASE("special codes are routed to the special subset") {
    const auto col = column({12.0, -7.0, 30.0, -7.0, std::monostate{}}, {0, 1, 0, 1, 1});
    const auto s = split_missing_special(col, {Cell{-9.0}, Cell{-8.0}, Cell{-7.0}});
    CHECK(s.clean.size() == 2);
    CHECK(s.special.size() == 2);
    CHECK(s.missing.size() == 1);
    for (const auto& v : s.special.values) CHECK(std::get<double>(v) == -7.0);
}

TEST_CASE("nothing missing and no specials leaves the column intact") {
    const auto col = column({1.0, 2.0, 3.0}, {0, 1, 0});
    const auto s = split_missing_special(col, {});
    CHECK(s.clean.values == col.values);
    CHECK(s.clean.target == col.target);
    CHECK(s.missing.empty());
    CHECK(s.special.empty());
}

TEST_CASE("all values missing") {
    const auto col = column({std::monostate{}, std::numeric_limits<double>::quiet_NaN()}, {0, 1});
    const auto s = split_missing_special(col, {});
    CHECK(s.clean.empty());
    CHECK(s.missing.size() == 2);
    CHECK(s.special.empty());
}

TEST_CASE("label specials match by text") {
    CHECK(is_special(Cell{std::string("N/A")}, {Cell{std::string("N/A")}}));
    CHECK(is_special(Cell{std::string("-7")}, {Cell{-7.0}}));
    CHECK_FALSE(is_special(Cell{3.0}, {Cell{-7.0}}));
}

TEST_CASE("uniform data gives splits near the deciles") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> v(1000);
    for (auto& x : v) x = u(rng);
    const auto splits = prebin_numeric(v, 10, 0.05);
    REQUIRE(splits.size() == 9);
    for (int k = 0; k < 9; ++k) CHECK(std::abs(splits[k] - 0.1 * (k + 1)) < 0.05);
}

TEST_CASE("constant column is degenerate") {
    CHECK_THROWS_AS(prebin_numeric(std::vector<double>(50, 3.0), 10, 0.05), DegenerateColumn);
}

TEST_CASE("massive ties collapse quantiles") {
    std::vector<double> v(900, 1.0);
    v.insert(v.end(), 100, 2.0);
    const auto splits = prebin_numeric(v, 10, 0.05);
    REQUIRE(splits.size() == 1);
    CHECK(splits[0] == doctest::Approx(1.5));
}

TEST_CASE("small pre-bins are merged away") {
    std::vector<double> v;
    for (int i = 0; i < 97; ++i) v.push_back(i < 50 ? 1.0 : 2.0);
    v.push_back(3.0);
    v.push_back(4.0);
    v.push_back(5.0);
    // 3, 4 and 5 each hold 1% of the records.
    for (double s : prebin_numeric(v, 20, 0.05)) CHECK(s < 3.0);
}

TEST_CASE("categories ordered by event rate") {
    RawColumn col;
    auto add = [&](const std::string& c, int events, int total) {
        for (int i = 0; i < total; ++i) {
            col.values.emplace_back(c);
            col.target.push_back(i < events ? 1.0 : 0.0);
        }
    };
    add("A", 3, 10);
    add("B", 1, 10);
    add("C", 2, 10);
    const auto ord = prebin_categorical(col, 0.0, TargetKind::binary());
    CHECK(ord.categories == std::vector<std::string>{"B", "C", "A"});
    CHECK(ord.others.empty());
    CHECK(ord.metric[0] == doctest::Approx(0.1));
}

TEST_CASE("rare categories go to others") {
    RawColumn col;
    for (int i = 0; i < 200; ++i) {
        col.values.emplace_back(i < 100 ? "X" : i < 199 ? "Y" : "Z");
        col.target.push_back(i % 3 == 0 ? 1.0 : 0.0);
    }
    const auto ord = prebin_categorical(col, 0.01, TargetKind::binary());
    CHECK(ord.categories.size() == 2);
    CHECK(ord.others == std::vector<std::string>{"Z"});
}

TEST_CASE("value on a split goes to the right") {
    const std::vector<double> splits{30.5, 48.5};
    CHECK(locate_bin(splits, 10.0) == 0);
    CHECK(locate_bin(splits, 30.5) == 1);
    CHECK(locate_bin(splits, 48.4) == 1);
    CHECK(locate_bin(splits, 48.5) == 2);
    CHECK(locate_bin({}, 1e9) == 0);
}

TEST_CASE("prebin table counts") {
    const auto col = column({1.0, 2.0, 3.0, 4.0, 5.0}, {0, 1, 1, 0, 1});
    const auto t = build_prebin_table(col, std::vector<double>{2.5}, TargetKind::binary());
    CHECK(t.count == std::vector<std::int64_t>{2, 3});
    CHECK(t.event == std::vector<std::int64_t>{1, 2});
    CHECK(t.nonevent == std::vector<std::int64_t>{1, 1});
    const auto single = build_prebin_table(col, std::vector<double>{}, TargetKind::binary());
    CHECK(single.count == std::vector<std::int64_t>{5});
}

TEST_CASE("refinement merges a pre-bin without non-events") {
    const auto t = refine_prebins(testing::binary_table({5, 0, 5}, {5, 5, 5}));
    CHECK(t.nonevent == std::vector<std::int64_t>{5, 5});
    CHECK(t.event == std::vector<std::int64_t>{5, 10});
    CHECK(t.splits.size() == 1);
}

TEST_CASE("refinement leaves valid tables alone") {
    const auto t = testing::binary_table({3, 4, 5}, {1, 2, 3});
    const auto r = refine_prebins(t);
    CHECK(r.nonevent == t.nonevent);
    CHECK(r.event == t.event);
    CHECK(r.splits == t.splits);
}

TEST_CASE("refinement of the last pre-bin merges left") {
    const auto r = refine_prebins(testing::binary_table({3, 4, 5}, {1, 2, 0}));
    CHECK(r.nonevent == std::vector<std::int64_t>{3, 9});
    CHECK(r.event == std::vector<std::int64_t>{1, 2});
}

TEST_CASE("no events at all is infeasible") {
    CHECK_THROWS_AS(refine_prebins(testing::binary_table({3, 4}, {0, 0})), InfeasibleInput);
}

TEST_CASE("refinement is idempotent and conserves counts") {
    std::mt19937_64 rng(12);
    std::uniform_int_distribution<std::int64_t> cnt(0, 4);
    for (int rep = 0; rep < 300; ++rep) {
        const int n = 1 + static_cast<int>(rng() % 10);
        std::vector<std::int64_t> ne(n), e(n);
        for (int i = 0; i < n; ++i) {
            ne[i] = cnt(rng);
            e[i] = cnt(rng);
        }
        const auto t = testing::binary_table(ne, e);
        if (t.total_event() == 0 || t.total_nonevent() == 0) {
            CHECK_THROWS_AS(refine_prebins(t), InfeasibleInput);
            continue;
        }
        const auto once = refine_prebins(t);
        CHECK(once.total() == t.total());
        CHECK(once.total_event() == t.total_event());
        CHECK(once.total_nonevent() == t.total_nonevent());
        CHECK(once.splits.size() + 1 == static_cast<std::size_t>(once.size()));
        for (int i = 0; i < once.size(); ++i) {
            CHECK(once.event[i] > 0);
            CHECK(once.nonevent[i] > 0);
        }
        const auto twice = refine_prebins(once);
        CHECK(twice.count == once.count);
        CHECK(twice.event == once.event);
        CHECK(twice.splits == once.splits);
    }
}

TEST_CASE("category order follows the metric") {
    std::mt19937_64 rng(13);
    RawColumn col;
    for (int r = 0; r < 3000; ++r) {
        const int k = static_cast<int>(rng() % 12);
        col.values.emplace_back("c" + std::to_string(k));
        col.target.push_back(static_cast<double>(rng() % 12) < k ? 1.0 : 0.0);
    }
    const auto ord = prebin_categorical(col, 0.0, TargetKind::binary());
    CHECK(ord.categories.size() == 12);
    for (std::size_t i = 1; i < ord.metric.size(); ++i) CHECK(ord.metric[i - 1] <= ord.metric[i]);
}

}
