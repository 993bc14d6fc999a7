// Raw column handling and pre-binning.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "optbin/core.hpp"

namespace optbin {

// Values and target aligned by row. Binary targets hold 0/1, multi-class
// targets hold zero-based class indices, continuous targets hold reals.
struct RawColumn {
    std::vector<Cell> values;
    std::vector<double> target;

    std::size_t size() const noexcept { return values.size(); }
    bool empty() const noexcept { return values.empty(); }
};

// Monostate or NaN.
bool is_missing(const Cell& c);
// Numeric cells match numeric specials by value and label specials by their
// rendering; label cells match any special with the same rendering.
bool is_special(const Cell& value, const std::vector<Cell>& specials);

struct SplitColumn {
    RawColumn clean;
    RawColumn missing;
    RawColumn special;
};

// NaN numeric cells count as missing. Specials match numerically for numeric
// cells and by label for categorical cells.
SplitColumn split_missing_special(const RawColumn& col, const std::vector<Cell>& special_values);

// Equal-frequency split points (midpoints between adjacent distinct values),
// with pre-bins smaller than `min_frac` of the records merged away.
std::vector<double> prebin_numeric(std::vector<double> values, int prebin_count, double min_frac);

struct CategoryOrdering {
    // One category per pre-bin, in ascending order of the ordering metric.
    std::vector<std::string> categories;
    std::vector<double> metric;
    std::vector<std::string> others;
};

// Categories whose share of records is below `cutoff` go to `others`. The
// rest are ordered by event rate (binary), mean (continuous) or the share
// of non-zero classes (multi-class); ties by label.
CategoryOrdering prebin_categorical(const RawColumn& clean, double cutoff,
                                    const TargetKind& target);

struct PrebinTable {
    TargetKind target = TargetKind::binary();
    bool categorical = false;
    // Numeric: n - 1 ascending split points.
    std::vector<double> splits;
    // Categorical: the categories grouped into each pre-bin.
    std::vector<std::vector<std::string>> groups;

    std::vector<std::int64_t> count;
    std::vector<std::int64_t> nonevent;
    std::vector<std::int64_t> event;
    std::vector<double> sum;
    // [pre-bin][class]
    std::vector<std::vector<std::int64_t>> class_count;

    int size() const noexcept { return static_cast<int>(count.size()); }
    double mean(int i) const { return sum[i] / static_cast<double>(count[i]); }
    std::int64_t total() const;
    std::int64_t total_nonevent() const;
    std::int64_t total_event() const;
    std::vector<std::int64_t> class_totals() const;
};

// Index of the half-open interval (-inf, s1), [s1, s2), ..., [sm, inf)
// holding `value`.
int locate_bin(const std::vector<double>& splits, double value);

PrebinTable build_prebin_table(const RawColumn& clean, const std::vector<double>& splits,
                               const TargetKind& target);
PrebinTable build_prebin_table(const RawColumn& clean, const CategoryOrdering& ordering,
                               const TargetKind& target);

// Merges pre-bins that are empty or (binary/multi-class) lack events or
// non-events into their right neighbour (left for the last), repeating until
// no violation remains. Throws InfeasibleInput when the whole column has no
// events or no non-events (for some class, multi-class).
PrebinTable refine_prebins(PrebinTable table);

// Merges pre-bins i and i + 1.
void merge_prebins(PrebinTable& table, int i);

}  // namespace optbin
