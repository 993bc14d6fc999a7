#include "optbin/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "optbin/labels.hpp"

namespace optbin {

bool is_missing(const Cell& c) {
    if (std::holds_alternative<std::monostate>(c)) return true;
    if (const auto* d = std::get_if<double>(&c)) return std::isnan(*d);
    return false;
}

bool is_special(const Cell& value, const std::vector<Cell>& specials) {
    for (const auto& s : specials) {
        if (const auto* d = std::get_if<double>(&value)) {
            if (const auto* sd = std::get_if<double>(&s); sd && *sd == *d) return true;
            if (const auto* ss = std::get_if<std::string>(&s); ss && *ss == cell_label(value))
                return true;
        } else if (const auto* str = std::get_if<std::string>(&value)) {
            if (cell_label(s) == *str) return true;
        }
    }
    return false;
}

namespace {

void push_row(RawColumn& dst, const RawColumn& src, std::size_t i) {
    dst.values.push_back(src.values[i]);
    dst.target.push_back(src.target[i]);
}

int class_index(double y, int class_count) {
    const double r = std::round(y);
    if (r != y || r < 0 || r >= class_count) {
        std::ostringstream os;
        os << "class index " << y << " outside [0, " << class_count << ")";
        throw BinningError(os.str());
    }
    return static_cast<int>(r);
}

void check_binary(double y) {
    if (y != 0.0 && y != 1.0) {
        std::ostringstream os;
        os << "binary target value " << y << " is neither 0 nor 1";
        throw BinningError(os.str());
    }
}

PrebinTable empty_table(const TargetKind& target, int n) {
    PrebinTable t;
    t.target = target;
    t.count.assign(n, 0);
    if (target.is_binary()) {
        t.nonevent.assign(n, 0);
        t.event.assign(n, 0);
    } else if (target.is_continuous()) {
        t.sum.assign(n, 0.0);
    } else {
        t.class_count.assign(n, std::vector<std::int64_t>(target.class_count, 0));
    }
    return t;
}

void add_record(PrebinTable& t, int bin, double y) {
    t.count[bin] += 1;
    if (t.target.is_binary()) {
        check_binary(y);
        (y == 1.0 ? t.event : t.nonevent)[bin] += 1;
    } else if (t.target.is_continuous()) {
        t.sum[bin] += y;
    } else {
        t.class_count[bin][class_index(y, t.target.class_count)] += 1;
    }
}

bool violates(const PrebinTable& t, int i) {
    if (t.count[i] == 0) return true;
    if (t.target.is_binary()) return t.nonevent[i] == 0 || t.event[i] == 0;
    if (t.target.is_multiclass()) {
        for (auto c : t.class_count[i])
            if (c == 0 || c == t.count[i]) return true;
    }
    return false;
}

}  // namespace

SplitColumn split_missing_special(const RawColumn& col, const std::vector<Cell>& special_values) {
    if (col.values.size() != col.target.size())
        throw BinningError("values and target differ in length");
    SplitColumn out;
    for (std::size_t i = 0; i < col.values.size(); ++i) {
        if (is_missing(col.values[i]))
            push_row(out.missing, col, i);
        else if (is_special(col.values[i], special_values))
            push_row(out.special, col, i);
        else
            push_row(out.clean, col, i);
    }
    return out;
}

std::vector<double> prebin_numeric(std::vector<double> values, int prebin_count, double min_frac) {
    std::sort(values.begin(), values.end());
    if (values.empty() || values.front() == values.back())
        throw DegenerateColumn("numeric column needs at least two distinct values");
    const std::size_t n = values.size();
    const std::size_t q = static_cast<std::size_t>(std::max(prebin_count, 1));

    std::vector<double> splits;
    for (std::size_t k = 1; k < q; ++k) {
        const std::size_t idx = k * n / q;
        if (idx == 0 || idx >= n) continue;
        const double v = values[idx];
        if (v == values.front()) continue;
        const auto first_v = std::lower_bound(values.begin(), values.end(), v);
        const double lower = *(first_v - 1);
        double mid = lower + (v - lower) / 2.0;
        if (!(mid > lower)) mid = v;
        if (splits.empty() || mid > splits.back()) splits.push_back(mid);
    }

    // Merge undersized pre-bins: the smallest one goes into its smaller
    // neighbour until all reach the threshold.
    const double threshold = min_frac * static_cast<double>(n);
    while (!splits.empty()) {
        std::vector<std::size_t> counts(splits.size() + 1, 0);
        for (double v : values) counts[locate_bin(splits, v)] += 1;
        std::size_t smallest = 0;
        for (std::size_t i = 1; i < counts.size(); ++i)
            if (counts[i] < counts[smallest]) smallest = i;
        if (static_cast<double>(counts[smallest]) >= threshold) break;
        std::size_t drop;  // index of the split removed
        if (smallest == 0)
            drop = 0;
        else if (smallest == counts.size() - 1)
            drop = smallest - 1;
        else
            drop = counts[smallest - 1] <= counts[smallest + 1] ? smallest - 1 : smallest;
        splits.erase(splits.begin() + static_cast<std::ptrdiff_t>(drop));
    }
    return splits;
}

CategoryOrdering prebin_categorical(const RawColumn& clean, double cutoff,
                                    const TargetKind& target) {
    struct Acc {
        std::int64_t count = 0;
        double sum = 0.0;  // events, target sum, or records outside class 0
    };
    std::map<std::string, Acc> acc;
    for (std::size_t i = 0; i < clean.values.size(); ++i) {
        auto& a = acc[cell_label(clean.values[i])];
        const double y = clean.target[i];
        a.count += 1;
        if (target.is_binary()) {
            check_binary(y);
            a.sum += y;
        } else if (target.is_continuous()) {
            a.sum += y;
        } else {
            a.sum += class_index(y, target.class_count) != 0 ? 1.0 : 0.0;
        }
    }

    CategoryOrdering out;
    const double total = static_cast<double>(clean.values.size());
    std::vector<std::pair<double, std::string>> kept;
    for (const auto& [label, a] : acc) {
        if (static_cast<double>(a.count) < cutoff * total)
            out.others.push_back(label);
        else
            kept.emplace_back(a.sum / static_cast<double>(a.count), label);
    }
    std::sort(kept.begin(), kept.end());
    for (auto& [metric, label] : kept) {
        out.metric.push_back(metric);
        out.categories.push_back(std::move(label));
    }
    return out;
}

std::int64_t PrebinTable::total() const {
    return std::accumulate(count.begin(), count.end(), std::int64_t{0});
}

std::int64_t PrebinTable::total_nonevent() const {
    return std::accumulate(nonevent.begin(), nonevent.end(), std::int64_t{0});
}

std::int64_t PrebinTable::total_event() const {
    return std::accumulate(event.begin(), event.end(), std::int64_t{0});
}

std::vector<std::int64_t> PrebinTable::class_totals() const {
    std::vector<std::int64_t> out(target.is_multiclass() ? target.class_count : 0, 0);
    for (const auto& row : class_count)
        for (std::size_t c = 0; c < row.size(); ++c) out[c] += row[c];
    return out;
}

int locate_bin(const std::vector<double>& splits, double value) {
    return static_cast<int>(std::upper_bound(splits.begin(), splits.end(), value) -
                            splits.begin());
}

PrebinTable build_prebin_table(const RawColumn& clean, const std::vector<double>& splits,
                               const TargetKind& target) {
    if (!std::is_sorted(splits.begin(), splits.end()))
        throw BinningError("split points must be ascending");
    PrebinTable t = empty_table(target, static_cast<int>(splits.size()) + 1);
    t.splits = splits;
    for (std::size_t i = 0; i < clean.values.size(); ++i) {
        const auto* v = std::get_if<double>(&clean.values[i]);
        if (v == nullptr) throw BinningError("non-numeric value in numeric column");
        add_record(t, locate_bin(splits, *v), clean.target[i]);
    }
    return t;
}

PrebinTable build_prebin_table(const RawColumn& clean, const CategoryOrdering& ordering,
                               const TargetKind& target) {
    const int n = static_cast<int>(ordering.categories.size());
    PrebinTable t = empty_table(target, n);
    t.categorical = true;
    std::unordered_map<std::string, int> index;
    for (int i = 0; i < n; ++i) {
        index.emplace(ordering.categories[i], i);
        t.groups.push_back({ordering.categories[i]});
    }
    for (std::size_t i = 0; i < clean.values.size(); ++i) {
        const auto it = index.find(cell_label(clean.values[i]));
        if (it != index.end()) add_record(t, it->second, clean.target[i]);
    }
    return t;
}

void merge_prebins(PrebinTable& t, int i) {
    const auto at = [](auto& vec, int k) { return vec.begin() + k; };
    t.count[i] += t.count[i + 1];
    t.count.erase(at(t.count, i + 1));
    if (!t.nonevent.empty()) {
        t.nonevent[i] += t.nonevent[i + 1];
        t.nonevent.erase(at(t.nonevent, i + 1));
        t.event[i] += t.event[i + 1];
        t.event.erase(at(t.event, i + 1));
    }
    if (!t.sum.empty()) {
        t.sum[i] += t.sum[i + 1];
        t.sum.erase(at(t.sum, i + 1));
    }
    if (!t.class_count.empty()) {
        for (std::size_t c = 0; c < t.class_count[i].size(); ++c)
            t.class_count[i][c] += t.class_count[i + 1][c];
        t.class_count.erase(at(t.class_count, i + 1));
    }
    if (!t.splits.empty()) t.splits.erase(at(t.splits, i));
    if (!t.groups.empty()) {
        auto& g = t.groups[i];
        g.insert(g.end(), t.groups[i + 1].begin(), t.groups[i + 1].end());
        t.groups.erase(at(t.groups, i + 1));
    }
}

PrebinTable refine_prebins(PrebinTable t) {
    if (t.size() == 0 || t.total() == 0) throw InfeasibleInput("no records to bin");
    if (t.target.is_binary()) {
        if (t.total_event() == 0) throw InfeasibleInput("column has no event records");
        if (t.total_nonevent() == 0) throw InfeasibleInput("column has no non-event records");
    } else if (t.target.is_multiclass()) {
        const auto totals = t.class_totals();
        for (std::size_t c = 0; c < totals.size(); ++c) {
            if (totals[c] == 0)
                throw InfeasibleInput("class " + std::to_string(c) + " has no records");
        }
    }

    bool changed = true;
    while (changed && t.size() > 1) {
        changed = false;
        for (int i = 0; i < t.size() && t.size() > 1;) {
            if (!violates(t, i)) {
                ++i;
                continue;
            }
            merge_prebins(t, i + 1 < t.size() ? i : i - 1);
            changed = true;
        }
    }
    return t;
}

}  // namespace optbin
