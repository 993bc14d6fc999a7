#include "optbin/binning.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>
#include <unordered_map>

#include "optbin/aggregate.hpp"
#include "optbin/labels.hpp"
#include "optbin/solver.hpp"

namespace optbin {

std::string to_string(BinKind k) {
    switch (k) {
        case BinKind::Regular: return "regular";
        case BinKind::Others: return "others";
        case BinKind::Special: return "special";
        case BinKind::Missing: return "missing";
    }
    return "regular";
}

BinKind parse_bin_kind(const std::string& text) {
    for (auto k : {BinKind::Regular, BinKind::Others, BinKind::Special, BinKind::Missing})
        if (to_string(k) == text) return k;
    throw BinningError("unknown bin kind '" + text + "'");
}

std::vector<const ModelBin*> BinningModel::regular_bins() const {
    std::vector<const ModelBin*> out;
    for (const auto& b : bins)
        if (b.kind == BinKind::Regular) out.push_back(&b);
    return out;
}

const ModelBin* BinningModel::find(BinKind kind) const {
    for (const auto& b : bins)
        if (b.kind == kind) return &b;
    return nullptr;
}

namespace {

// Raw per-bin counts; derived fields are filled by finish_stats.
struct Counter {
    TargetKind target;
    BinStats stats;

    void add(double y) {
        stats.count += 1;
        if (target.is_binary()) {
            (y == 1.0 ? stats.event : stats.nonevent) += 1;
        } else if (target.is_continuous()) {
            stats.sum += y;
        } else {
            stats.class_counts.resize(target.class_count, 0);
            stats.class_counts[static_cast<std::size_t>(y)] += 1;
        }
    }
};

BinStats counts_of(const PrebinTable& t, const Interval& iv) {
    BinStats s;
    if (t.target.is_multiclass()) s.class_counts.assign(t.target.class_count, 0);
    for (int z = iv.start; z <= iv.end; ++z) {
        s.count += t.count[z];
        if (t.target.is_binary()) {
            s.nonevent += t.nonevent[z];
            s.event += t.event[z];
        } else if (t.target.is_continuous()) {
            s.sum += t.sum[z];
        } else {
            for (int c = 0; c < t.target.class_count; ++c) s.class_counts[c] += t.class_count[z][c];
        }
    }
    return s;
}

BinStats subset_counts(const RawColumn& rows, const TargetKind& target) {
    Counter c{target, {}};
    if (target.is_multiclass()) c.stats.class_counts.assign(target.class_count, 0);
    for (double y : rows.target) c.add(y);
    return c.stats;
}

void finish_stats(BinStats& s, const BinningModel& m) {
    if (m.target.is_binary()) {
        s.event_rate =
            s.count > 0 ? static_cast<double>(s.event) / static_cast<double>(s.count) : 0.0;
        const double p = static_cast<double>(s.nonevent) / static_cast<double>(m.total_nonevent);
        const double q = static_cast<double>(s.event) / static_cast<double>(m.total_event);
        if (s.nonevent > 0 && s.event > 0) {
            s.woe = woe(s.nonevent, s.event, m.total_nonevent, m.total_event);
            s.iv = divergence_contrib(p, q, Divergence::IV);
        } else {
            s.woe = 0.0;
            s.iv = 0.0;
        }
        s.js = s.count > 0 ? divergence_contrib(p, q, Divergence::JSD) : 0.0;
    } else if (m.target.is_continuous()) {
        s.mean = s.count > 0 ? s.sum / static_cast<double>(s.count) : 0.0;
    }
}

std::string group_label(const std::vector<std::string>& categories) {
    std::string out = "[";
    for (std::size_t i = 0; i < categories.size(); ++i) {
        if (i) out += ", ";
        out += categories[i];
    }
    return out + "]";
}

void check_targets(const RawColumn& col, const TargetKind& target) {
    for (double y : col.target) {
        if (target.is_binary() && y != 0.0 && y != 1.0)
            throw BinningError("binary target values must be 0 or 1");
        if (target.is_multiclass() &&
            (y != std::floor(y) || y < 0 || y >= target.class_count))
            throw BinningError("multi-class target values must be class indices");
        if (target.is_continuous() && !std::isfinite(y))
            throw BinningError("continuous target values must be finite");
    }
}

bool has_label(const RawColumn& col) {
    return std::any_of(col.values.begin(), col.values.end(),
                       [](const Cell& c) { return std::holds_alternative<std::string>(c); });
}

}  // namespace

BinningModel fit(const RawColumn& column, const std::string& variable, const TargetKind& target,
                 const BinningConfig& cfg, const FitOptions& options) {
    validate_config(cfg);
    if (column.values.size() != column.target.size())
        throw BinningError("values and target differ in length");
    if (column.empty()) throw InfeasibleInput("no records to bin");
    check_targets(column, target);

    BinningModel model;
    model.variable = variable;
    model.target = target;
    model.config = cfg;
    model.solver = options.solver == SolverKind::Exact ? "exact" : "ls";
    model.categorical = options.categorical.value_or(has_label(column));

    const auto all = subset_counts(column, target);
    model.total = all.count;
    model.total_nonevent = all.nonevent;
    model.total_event = all.event;
    model.class_totals = all.class_counts;

    const auto split = split_missing_special(column, cfg.special_values);
    if (split.clean.empty()) throw InfeasibleInput("no values left after missing/special removal");

    PrebinTable table;
    std::vector<std::string> others;
    if (model.categorical) {
        auto ordering = prebin_categorical(split.clean, cfg.cat_others_cutoff, target);
        others = ordering.others;
        if (ordering.categories.empty())
            throw InfeasibleInput("every category falls below the others cut-off");
        table = build_prebin_table(split.clean, ordering, target);
    } else {
        std::vector<double> values;
        for (const auto& c : split.clean.values) {
            const auto* d = std::get_if<double>(&c);
            if (d == nullptr) throw BinningError("label '" + cell_label(c) + "' in numeric column");
            values.push_back(*d);
        }
        const auto splits = prebin_numeric(values, cfg.prebin_count, cfg.prebin_min_frac);
        table = build_prebin_table(split.clean, splits, target);
    }
    table = refine_prebins(std::move(table));

    const auto agg = build_aggregates(table, cfg.divergence, cfg.norm);
    const auto pairs = pairs_for(agg, cfg);
    const Solution sol = options.solver == SolverKind::Exact
                             ? solve(agg, cfg, pairs)
                             : ls_solve(agg, cfg, pairs, options.budget, options.seed);
    model.status = sol.status;
    model.objective = sol.objective;
    model.trend_used = sol.trend_used;
    model.change_point = sol.change_point;
    model.class_trends = sol.class_trends;

    if (sol.feasible()) {
        for (const auto& iv : sol.intervals) {
            ModelBin bin;
            bin.stats = counts_of(table, iv);
            if (model.categorical) {
                for (int z = iv.start; z <= iv.end; ++z)
                    bin.categories.insert(bin.categories.end(), table.groups[z].begin(),
                                          table.groups[z].end());
                bin.label = group_label(bin.categories);
            } else {
                if (iv.start > 0) bin.lower = table.splits[iv.start - 1];
                if (iv.end + 1 < table.size()) bin.upper = table.splits[iv.end];
                bin.label = interval_label(bin.lower ? &*bin.lower : nullptr,
                                           bin.upper ? &*bin.upper : nullptr);
                if (bin.upper) model.splits.push_back(*bin.upper);
            }
            model.bins.push_back(std::move(bin));
        }
    }

    if (model.categorical && !others.empty()) {
        ModelBin bin;
        bin.kind = BinKind::Others;
        bin.label = "Others";
        bin.categories = others;
        const std::unordered_map<std::string, bool> is_other = [&] {
            std::unordered_map<std::string, bool> m;
            for (const auto& o : others) m[o] = true;
            return m;
        }();
        RawColumn rows;
        for (std::size_t i = 0; i < split.clean.size(); ++i)
            if (is_other.count(cell_label(split.clean.values[i]))) {
                rows.values.push_back(split.clean.values[i]);
                rows.target.push_back(split.clean.target[i]);
            }
        bin.stats = subset_counts(rows, target);
        model.bins.push_back(std::move(bin));
    }
    for (auto [kind, rows, label] : {std::tuple{BinKind::Special, &split.special, "Special"},
                                     std::tuple{BinKind::Missing, &split.missing, "Missing"}}) {
        ModelBin bin;
        bin.kind = kind;
        bin.label = label;
        bin.stats = subset_counts(*rows, target);
        model.bins.push_back(std::move(bin));
    }
    for (auto& b : model.bins) finish_stats(b.stats, model);

    if (target.is_binary() && sol.feasible()) {
        std::vector<BinStats> regular;
        for (const auto* b : model.regular_bins()) regular.push_back(b->stats);
        model.quality = quality_report(regular);
    }
    return model;
}

std::size_t assign_bin(const BinningModel& model, const Cell& value) {
    const auto index_of = [&](BinKind kind) -> std::size_t {
        for (std::size_t i = 0; i < model.bins.size(); ++i)
            if (model.bins[i].kind == kind) return i;
        throw BinningError("model has no " + to_string(kind) + " bin");
    };
    if (is_missing(value)) return index_of(BinKind::Missing);
    if (is_special(value, model.config.special_values)) return index_of(BinKind::Special);
    if (model.status == SolveStatus::Infeasible)
        throw BinningError("model has no bins: the fit was infeasible");

    if (model.categorical) {
        const auto label = cell_label(value);
        for (std::size_t i = 0; i < model.bins.size(); ++i) {
            const auto& cats = model.bins[i].categories;
            if (model.bins[i].kind == BinKind::Regular &&
                std::find(cats.begin(), cats.end(), label) != cats.end())
                return i;
        }
        if (model.find(BinKind::Others) != nullptr) return index_of(BinKind::Others);
        throw UnknownCategory("unknown category '" + label + "'");
    }
    const auto* d = std::get_if<double>(&value);
    if (d == nullptr) throw BinningError("label '" + cell_label(value) + "' for a numeric model");
    return static_cast<std::size_t>(locate_bin(model.splits, *d));
}

TransformMode parse_transform_mode(const std::string& text) {
    if (text == "woe") return TransformMode::WoE;
    if (text == "mean") return TransformMode::Mean;
    if (text == "index") return TransformMode::Index;
    throw BinningError("unknown transform mode '" + text + "' (woe, mean, index)");
}

double class_woe(const BinningModel& model, const BinStats& s, int cls) {
    const auto e = s.class_counts.at(cls);
    const auto ne = s.count - e;
    const auto e_total = model.class_totals.at(cls);
    const auto ne_total = model.total - e_total;
    if (e <= 0 || ne <= 0 || e_total <= 0 || ne_total <= 0) return 0.0;
    return woe(ne, e, ne_total, e_total);
}

std::vector<double> transform_value(const BinningModel& model, const Cell& value,
                                    TransformMode mode) {
    const auto idx = assign_bin(model, value);
    const auto& s = model.bins[idx].stats;
    switch (mode) {
        case TransformMode::Index: return {static_cast<double>(idx)};
        case TransformMode::Mean:
            if (!model.target.is_continuous())
                throw BinningError("mean transform needs a continuous target");
            return {s.mean};
        case TransformMode::WoE:
            if (model.target.is_binary()) return {s.woe};
            if (model.target.is_multiclass()) {
                std::vector<double> out;
                for (int c = 0; c < model.target.class_count; ++c)
                    out.push_back(class_woe(model, s, c));
                return out;
            }
            throw BinningError("woe transform needs a binary or multi-class target");
    }
    return {};
}

}  // namespace optbin
