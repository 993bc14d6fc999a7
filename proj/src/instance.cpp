#include "optbin/instance.hpp"

#include <sstream>

#include "optbin/solver.hpp"

namespace optbin {

double interval_value(const AggregateSet& agg, const Interval& iv) {
    switch (agg.target.kind) {
        case TargetKind::Kind::Binary: return agg.divergence_value.at(iv);
        case TargetKind::Kind::Continuous: return -agg.deviation.at(iv);
        case TargetKind::Kind::Multiclass: {
            double s = 0.0;
            for (const auto& v : agg.class_divergence) s += v.at(iv);
            return s;
        }
    }
    return 0.0;
}

namespace {

SearchInstance base_instance(const AggregateSet& agg, const BinningConfig& cfg) {
    SearchInstance inst;
    inst.n = agg.n;
    inst.limits = resolve_limits(cfg, agg.target, agg.n, agg.total);
    inst.beta = cfg.min_diff;
    inst.records = &agg.records;
    inst.concentration = cfg.concentration;
    inst.total = agg.total;
    return inst;
}

void fill_interval_ok(SearchInstance& inst, const PresolveMask* mask) {
    const auto& lim = inst.limits;
    inst.interval_ok = TriMatrix<char>(inst.n, 0);
    for (int i = 0; i < inst.n; ++i) {
        for (int j = 0; j <= i; ++j) {
            bool ok = true;
            const auto r = (*inst.records)(i, j);
            ok = ok && r >= lim.min_bin_size && r <= lim.max_bin_size;
            if (inst.nonevents != nullptr) {
                const auto ne = (*inst.nonevents)(i, j);
                const auto e = (*inst.events)(i, j);
                ok = ok && ne >= lim.min_bin_nonevent && ne <= lim.max_bin_nonevent;
                ok = ok && e >= lim.min_bin_event && e <= lim.max_bin_event;
            }
            if (mask != nullptr && i + 1 < inst.n && mask->forbids_end(i)) ok = false;
            inst.interval_ok(i, j) = ok ? 1 : 0;
        }
    }
}

}  // namespace

SearchInstance make_instance(const AggregateSet& agg, const BinningConfig& cfg,
                             const PValuePairs& pairs, const std::vector<TrendSpec>& trends,
                             const PresolveMask* mask) {
    SearchInstance inst = base_instance(agg, cfg);
    inst.pairs = &pairs;
    inst.value = TriMatrix<double>(agg.n);
    for (int i = 0; i < agg.n; ++i)
        for (int j = 0; j <= i; ++j) inst.value(i, j) = interval_value(agg, {j, i});

    switch (agg.target.kind) {
        case TargetKind::Kind::Binary:
            inst.sequences = {&agg.event_rate};
            inst.nonevents = &agg.nonevents;
            inst.events = &agg.events;
            break;
        case TargetKind::Kind::Continuous: inst.sequences = {&agg.mean}; break;
        case TargetKind::Kind::Multiclass:
            for (const auto& d : agg.class_event_rate) inst.sequences.push_back(&d);
            break;
    }
    if (trends.size() != inst.sequences.size())
        throw BinningError("one trend per value sequence expected");
    for (const auto& t : trends) {
        if (t.kind == TrendSpec::Kind::Auto)
            throw BinningError("auto trend must be resolved before search");
    }
    inst.trends = trends;
    fill_interval_ok(inst, mask);
    return inst;
}

SearchInstance make_class_instance(const AggregateSet& agg, const BinningConfig& cfg, int cls,
                                   const TrendSpec& trend) {
    SearchInstance inst = base_instance(agg, cfg);
    inst.value = agg.class_divergence.at(cls);
    inst.sequences = {&agg.class_event_rate.at(cls)};
    inst.trends = {trend};
    fill_interval_ok(inst, nullptr);
    return inst;
}

double penalized(double interval_sum, const SearchInstance& inst,
                 std::span<const std::int64_t> bin_counts) {
    if (inst.concentration.kind == Concentration::Kind::Off) return interval_sum;
    return interval_sum -
           inst.concentration.gamma *
               concentration_penalty(bin_counts, inst.concentration.kind, inst.total);
}

double instance_score(const SearchInstance& inst, const std::vector<Interval>& intervals) {
    double sum = 0.0;
    std::vector<std::int64_t> counts;
    counts.reserve(intervals.size());
    for (const auto& iv : intervals) {
        sum += inst.value.at(iv);
        counts.push_back(inst.records->at(iv));
    }
    return penalized(sum, inst, counts);
}

std::vector<std::string> instance_violations(const SearchInstance& inst,
                                             const std::vector<Interval>& intervals) {
    std::vector<std::string> out;
    if (!is_partition(intervals, inst.n)) {
        out.push_back("intervals do not partition the pre-bins");
        return out;
    }
    const auto& lim = inst.limits;
    const int m = static_cast<int>(intervals.size());
    if (m < lim.min_bins || m > lim.max_bins) {
        std::ostringstream os;
        os << "bin count " << m << " outside [" << lim.min_bins << ", " << lim.max_bins << "]";
        out.push_back(os.str());
    }
    for (int b = 0; b < m; ++b) {
        const auto& iv = intervals[b];
        const auto r = inst.records->at(iv);
        if (r < lim.min_bin_size || r > lim.max_bin_size)
            out.push_back("bin " + std::to_string(b) + " record count out of bounds");
        if (inst.nonevents != nullptr) {
            const auto ne = inst.nonevents->at(iv);
            const auto e = inst.events->at(iv);
            if (ne < lim.min_bin_nonevent || ne > lim.max_bin_nonevent)
                out.push_back("bin " + std::to_string(b) + " non-event count out of bounds");
            if (e < lim.min_bin_event || e > lim.max_bin_event)
                out.push_back("bin " + std::to_string(b) + " event count out of bounds");
        }
    }
    if (inst.pairs != nullptr && !apply_pvalue_constraint(intervals, *inst.pairs))
        out.push_back("adjacent bins violate the maximum p-value");

    std::vector<int> ends;
    for (const auto& iv : intervals) ends.push_back(iv.end);
    for (std::size_t s = 0; s < inst.sequences.size(); ++s) {
        std::vector<double> values;
        for (const auto& iv : intervals) values.push_back(inst.sequences[s]->at(iv));
        if (!check_trend(values, inst.trends[s], inst.beta, ends))
            out.push_back("sequence " + std::to_string(s) + " violates trend " +
                          to_string(inst.trends[s]));
    }
    return out;
}

}  // namespace optbin
