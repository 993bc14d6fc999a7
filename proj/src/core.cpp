#include "optbin/core.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace optbin {

namespace {

std::string join_diagnostics(const std::vector<std::string>& items) {
    std::ostringstream os;
    os << "invalid configuration";
    for (std::size_t i = 0; i < items.size(); ++i) os << (i == 0 ? ": " : "; ") << items[i];
    return os.str();
}

template <typename T>
void check_range(std::vector<std::string>& errors, const char* lo_name, const std::optional<T>& lo,
                 const char* hi_name, const std::optional<T>& hi) {
    if (lo && *lo < 0) errors.push_back(std::string(lo_name) + " must be non-negative");
    if (hi && *hi < 0) errors.push_back(std::string(hi_name) + " must be non-negative");
    if (lo && hi && *lo > *hi)
        errors.push_back(std::string(lo_name) + " > " + hi_name);
}

}  // namespace

InvalidConfig::InvalidConfig(std::vector<std::string> diagnostics)
    : BinningError(join_diagnostics(diagnostics)), diagnostics_(std::move(diagnostics)) {}

TargetKind TargetKind::multiclass(int class_count) {
    if (class_count < 3)
        throw InvalidConfig({"multi-class target requires at least 3 classes (got " +
                             std::to_string(class_count) + ")"});
    return {Kind::Multiclass, class_count};
}

std::string to_string(const TargetKind& t) {
    switch (t.kind) {
        case TargetKind::Kind::Binary: return "binary";
        case TargetKind::Kind::Continuous: return "continuous";
        case TargetKind::Kind::Multiclass: return "multiclass";
    }
    return "binary";
}

std::string to_string(const TrendSpec& t) {
    switch (t.kind) {
        case TrendSpec::Kind::None: return "none";
        case TrendSpec::Kind::Ascending: return "ascending";
        case TrendSpec::Kind::Descending: return "descending";
        case TrendSpec::Kind::Concave: return "concave";
        case TrendSpec::Kind::Convex: return "convex";
        case TrendSpec::Kind::Peak: return "peak";
        case TrendSpec::Kind::Valley: return "valley";
        case TrendSpec::Kind::PeakFixed: return "peak:" + std::to_string(t.change_point);
        case TrendSpec::Kind::ValleyFixed: return "valley:" + std::to_string(t.change_point);
        case TrendSpec::Kind::Auto: return "auto";
    }
    return "none";
}

TrendSpec parse_trend(const std::string& text) {
    if (text == "none") return TrendSpec::none();
    if (text == "ascending") return TrendSpec::ascending();
    if (text == "descending") return TrendSpec::descending();
    if (text == "concave") return TrendSpec::concave();
    if (text == "convex") return TrendSpec::convex();
    if (text == "peak") return TrendSpec::peak();
    if (text == "valley") return TrendSpec::valley();
    if (text == "auto") return TrendSpec::auto_select();
    const auto colon = text.find(':');
    if (colon != std::string::npos) {
        const std::string head = text.substr(0, colon);
        const std::string tail = text.substr(colon + 1);
        std::size_t used = 0;
        int t = -1;
        try {
            t = std::stoi(tail, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == tail.size() && !tail.empty() && t >= 0) {
            if (head == "peak") return TrendSpec::peak_fixed(t);
            if (head == "valley") return TrendSpec::valley_fixed(t);
        }
    }
    throw InvalidConfig({"unknown trend '" + text + "'"});
}

std::string to_string(Divergence d) { return d == Divergence::IV ? "iv" : "js"; }
std::string to_string(NormP p) { return p == NormP::L1 ? "l1" : "l2"; }

std::string to_string(Concentration::Kind k) {
    switch (k) {
        case Concentration::Kind::Off: return "off";
        case Concentration::Kind::Std: return "std";
        case Concentration::Kind::HHI: return "hhi";
        case Concentration::Kind::MaxMinDiff: return "maxmin";
    }
    return "off";
}

Divergence parse_divergence(const std::string& text) {
    if (text == "iv") return Divergence::IV;
    if (text == "js" || text == "jsd") return Divergence::JSD;
    throw InvalidConfig({"unknown divergence '" + text + "'"});
}

NormP parse_norm(const std::string& text) {
    if (text == "l1") return NormP::L1;
    if (text == "l2") return NormP::L2;
    throw InvalidConfig({"unknown norm '" + text + "'"});
}

Concentration::Kind parse_concentration(const std::string& text) {
    if (text == "off") return Concentration::Kind::Off;
    if (text == "std") return Concentration::Kind::Std;
    if (text == "hhi") return Concentration::Kind::HHI;
    if (text == "maxmin") return Concentration::Kind::MaxMinDiff;
    throw InvalidConfig({"unknown concentration '" + text + "'"});
}

std::vector<std::string> config_errors(const BinningConfig& cfg) {
    std::vector<std::string> errors;
    if (cfg.min_bins && *cfg.min_bins < 1) errors.push_back("min_bins must be at least 1");
    if (cfg.max_bins && *cfg.max_bins < 1) errors.push_back("max_bins must be at least 1");
    if (cfg.min_bins && cfg.max_bins && *cfg.min_bins > *cfg.max_bins)
        errors.push_back("min_bins > max_bins");
    check_range(errors, "min_bin_size", cfg.min_bin_size, "max_bin_size", cfg.max_bin_size);
    check_range(errors, "min_bin_nonevent", cfg.min_bin_nonevent, "max_bin_nonevent",
                cfg.max_bin_nonevent);
    check_range(errors, "min_bin_event", cfg.min_bin_event, "max_bin_event", cfg.max_bin_event);

    if (!(cfg.min_diff >= 0.0) || !std::isfinite(cfg.min_diff))
        errors.push_back("min_diff must be a finite value >= 0");
    if (!(cfg.concentration.gamma >= 0.0) || !std::isfinite(cfg.concentration.gamma))
        errors.push_back("concentration gamma must be a finite value >= 0");
    if (cfg.max_pvalue && !(*cfg.max_pvalue > 0.0 && *cfg.max_pvalue <= 1.0))
        errors.push_back("max_pvalue out of range (0, 1]");
    if (!(cfg.cat_others_cutoff >= 0.0 && cfg.cat_others_cutoff < 1.0))
        errors.push_back("cat_others_cutoff out of range [0, 1)");
    if (cfg.prebin_count < 1) errors.push_back("prebin_count must be at least 1");
    if (!(cfg.prebin_min_frac >= 0.0 && cfg.prebin_min_frac < 1.0))
        errors.push_back("prebin_min_frac out of range [0, 1)");

    auto check_trend_spec = [&](const TrendSpec& t) {
        if (t.is_fixed() && t.change_point < 0)
            errors.push_back("trend change point must be non-negative");
    };
    check_trend_spec(cfg.trend);
    for (const auto& t : cfg.class_trends) check_trend_spec(t);
    return errors;
}

const BinningConfig& validate_config(const BinningConfig& cfg) {
    auto errors = config_errors(cfg);
    if (!errors.empty()) throw InvalidConfig(std::move(errors));
    return cfg;
}

ResolvedLimits resolve_limits(const BinningConfig& cfg, const TargetKind& target, int n,
                              std::int64_t total_records) {
    constexpr auto unbounded = std::numeric_limits<std::int64_t>::max();
    ResolvedLimits out;
    out.min_bins = cfg.min_bins.value_or(target.is_continuous() ? 1 : 2);
    out.max_bins = cfg.max_bins.value_or(n);
    out.min_bin_size = cfg.min_bin_size.value_or(
        static_cast<std::int64_t>(std::ceil(0.05 * static_cast<double>(total_records))));
    out.max_bin_size = cfg.max_bin_size.value_or(unbounded);
    out.min_bin_nonevent = cfg.min_bin_nonevent.value_or(0);
    out.max_bin_nonevent = cfg.max_bin_nonevent.value_or(unbounded);
    out.min_bin_event = cfg.min_bin_event.value_or(0);
    out.max_bin_event = cfg.max_bin_event.value_or(unbounded);
    return out;
}

std::string to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::Optimal: return "optimal";
        case SolveStatus::Feasible: return "feasible";
        case SolveStatus::Infeasible: return "infeasible";
    }
    return "infeasible";
}

SolveStatus parse_status(const std::string& text) {
    if (text == "optimal") return SolveStatus::Optimal;
    if (text == "feasible") return SolveStatus::Feasible;
    if (text == "infeasible") return SolveStatus::Infeasible;
    throw BinningError("unknown solve status '" + text + "'");
}

std::vector<int> Solution::starts() const {
    std::vector<int> out;
    out.reserve(intervals.size());
    for (const auto& iv : intervals) out.push_back(iv.start);
    return out;
}

bool is_partition(const std::vector<Interval>& intervals, int n) {
    if (intervals.empty() || n < 1) return false;
    int next = 0;
    for (const auto& iv : intervals) {
        if (iv.start != next || iv.end < iv.start) return false;
        next = iv.end + 1;
    }
    return next == n;
}

}  // namespace optbin
