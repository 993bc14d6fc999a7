// Core domain types shared by every stage of the binning pipeline.
#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace optbin {

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

class BinningError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidConfig : public BinningError {
public:
    explicit InvalidConfig(std::vector<std::string> diagnostics);
    const std::vector<std::string>& diagnostics() const noexcept { return diagnostics_; }

private:
    std::vector<std::string> diagnostics_;
};

class DegenerateColumn : public BinningError {
public:
    using BinningError::BinningError;
};

class ZeroCount : public BinningError {
public:
    using BinningError::BinningError;
};

// Raised by preprocessing when no partition can possibly be feasible
// (e.g. a binary column without any event).
class InfeasibleInput : public BinningError {
public:
    using BinningError::BinningError;
};

class MalformedEncoding : public BinningError {
public:
    using BinningError::BinningError;
};

class UnknownCategory : public BinningError {
public:
    using BinningError::BinningError;
};

// ---------------------------------------------------------------------------
// Target and trend
// ---------------------------------------------------------------------------

struct TargetKind {
    enum class Kind { Binary, Continuous, Multiclass };

    Kind kind = Kind::Binary;
    int class_count = 2;

    static TargetKind binary() { return {Kind::Binary, 2}; }
    static TargetKind continuous() { return {Kind::Continuous, 0}; }
    // Throws InvalidConfig when class_count < 3.
    static TargetKind multiclass(int class_count);

    bool is_binary() const noexcept { return kind == Kind::Binary; }
    bool is_continuous() const noexcept { return kind == Kind::Continuous; }
    bool is_multiclass() const noexcept { return kind == Kind::Multiclass; }

    friend bool operator==(const TargetKind&, const TargetKind&) = default;
};

std::string to_string(const TargetKind& t);

// Shape imposed on the per-bin event rates (binary, multi-class) or means
// (continuous). Change points of the fixed variants are zero-based pre-bin
// indices: bins ending before `change_point` form the first phase, the
// remaining bins the second one.
struct TrendSpec {
    enum class Kind {
        None,
        Ascending,
        Descending,
        Concave,
        Convex,
        Peak,
        Valley,
        PeakFixed,
        ValleyFixed,
        Auto
    };

    Kind kind = Kind::None;
    int change_point = 0;

    static TrendSpec none() { return {Kind::None, 0}; }
    static TrendSpec ascending() { return {Kind::Ascending, 0}; }
    static TrendSpec descending() { return {Kind::Descending, 0}; }
    static TrendSpec concave() { return {Kind::Concave, 0}; }
    static TrendSpec convex() { return {Kind::Convex, 0}; }
    static TrendSpec peak() { return {Kind::Peak, 0}; }
    static TrendSpec valley() { return {Kind::Valley, 0}; }
    static TrendSpec peak_fixed(int t) { return {Kind::PeakFixed, t}; }
    static TrendSpec valley_fixed(int t) { return {Kind::ValleyFixed, t}; }
    static TrendSpec auto_select() { return {Kind::Auto, 0}; }

    bool is_fixed() const noexcept { return kind == Kind::PeakFixed || kind == Kind::ValleyFixed; }
    bool is_unimodal() const noexcept {
        return kind == Kind::Peak || kind == Kind::Valley || is_fixed();
    }

    friend bool operator==(const TrendSpec& a, const TrendSpec& b) {
        return a.kind == b.kind && (!a.is_fixed() || a.change_point == b.change_point);
    }
};

std::string to_string(const TrendSpec& t);
// Accepts "none", "ascending", ..., "auto", "peak:<t>", "valley:<t>".
TrendSpec parse_trend(const std::string& text);

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

enum class Divergence { IV, JSD };
enum class NormP { L1, L2 };

struct Concentration {
    enum class Kind { Off, Std, HHI, MaxMinDiff };
    Kind kind = Kind::Off;
    double gamma = 0.0;

    friend bool operator==(const Concentration&, const Concentration&) = default;
};

std::string to_string(Divergence d);
std::string to_string(NormP p);
std::string to_string(Concentration::Kind k);
Divergence parse_divergence(const std::string& text);
NormP parse_norm(const std::string& text);
Concentration::Kind parse_concentration(const std::string& text);

// A raw cell: missing, numeric, or a categorical label.
using Cell = std::variant<std::monostate, double, std::string>;

struct BinningConfig {
    // Unset bounds are resolved against the instance at solve time.
    std::optional<int> min_bins;
    std::optional<int> max_bins;
    std::optional<std::int64_t> min_bin_size;
    std::optional<std::int64_t> max_bin_size;
    std::optional<std::int64_t> min_bin_nonevent;
    std::optional<std::int64_t> max_bin_nonevent;
    std::optional<std::int64_t> min_bin_event;
    std::optional<std::int64_t> max_bin_event;

    double min_diff = 0.0;  // beta
    Concentration concentration;
    std::optional<double> max_pvalue;  // alpha

    TrendSpec trend = TrendSpec::none();
    // Multi-class only: one trend per class; empty means `trend` for all.
    std::vector<TrendSpec> class_trends;

    Divergence divergence = Divergence::IV;
    NormP norm = NormP::L2;

    int prebin_count = 20;
    double prebin_min_frac = 0.05;
    std::vector<Cell> special_values;
    double cat_others_cutoff = 0.0;

    // Forbids bin ends that the event-rate presolve rules out (binary
    // ascending/descending only, see presolve_applicable).
    bool presolve = false;

    friend bool operator==(const BinningConfig&, const BinningConfig&) = default;
};

// Returns every violated invariant; empty when the configuration is valid.
std::vector<std::string> config_errors(const BinningConfig& cfg);
// Returns `cfg` unchanged or throws InvalidConfig listing all violations.
const BinningConfig& validate_config(const BinningConfig& cfg);

// Bounds after defaults have been applied for a concrete instance.
struct ResolvedLimits {
    int min_bins = 1;
    int max_bins = 1;
    std::int64_t min_bin_size = 0;
    std::int64_t max_bin_size = 0;
    std::int64_t min_bin_nonevent = 0;
    std::int64_t max_bin_nonevent = 0;
    std::int64_t min_bin_event = 0;
    std::int64_t max_bin_event = 0;
};

// Defaults: min_bins 2 (1 for continuous), max_bins n, min_bin_size
// ceil(5% of records), remaining upper bounds unbounded.
ResolvedLimits resolve_limits(const BinningConfig& cfg, const TargetKind& target, int n,
                              std::int64_t total_records);

// ---------------------------------------------------------------------------
// Solutions
// ---------------------------------------------------------------------------

// Inclusive, zero-based range of merged pre-bins.
struct Interval {
    int start = 0;
    int end = 0;

    int size() const noexcept { return end - start + 1; }
    friend bool operator==(const Interval&, const Interval&) = default;
};

struct BinStats {
    std::int64_t count = 0;
    std::int64_t nonevent = 0;
    std::int64_t event = 0;
    double event_rate = 0.0;
    double woe = 0.0;
    double iv = 0.0;
    double js = 0.0;
    double sum = 0.0;
    double mean = 0.0;
    std::vector<std::int64_t> class_counts;

    friend bool operator==(const BinStats&, const BinStats&) = default;
};

enum class SolveStatus { Optimal, Feasible, Infeasible };
std::string to_string(SolveStatus s);
SolveStatus parse_status(const std::string& text);

struct Solution {
    std::vector<Interval> intervals;
    double objective = 0.0;
    SolveStatus status = SolveStatus::Infeasible;
    std::vector<BinStats> per_bin;
    TrendSpec trend_used;
    std::optional<int> change_point;
    // Multi-class: the concrete trend applied to each class.
    std::vector<TrendSpec> class_trends;

    bool feasible() const noexcept { return status != SolveStatus::Infeasible; }
    std::vector<int> starts() const;
};

// True iff the intervals are contiguous, non-overlapping and cover [0, n).
bool is_partition(const std::vector<Interval>& intervals, int n);

}  // namespace optbin
