// End-to-end fitting of one variable and the resulting model.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "optbin/core.hpp"
#include "optbin/localsearch.hpp"
#include "optbin/preprocess.hpp"
#include "optbin/quality.hpp"

namespace optbin {

enum class BinKind { Regular, Others, Special, Missing };
std::string to_string(BinKind k);
BinKind parse_bin_kind(const std::string& text);

struct ModelBin {
    BinKind kind = BinKind::Regular;
    std::string label;
    // Numeric regular bins: [lower, upper) with open ends left unset.
    std::optional<double> lower;
    std::optional<double> upper;
    // Categorical regular bins and the others bin.
    std::vector<std::string> categories;
    BinStats stats;

    friend bool operator==(const ModelBin&, const ModelBin&) = default;
};

struct BinningModel {
    static constexpr int kFormatVersion = 1;

    int format_version = kFormatVersion;
    std::string variable;
    TargetKind target = TargetKind::binary();
    bool categorical = false;
    // Numeric: ascending boundaries between the regular bins.
    std::vector<double> splits;
    // Regular bins in order, then Others (categorical only), Special, Missing.
    std::vector<ModelBin> bins;

    // Totals over every record, special and missing included.
    std::int64_t total = 0;
    std::int64_t total_nonevent = 0;
    std::int64_t total_event = 0;
    std::vector<std::int64_t> class_totals;

    BinningConfig config;
    std::string solver = "exact";
    SolveStatus status = SolveStatus::Infeasible;
    double objective = 0.0;
    TrendSpec trend_used;
    std::optional<int> change_point;
    std::vector<TrendSpec> class_trends;
    std::optional<QualityReport> quality;  // binary targets only

    std::vector<const ModelBin*> regular_bins() const;
    const ModelBin* find(BinKind kind) const;

    friend bool operator==(const BinningModel&, const BinningModel&) = default;
};

enum class SolverKind { Exact, LocalSearch };

struct FitOptions {
    SolverKind solver = SolverKind::Exact;
    LsBudget budget;
    std::uint64_t seed = 0;
    // Unset: categorical iff some non-missing cell is a label.
    std::optional<bool> categorical;
};

// Splits missing/special rows, pre-bins, refines, optimizes and assembles the
// model. Per-bin WoE/IV/JS use totals over all records (special and missing
// included). Throws InvalidConfig, DegenerateColumn, InfeasibleInput or
// BinningError for bad input; an infeasible optimization is reported through
// `status` with no regular bins.
BinningModel fit(const RawColumn& column, const std::string& variable, const TargetKind& target,
                 const BinningConfig& cfg, const FitOptions& options = {});

// Index into model.bins of the bin holding `value`. Unknown categories go to
// the others bin when there is one and throw UnknownCategory otherwise.
std::size_t assign_bin(const BinningModel& model, const Cell& value);

enum class TransformMode { WoE, Mean, Index };
TransformMode parse_transform_mode(const std::string& text);

// WoE (binary), mean (continuous), per-class WoE (multi-class, one value per
// class), or the bin index. WoE of a bin lacking events or non-events is 0.
std::vector<double> transform_value(const BinningModel& model, const Cell& value,
                                    TransformMode mode);

// Weight of evidence of class `cls` against the rest for a multi-class bin.
double class_woe(const BinningModel& model, const BinStats& stats, int cls);

}  // namespace optbin
