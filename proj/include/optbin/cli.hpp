// Command-line front end: fit, transform and report.
#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "optbin/binning.hpp"

namespace optbin {

enum ExitCode : int { kExitOk = 0, kExitInfeasible = 2, kExitInputError = 3 };

enum class ReportFormat { Table, Json };

struct FitRequest {
    std::string data_path;
    std::string variable;
    std::string target;
    std::string target_kind = "binary";  // binary, continuous, multiclass
    std::string dtype = "auto";          // auto, numerical, categorical
    std::string missing_token;
    BinningConfig config;
    FitOptions options;
    std::string model_path;  // empty: do not write a model
    ReportFormat format = ReportFormat::Table;
};

int cmd_fit(const FitRequest& request, std::ostream& out, std::ostream& err);

struct TransformRequest {
    std::string model_path;
    std::string data_path;
    std::string variable;  // empty: the model's variable
    std::string mode = "woe";
    std::string missing_token;
    std::string output_path;  // empty: `out`
};

int cmd_transform(const TransformRequest& request, std::ostream& out, std::ostream& err);

struct ReportRequest {
    std::string model_path;
    ReportFormat format = ReportFormat::Table;
};

int cmd_report(const ReportRequest& request, std::ostream& out, std::ostream& err);

// Binning table: optimized bins, then Others, Special, Missing and Totals.
std::string render_table(const BinningModel& model);

// Parses arguments (argv[0] is the program name) and dispatches.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace optbin
