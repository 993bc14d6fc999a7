#include "optbin/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "optbin/csv.hpp"
#include "optbin/labels.hpp"
#include "optbin/model_io.hpp"

namespace optbin {

namespace {

std::string fixed(double v, int digits = 6) {
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os << std::fixed << std::setprecision(digits) << (v == 0.0 ? 0.0 : v);  // no "-0.000"
    return os.str();
}

std::string aligned(const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::size_t> width;
    for (const auto& r : rows) {
        width.resize(std::max(width.size(), r.size()), 0);
        for (std::size_t c = 0; c < r.size(); ++c) width[c] = std::max(width[c], r[c].size());
    }
    std::ostringstream os;
    for (const auto& r : rows) {
        for (std::size_t c = 0; c < r.size(); ++c) {
            if (c) os << "  ";
            // Labels left-aligned, numbers right-aligned.
            if (c == 0)
                os << std::left << std::setw(static_cast<int>(width[c])) << r[c];
            else
                os << std::right << std::setw(static_cast<int>(width[c])) << r[c];
        }
        os << "\n";
    }
    return os.str();
}

TargetKind target_kind_from(const std::string& kind, const std::vector<double>& target) {
    if (kind == "binary") return TargetKind::binary();
    if (kind == "continuous") return TargetKind::continuous();
    if (kind == "multiclass") {
        double top = 0.0;
        for (double y : target) top = std::max(top, y);
        return TargetKind::multiclass(static_cast<int>(top) + 1);
    }
    throw BinningError("unknown target kind '" + kind + "'");
}

std::vector<Cell> parse_special_values(const std::string& text) {
    std::vector<Cell> out;
    if (text.empty()) return out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto cell = parse_cell(item, std::string(1, '\0'));
        if (!std::holds_alternative<std::monostate>(cell)) out.push_back(cell);
    }
    return out;
}

RawColumn read_column(const CsvTable& csv, const std::string& variable, const std::string& target,
                      const std::string& dtype, const std::string& missing_token) {
    const auto vi = csv.column(variable);
    const auto ti = csv.column(target);
    RawColumn col;
    for (std::size_t r = 0; r < csv.rows.size(); ++r) {
        const auto& row = csv.rows[r];
        Cell v = parse_cell(row[vi], missing_token);
        if (dtype == "categorical" && std::holds_alternative<double>(v)) v = row[vi];
        if (dtype == "numerical" && std::holds_alternative<std::string>(v))
            throw BinningError("non-numeric value '" + row[vi] + "' in row " +
                               std::to_string(r + 1) + " of numerical column");
        const Cell y = parse_cell(row[ti], missing_token);
        const auto* yd = std::get_if<double>(&y);
        if (yd == nullptr)
            throw BinningError("target value '" + row[ti] + "' in row " + std::to_string(r + 1) +
                               " is not numeric");
        col.values.push_back(std::move(v));
        col.target.push_back(*yd);
    }
    return col;
}

nlohmann::json bins_json(const BinningModel& m) {
    using nlohmann::json;
    json rows = json::array();
    for (const auto& b : m.bins) {
        const auto& s = b.stats;
        json r;
        r["bin"] = b.label;
        r["kind"] = to_string(b.kind);
        r["count"] = s.count;
        r["count_pct"] = m.total > 0 ? static_cast<double>(s.count) / m.total : 0.0;
        if (m.target.is_binary()) {
            r["nonevent"] = s.nonevent;
            r["event"] = s.event;
            r["event_rate"] = s.event_rate;
            r["woe"] = s.woe;
            r["iv"] = s.iv;
            r["js"] = s.js;
        } else if (m.target.is_continuous()) {
            r["sum"] = s.sum;
            r["mean"] = s.mean;
        } else {
            r["class_counts"] = s.class_counts;
        }
        rows.push_back(r);
    }
    json out;
    out["variable"] = m.variable;
    out["status"] = to_string(m.status);
    out["objective"] = m.objective;
    out["trend"] = to_string(m.trend_used);
    out["bins"] = rows;
    return out;
}

nlohmann::json quality_json(const QualityReport& q) {
    return {{"iv", q.iv},         {"iv_label", q.label}, {"pvalues", q.pvalues},
            {"sizes", q.sizes},   {"rayleigh_factor", q.rayleigh},
            {"hhi_normalized", q.hhi}, {"score", q.score}};
}

template <typename F>
int guarded(std::ostream& err, F&& body) {
    try {
        return body();
    } catch (const InvalidConfig& e) {
        err << "error: invalid configuration\n";
        for (const auto& d : e.diagnostics()) err << "  - " << d << "\n";
        return kExitInputError;
    } catch (const InfeasibleInput& e) {
        err << "infeasible: " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitInputError;
    }
}

}  // namespace

std::string render_table(const BinningModel& m) {
    std::vector<std::vector<std::string>> rows;
    const bool binary = m.target.is_binary();
    const bool continuous = m.target.is_continuous();
    if (binary)
        rows.push_back({"Bin", "Count", "Count (%)", "Non-event", "Event", "Event rate", "WoE",
                        "IV", "JS"});
    else if (continuous)
        rows.push_back({"Bin", "Count", "Count (%)", "Sum", "Mean"});
    else {
        rows.push_back({"Bin", "Count", "Count (%)"});
        for (int c = 0; c < m.target.class_count; ++c)
            rows.front().push_back("Class " + std::to_string(c));
    }
    const auto pct = [&](std::int64_t n) {
        return fixed(m.total > 0 ? static_cast<double>(n) / static_cast<double>(m.total) : 0.0);
    };
    double iv = 0.0, js = 0.0, sum = 0.0;
    for (const auto& b : m.bins) {
        const auto& s = b.stats;
        std::vector<std::string> r{b.label, std::to_string(s.count), pct(s.count)};
        if (binary) {
            r.insert(r.end(), {std::to_string(s.nonevent), std::to_string(s.event),
                               fixed(s.event_rate), fixed(s.woe), fixed(s.iv), fixed(s.js)});
            iv += s.iv;
            js += s.js;
        } else if (continuous) {
            r.insert(r.end(), {fixed(s.sum), fixed(s.mean)});
            sum += s.sum;
        } else {
            for (auto c : s.class_counts) r.push_back(std::to_string(c));
        }
        rows.push_back(std::move(r));
    }
    std::vector<std::string> totals{"Totals", std::to_string(m.total), pct(m.total)};
    if (binary) {
        const double rate =
            m.total > 0 ? static_cast<double>(m.total_event) / static_cast<double>(m.total) : 0.0;
        totals.insert(totals.end(), {std::to_string(m.total_nonevent),
                                     std::to_string(m.total_event), fixed(rate), "", fixed(iv),
                                     fixed(js)});
    } else if (continuous) {
        totals.insert(totals.end(),
                      {fixed(sum), fixed(m.total > 0 ? sum / static_cast<double>(m.total) : 0.0)});
    } else {
        for (auto c : m.class_totals) totals.push_back(std::to_string(c));
    }
    rows.push_back(std::move(totals));
    return aligned(rows);
}

int cmd_fit(const FitRequest& req, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        if (req.dtype != "auto" && req.dtype != "numerical" && req.dtype != "categorical")
            throw BinningError("unknown dtype '" + req.dtype + "'");
        const auto csv = read_csv_file(req.data_path);
        if (csv.rows.empty()) throw BinningError("CSV has a header but no data rows");
        const auto col = read_column(csv, req.variable, req.target, req.dtype, req.missing_token);
        const auto target = target_kind_from(req.target_kind, col.target);
        FitOptions options = req.options;
        if (req.dtype == "categorical") options.categorical = true;
        if (req.dtype == "numerical") options.categorical = false;

        const auto model = fit(col, req.variable, target, req.config, options);
        if (model.status == SolveStatus::Infeasible) {
            err << "infeasible: no binning satisfies the constraints\n";
            return static_cast<int>(kExitInfeasible);
        }
        if (!req.model_path.empty()) save_model(model, req.model_path);
        if (req.format == ReportFormat::Json) {
            auto j = bins_json(model);
            if (model.quality) j["quality"] = quality_json(*model.quality);
            out << j.dump(2) << "\n";
        } else {
            out << "variable: " << model.variable << "  status: " << to_string(model.status)
                << "  trend: " << to_string(model.trend_used);
            if (model.change_point) out << " (change point " << *model.change_point << ")";
            if (!model.class_trends.empty() && model.target.is_multiclass()) {
                out << "  class trends:";
                for (const auto& t : model.class_trends) out << " " << to_string(t);
            }
            out << "  objective: " << fixed(model.objective, 8) << "\n";
            out << render_table(model);
            if (model.quality)
                out << "quality score: " << fixed(model.quality->score) << " (IV "
                    << fixed(model.quality->iv) << ", " << model.quality->label << ")\n";
        }
        return static_cast<int>(kExitOk);
    });
}

int cmd_transform(const TransformRequest& req, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const auto model = load_model(req.model_path);
        const auto mode = parse_transform_mode(req.mode);
        const auto csv = read_csv_file(req.data_path);
        const auto variable = req.variable.empty() ? model.variable : req.variable;
        const auto vi = csv.column(variable);

        std::ofstream file;
        if (!req.output_path.empty()) {
            file.open(req.output_path, std::ios::binary);
            if (!file) throw BinningError("cannot write '" + req.output_path + "'");
        }
        std::ostream& sink = req.output_path.empty() ? out : file;

        if (mode == TransformMode::WoE && model.target.is_multiclass()) {
            for (int c = 0; c < model.target.class_count; ++c)
                sink << (c ? "," : "") << csv_escape(variable + "_woe_" + std::to_string(c));
        } else {
            sink << csv_escape(variable + "_" + req.mode);
        }
        sink << "\n";
        for (const auto& row : csv.rows) {
            Cell v = parse_cell(row[vi], req.missing_token);
            if (model.categorical && std::holds_alternative<double>(v)) v = row[vi];
            const auto values = transform_value(model, v, mode);
            for (std::size_t k = 0; k < values.size(); ++k)
                sink << (k ? "," : "") << format_number(values[k]);
            sink << "\n";
        }
        return static_cast<int>(kExitOk);
    });
}

int cmd_report(const ReportRequest& req, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const auto model = load_model(req.model_path);
        if (!model.target.is_binary())
            throw BinningError("quality report needs a binary-target model");
        if (!model.quality) throw BinningError("model holds no quality report");
        const auto& q = *model.quality;
        if (req.format == ReportFormat::Json) {
            out << quality_json(q).dump(2) << "\n";
            return static_cast<int>(kExitOk);
        }
        std::vector<std::vector<std::string>> rows{{"Field", "Value"}};
        const auto list = [](const std::vector<double>& v) {
            std::string s;
            for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + fixed(v[i]);
            return s.empty() ? std::string("-") : s;
        };
        rows.push_back({"variable", model.variable});
        rows.push_back({"bins", std::to_string(q.sizes.size())});
        rows.push_back({"iv", fixed(q.iv)});
        rows.push_back({"iv_label", q.label});
        rows.push_back({"pvalues", list(q.pvalues)});
        rows.push_back({"sizes", list(q.sizes)});
        rows.push_back({"rayleigh_factor", fixed(q.rayleigh)});
        rows.push_back({"hhi_normalized", fixed(q.hhi)});
        rows.push_back({"quality_score", fixed(q.score)});
        // Values are wide; left-align everything.
        for (const auto& r : rows) out << std::left << std::setw(16) << r[0] << "  " << r[1] << "\n";
        return static_cast<int>(kExitOk);
    });
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Optimal binning of a variable against a binary, continuous or multi-class target"};
    app.require_subcommand(1);

    FitRequest fit_req;
    std::string format = "table";
    std::string trend = "none", concentration = "off", divergence = "iv", norm = "l2";
    std::string solver = "exact", specials, class_trends;
    std::optional<int> min_bins, max_bins;
    std::optional<std::int64_t> min_size, max_size, min_ne, max_ne, min_e, max_e;
    std::optional<double> max_pvalue;
    double time_budget = 1.0;

    auto* fit_cmd = app.add_subcommand("fit", "Fit an optimal binning and print its table");
    fit_cmd->add_option("--data", fit_req.data_path, "CSV file with a header row")->required();
    fit_cmd->add_option("--variable", fit_req.variable, "Column to bin")->required();
    fit_cmd->add_option("--target", fit_req.target, "Target column")->required();
    fit_cmd->add_option("--target-kind", fit_req.target_kind, "binary, continuous or multiclass")
        ->check(CLI::IsMember({"binary", "continuous", "multiclass"}));
    fit_cmd->add_option("--dtype", fit_req.dtype, "auto, numerical or categorical")
        ->check(CLI::IsMember({"auto", "numerical", "categorical"}));
    fit_cmd->add_option("--missing-token", fit_req.missing_token, "Cell text read as missing");
    fit_cmd->add_option("--trend", trend,
                        "none, ascending, descending, concave, convex, peak, valley, "
                        "peak:<t>, valley:<t> (zero-based t) or auto");
    fit_cmd->add_option("--min-bins", min_bins);
    fit_cmd->add_option("--max-bins", max_bins);
    fit_cmd->add_option("--min-bin-size", min_size, "Minimum records per bin");
    fit_cmd->add_option("--max-bin-size", max_size, "Maximum records per bin");
    fit_cmd->add_option("--min-bin-nonevent", min_ne);
    fit_cmd->add_option("--max-bin-nonevent", max_ne);
    fit_cmd->add_option("--min-bin-event", min_e);
    fit_cmd->add_option("--max-bin-event", max_e);
    fit_cmd->add_option("--max-pvalue", max_pvalue, "Maximum p-value between adjacent bins");
    fit_cmd->add_option("--min-diff", fit_req.config.min_diff,
                        "Minimum event-rate (mean) difference between bins");
    fit_cmd->add_option("--concentration", concentration, "off, std, hhi or maxmin");
    fit_cmd->add_option("--gamma", fit_req.config.concentration.gamma,
                        "Weight of the concentration penalty");
    fit_cmd->add_option("--divergence", divergence, "iv or js");
    fit_cmd->add_option("--norm", norm, "l1 or l2 (continuous targets)");
    fit_cmd->add_option("--special-values", specials, "Comma-separated special codes");
    fit_cmd->add_option("--others-cutoff", fit_req.config.cat_others_cutoff,
                        "Categories below this share go to the others bin");
    fit_cmd->add_option("--prebins", fit_req.config.prebin_count, "Number of pre-bins");
    fit_cmd->add_option("--prebin-min-frac", fit_req.config.prebin_min_frac,
                        "Pre-bins below this share of records are merged");
    fit_cmd->add_option("--class-trends", class_trends,
                        "Comma-separated trend per class (multiclass)");
    fit_cmd->add_flag("--presolve", fit_req.config.presolve,
                      "Fix bin ends that cannot satisfy a monotonic trend");
    fit_cmd->add_option("--solver", solver, "exact or ls")
        ->check(CLI::IsMember({"exact", "ls"}));
    fit_cmd->add_option("--time-budget", time_budget, "Local search time limit in seconds");
    fit_cmd->add_option("--seed", fit_req.options.seed, "Local search seed");
    fit_cmd->add_option("--model", fit_req.model_path, "Where to write the model");
    fit_cmd->add_option("--format", format, "table or json")
        ->check(CLI::IsMember({"table", "json"}));

    TransformRequest tr_req;
    auto* tr_cmd = app.add_subcommand("transform", "Map a column through a fitted model");
    tr_cmd->add_option("--model", tr_req.model_path)->required();
    tr_cmd->add_option("--data", tr_req.data_path)->required();
    tr_cmd->add_option("--variable", tr_req.variable, "Column (default: the model's variable)");
    tr_cmd->add_option("--mode", tr_req.mode, "woe, mean or index")
        ->check(CLI::IsMember({"woe", "mean", "index"}));
    tr_cmd->add_option("--missing-token", tr_req.missing_token);
    tr_cmd->add_option("--output", tr_req.output_path, "Output CSV (default: stdout)");

    ReportRequest rep_req;
    std::string rep_format = "table";
    auto* rep_cmd = app.add_subcommand("report", "Print the quality report of a model");
    rep_cmd->add_option("--model", rep_req.model_path)->required();
    rep_cmd->add_option("--format", rep_format, "table or json")
        ->check(CLI::IsMember({"table", "json"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << (app.get_subcommands().empty() ? app.help() : app.get_subcommands()[0]->help());
        return kExitOk;
    } catch (const CLI::Success&) {
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitInputError;
    }

    if (fit_cmd->parsed()) {
        return guarded(err, [&] {
            auto& cfg = fit_req.config;
            cfg.trend = parse_trend(trend);
            cfg.min_bins = min_bins;
            cfg.max_bins = max_bins;
            cfg.min_bin_size = min_size;
            cfg.max_bin_size = max_size;
            cfg.min_bin_nonevent = min_ne;
            cfg.max_bin_nonevent = max_ne;
            cfg.min_bin_event = min_e;
            cfg.max_bin_event = max_e;
            std::stringstream trends(class_trends);
            for (std::string t; std::getline(trends, t, ',');) cfg.class_trends.push_back(parse_trend(t));
            cfg.max_pvalue = max_pvalue;
            cfg.concentration.kind = parse_concentration(concentration);
            cfg.divergence = parse_divergence(divergence);
            cfg.norm = parse_norm(norm);
            cfg.special_values = parse_special_values(specials);
            fit_req.options.solver = solver == "ls" ? SolverKind::LocalSearch : SolverKind::Exact;
            fit_req.options.budget.seconds = time_budget;
            fit_req.format = format == "json" ? ReportFormat::Json : ReportFormat::Table;
            return cmd_fit(fit_req, out, err);
        });
    }
    if (tr_cmd->parsed()) return cmd_transform(tr_req, out, err);
    rep_req.format = rep_format == "json" ? ReportFormat::Json : ReportFormat::Table;
    return cmd_report(rep_req, out, err);
}

}  // namespace optbin
