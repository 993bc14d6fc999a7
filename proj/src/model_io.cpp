#include "optbin/model_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace optbin {

using nlohmann::json;

namespace {

template <typename T>
json optional_json(const std::optional<T>& v) {
    return v ? json(*v) : json(nullptr);
}

template <typename T>
std::optional<T> optional_from(const json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return j.at(key).get<T>();
}

json cell_json(const Cell& c) {
    if (const auto* d = std::get_if<double>(&c)) return *d;
    if (const auto* s = std::get_if<std::string>(&c)) return *s;
    return nullptr;
}

Cell cell_from(const json& j) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) return j.get<std::string>();
    return std::monostate{};
}

json trends_json(const std::vector<TrendSpec>& trends) {
    json out = json::array();
    for (const auto& t : trends) out.push_back(to_string(t));
    return out;
}

std::vector<TrendSpec> trends_from(const json& j) {
    std::vector<TrendSpec> out;
    for (const auto& t : j) out.push_back(parse_trend(t.get<std::string>()));
    return out;
}

json config_json(const BinningConfig& c) {
    json j;
    j["min_bins"] = optional_json(c.min_bins);
    j["max_bins"] = optional_json(c.max_bins);
    j["min_bin_size"] = optional_json(c.min_bin_size);
    j["max_bin_size"] = optional_json(c.max_bin_size);
    j["min_bin_nonevent"] = optional_json(c.min_bin_nonevent);
    j["max_bin_nonevent"] = optional_json(c.max_bin_nonevent);
    j["min_bin_event"] = optional_json(c.min_bin_event);
    j["max_bin_event"] = optional_json(c.max_bin_event);
    j["min_diff"] = c.min_diff;
    j["concentration"] = to_string(c.concentration.kind);
    j["gamma"] = c.concentration.gamma;
    j["max_pvalue"] = optional_json(c.max_pvalue);
    j["trend"] = to_string(c.trend);
    j["class_trends"] = trends_json(c.class_trends);
    j["divergence"] = to_string(c.divergence);
    j["norm"] = to_string(c.norm);
    j["prebin_count"] = c.prebin_count;
    j["prebin_min_frac"] = c.prebin_min_frac;
    json specials = json::array();
    for (const auto& s : c.special_values) specials.push_back(cell_json(s));
    j["special_values"] = specials;
    j["cat_others_cutoff"] = c.cat_others_cutoff;
    j["presolve"] = c.presolve;
    return j;
}

BinningConfig config_from(const json& j) {
    BinningConfig c;
    c.min_bins = optional_from<int>(j, "min_bins");
    c.max_bins = optional_from<int>(j, "max_bins");
    c.min_bin_size = optional_from<std::int64_t>(j, "min_bin_size");
    c.max_bin_size = optional_from<std::int64_t>(j, "max_bin_size");
    c.min_bin_nonevent = optional_from<std::int64_t>(j, "min_bin_nonevent");
    c.max_bin_nonevent = optional_from<std::int64_t>(j, "max_bin_nonevent");
    c.min_bin_event = optional_from<std::int64_t>(j, "min_bin_event");
    c.max_bin_event = optional_from<std::int64_t>(j, "max_bin_event");
    c.min_diff = j.at("min_diff").get<double>();
    c.concentration.kind = parse_concentration(j.at("concentration").get<std::string>());
    c.concentration.gamma = j.at("gamma").get<double>();
    c.max_pvalue = optional_from<double>(j, "max_pvalue");
    c.trend = parse_trend(j.at("trend").get<std::string>());
    c.class_trends = trends_from(j.at("class_trends"));
    c.divergence = parse_divergence(j.at("divergence").get<std::string>());
    c.norm = parse_norm(j.at("norm").get<std::string>());
    c.prebin_count = j.at("prebin_count").get<int>();
    c.prebin_min_frac = j.at("prebin_min_frac").get<double>();
    for (const auto& s : j.at("special_values")) c.special_values.push_back(cell_from(s));
    c.cat_others_cutoff = j.at("cat_others_cutoff").get<double>();
    c.presolve = j.at("presolve").get<bool>();
    return c;
}

json bin_json(const ModelBin& b) {
    json j;
    j["kind"] = to_string(b.kind);
    j["label"] = b.label;
    j["lower"] = optional_json(b.lower);
    j["upper"] = optional_json(b.upper);
    j["categories"] = b.categories;
    const auto& s = b.stats;
    j["count"] = s.count;
    j["nonevent"] = s.nonevent;
    j["event"] = s.event;
    j["event_rate"] = s.event_rate;
    j["woe"] = s.woe;
    j["iv"] = s.iv;
    j["js"] = s.js;
    j["sum"] = s.sum;
    j["mean"] = s.mean;
    j["class_counts"] = s.class_counts;
    return j;
}

ModelBin bin_from(const json& j) {
    ModelBin b;
    b.kind = parse_bin_kind(j.at("kind").get<std::string>());
    b.label = j.at("label").get<std::string>();
    b.lower = optional_from<double>(j, "lower");
    b.upper = optional_from<double>(j, "upper");
    b.categories = j.at("categories").get<std::vector<std::string>>();
    auto& s = b.stats;
    s.count = j.at("count").get<std::int64_t>();
    s.nonevent = j.at("nonevent").get<std::int64_t>();
    s.event = j.at("event").get<std::int64_t>();
    s.event_rate = j.at("event_rate").get<double>();
    s.woe = j.at("woe").get<double>();
    s.iv = j.at("iv").get<double>();
    s.js = j.at("js").get<double>();
    s.sum = j.at("sum").get<double>();
    s.mean = j.at("mean").get<double>();
    s.class_counts = j.at("class_counts").get<std::vector<std::int64_t>>();
    return b;
}

json quality_json(const QualityReport& q) {
    json j;
    j["iv"] = q.iv;
    j["pvalues"] = q.pvalues;
    j["sizes"] = q.sizes;
    j["rayleigh"] = q.rayleigh;
    j["hhi"] = q.hhi;
    j["score"] = q.score;
    j["label"] = q.label;
    return j;
}

QualityReport quality_from(const json& j) {
    QualityReport q;
    q.iv = j.at("iv").get<double>();
    q.pvalues = j.at("pvalues").get<std::vector<double>>();
    q.sizes = j.at("sizes").get<std::vector<double>>();
    q.rayleigh = j.at("rayleigh").get<double>();
    q.hhi = j.at("hhi").get<double>();
    q.score = j.at("score").get<double>();
    q.label = j.at("label").get<std::string>();
    return q;
}

TargetKind target_from(const json& j) {
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "binary") return TargetKind::binary();
    if (kind == "continuous") return TargetKind::continuous();
    if (kind == "multiclass") return TargetKind::multiclass(j.at("class_count").get<int>());
    throw BinningError("unknown target kind '" + kind + "'");
}

}  // namespace

std::string model_to_json(const BinningModel& m) {
    json j;
    j["format_version"] = m.format_version;
    j["variable"] = m.variable;
    j["target"] = {{"kind", to_string(m.target)}, {"class_count", m.target.class_count}};
    j["categorical"] = m.categorical;
    j["splits"] = m.splits;
    json bins = json::array();
    for (const auto& b : m.bins) bins.push_back(bin_json(b));
    j["bins"] = bins;
    j["totals"] = {{"records", m.total},
                   {"nonevent", m.total_nonevent},
                   {"event", m.total_event},
                   {"classes", m.class_totals}};
    j["config"] = config_json(m.config);
    j["solver"] = m.solver;
    j["status"] = to_string(m.status);
    j["objective"] = m.objective;
    j["trend"] = to_string(m.trend_used);
    j["change_point"] = optional_json(m.change_point);
    j["class_trends"] = trends_json(m.class_trends);
    j["quality"] = m.quality ? quality_json(*m.quality) : json(nullptr);
    return j.dump(2) + "\n";
}

BinningModel model_from_json(const std::string& text) {
    try {
        const auto j = json::parse(text);
        BinningModel m;
        m.format_version = j.at("format_version").get<int>();
        if (m.format_version != BinningModel::kFormatVersion)
            throw BinningError("unsupported model format version " +
                               std::to_string(m.format_version));
        m.variable = j.at("variable").get<std::string>();
        m.target = target_from(j.at("target"));
        m.categorical = j.at("categorical").get<bool>();
        m.splits = j.at("splits").get<std::vector<double>>();
        for (const auto& b : j.at("bins")) m.bins.push_back(bin_from(b));
        const auto& t = j.at("totals");
        m.total = t.at("records").get<std::int64_t>();
        m.total_nonevent = t.at("nonevent").get<std::int64_t>();
        m.total_event = t.at("event").get<std::int64_t>();
        m.class_totals = t.at("classes").get<std::vector<std::int64_t>>();
        m.config = config_from(j.at("config"));
        m.solver = j.at("solver").get<std::string>();
        m.status = parse_status(j.at("status").get<std::string>());
        m.objective = j.at("objective").get<double>();
        m.trend_used = parse_trend(j.at("trend").get<std::string>());
        m.change_point = optional_from<int>(j, "change_point");
        m.class_trends = trends_from(j.at("class_trends"));
        if (!j.at("quality").is_null()) m.quality = quality_from(j.at("quality"));
        return m;
    } catch (const json::exception& e) {
        throw BinningError(std::string("malformed model: ") + e.what());
    }
}

void save_model(const BinningModel& model, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw BinningError("cannot write model file '" + path + "'");
    out << model_to_json(model);
    if (!out) throw BinningError("error writing model file '" + path + "'");
}

BinningModel load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw BinningError("cannot read model file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return model_from_json(ss.str());
}

}  // namespace optbin
