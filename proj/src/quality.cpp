#include "optbin/quality.hpp"

#include <algorithm>
#include <cmath>

#include "optbin/aggregate.hpp"

namespace optbin {

double rayleigh_factor(double nu, double c) {
    return nu / c * std::exp(-nu * nu / (2.0 * c * c) + 0.5);
}

double c_star(double a, double b) {
    return std::sqrt(b * b - a * a) / std::sqrt(2.0 * std::log(b / a));
}

double default_c() { return c_star(0.3, 0.5); }

double hhi_normalized(const std::vector<double>& sizes) {
    const double n = static_cast<double>(sizes.size());
    if (sizes.size() < 2) return 1.0;
    double s2 = 0.0;
    for (double s : sizes) s2 += s * s;
    return 1.0 - (1.0 - s2) / (1.0 - 1.0 / n);
}

double quality_score(double nu, const std::vector<double>& pvalues,
                     const std::vector<double>& sizes) {
    if (sizes.size() < 2) return 0.0;
    double q = rayleigh_factor(nu, default_c());
    for (double p : pvalues) q *= 1.0 - p;
    q *= 1.0 - hhi_normalized(sizes);
    // Rounding can push the product a hair outside [0, 1].
    return std::clamp(q, 0.0, 1.0);
}

std::string iv_label(double nu) {
    if (nu < 0.02) return "not useful";
    if (nu < 0.1) return "weak";
    if (nu < 0.3) return "medium";
    if (nu < 0.5) return "strong";
    return "over-prediction";
}

std::vector<double> adjacent_pvalues(const std::vector<BinStats>& bins) {
    std::vector<double> out;
    for (std::size_t b = 1; b < bins.size(); ++b)
        out.push_back(two_proportion_pvalue(bins[b - 1].event, bins[b - 1].nonevent,
                                            bins[b].event, bins[b].nonevent));
    return out;
}

QualityReport quality_report(const std::vector<BinStats>& bins) {
    QualityReport r;
    std::int64_t total = 0;
    for (const auto& b : bins) {
        r.iv += b.iv;
        total += b.count;
    }
    for (const auto& b : bins)
        r.sizes.push_back(total > 0 ? static_cast<double>(b.count) / static_cast<double>(total)
                                    : 0.0);
    r.pvalues = adjacent_pvalues(bins);
    r.rayleigh = rayleigh_factor(r.iv, default_c());
    r.hhi = hhi_normalized(r.sizes);
    r.score = quality_score(r.iv, r.pvalues, r.sizes);
    r.label = iv_label(r.iv);
    return r;
}

}  // namespace optbin
