// Binning quality score for binary targets: a Rayleigh-shaped factor of the
// information value, times the product of (1 - p) over adjacent-bin p-values,
// times one minus the normalized Herfindahl-Hirschman index of bin sizes.
#pragma once

#include <string>
#include <vector>

#include "optbin/core.hpp"

namespace optbin {

// (nu / c) exp(-nu^2 / (2 c^2) + 1/2); equals 1 at nu = c.
double rayleigh_factor(double nu, double c);

// Scale c for which rayleigh_factor(a, c) == rayleigh_factor(b, c).
double c_star(double a, double b);

// c_star(0.3, 0.5): the IV range considered strong.
double default_c();

// Q for IV `nu`, adjacent p-values and bin size fractions (summing to 1).
// Q = 0 for fewer than two bins.
double quality_score(double nu, const std::vector<double>& pvalues,
                     const std::vector<double>& sizes);

// 1 - (1 - sum s^2) / (1 - 1/n): 0 for uniform sizes, 1 for one dominant bin.
double hhi_normalized(const std::vector<double>& sizes);

// "not useful", "weak", "medium", "strong" or "over-prediction".
std::string iv_label(double nu);

// Two-sided pooled z-test p-value for each consecutive pair of bins.
std::vector<double> adjacent_pvalues(const std::vector<BinStats>& bins);

struct QualityReport {
    double iv = 0.0;
    std::vector<double> pvalues;
    std::vector<double> sizes;
    double rayleigh = 0.0;
    double hhi = 0.0;
    double score = 0.0;
    std::string label;

    friend bool operator==(const QualityReport&, const QualityReport&) = default;
};

// Report over the optimized bins (special/missing/others excluded).
QualityReport quality_report(const std::vector<BinStats>& bins);

}  // namespace optbin
