// Text rendering of cells, numbers and bin intervals.
#pragma once

#include <string>

#include "optbin/core.hpp"

namespace optbin {

// Shortest round-tripping decimal representation.
std::string format_number(double v);

// Categorical label of a cell; numbers render via format_number, missing as "".
std::string cell_label(const Cell& c);

// "(-inf, 30.5)", "[30.5, 48.5)", "[116.5, inf)" or "(-inf, inf)".
std::string interval_label(const double* lower, const double* upper);

}  // namespace optbin
