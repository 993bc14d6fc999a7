// JSON persistence of BinningModel.
//
// Top-level fields: format_version, variable, target {kind, class_count},
// categorical, splits, bins (kind regular/others/special/missing, label,
// lower/upper or categories, counts and transform values), totals, config,
// solver, status, objective, trend, change_point, class_trends and quality
// (null unless the target is binary). Doubles are written in shortest
// round-trip form, so loading a saved model reproduces it exactly.
#pragma once

#include <string>

#include "optbin/binning.hpp"

namespace optbin {

std::string model_to_json(const BinningModel& model);
// Throws BinningError for malformed text or an unsupported format version.
BinningModel model_from_json(const std::string& text);

void save_model(const BinningModel& model, const std::string& path);
BinningModel load_model(const std::string& path);

}  // namespace optbin
