// Copyright 2026 The plfkit Authors.
// SPDX-License-Identifier: Apache-2.0

// JSON and plain-text renderings of evaluation results.

#pragma once

#include <json.hpp>
#include <optional>
#include <string>

#include "plf/evaluator.hpp"
#include "plf/stratify.hpp"

namespace plf {

nlohmann::json to_json(const EvalResult& r);
/// Throws ParseError on schema mismatch.
EvalResult eval_result_from_json(const nlohmann::json& j);

nlohmann::json to_json(const StratifiedReport& r);
StratifiedReport stratified_report_from_json(const nlohmann::json& j);

/// One decimal, or "-" for an absent metric.
std::string format_percent(std::optional<double> v);

/// Columns: mAP, AP50, AP75, AP_M, AP_L (plus AP_S when computed).
std::string render_eval_table(const EvalResult& r, std::string_view label = "all");

/// Columns: Group, Images, mAP, AP50, AP75, AP_M, AP_L. The overall row is
/// appended when given.
std::string render_group_table(const StratifiedReport& r,
                               const EvalResult* overall = nullptr);

}  // namespace plf
