// Copyright 2026 The plfkit Authors.
// SPDX-License-Identifier: Apache-2.0

// Latency records (JSON Lines) from model adapters, per-model summaries and
// speedup ratios. Nothing is timed here.

#pragma once

#include <filesystem>
#include <json.hpp>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "plf/annotations.hpp"

namespace plf {

struct LatencyRecord {
  std::string model_name;
  double forward_ms{0};
  double pipeline_ms{0};
  std::optional<ImageId> image_id;
  std::optional<std::string> timestamp;
};

struct LatencySummary {
  std::string model_name;
  std::size_t count{0};
  double mean_forward_ms{0};
  double mean_pipeline_ms{0};
  double p50_pipeline_ms{0};
  double p90_pipeline_ms{0};
  double p99_pipeline_ms{0};
};

/// Throws RangeError unless forward_ms > 0 and pipeline_ms >= forward_ms.
void validate(const LatencyRecord& r);

/// One record per non-blank line; errors name the source and line.
std::vector<LatencyRecord> parse_latency_jsonl(std::string_view text,
                                               std::string_view source = "<memory>");
std::vector<LatencyRecord> load_latency_log(const std::filesystem::path& path);
std::string to_json_line(const LatencyRecord& r);

/// Nearest-rank percentile: the ceil(p/100 * n)-th smallest value.
double nearest_rank(std::span<const double> sorted, int percent);

/// Summary of records that all belong to one model. Throws EmptyInput.
LatencySummary summarize(std::string model_name, std::span<const LatencyRecord> records);

/// One summary per model, ordered by model name. Throws EmptyInput.
std::vector<LatencySummary> aggregate(std::span<const LatencyRecord> records);

/// Mean forward time of `a` over that of `b`.
double speedup(const LatencySummary& a, const LatencySummary& b);

nlohmann::json to_json(const LatencySummary& s);
LatencySummary latency_summary_from_json(const nlohmann::json& j);

/// Columns: Model, N, Forward (ms), Pipeline (ms), p50, p90, p99.
std::string render_latency_table(std::span<const LatencySummary> summaries);
/// e.g. "speedup SAM3 vs yolov8s: 196.3×"
std::string render_speedup(const LatencySummary& a, const LatencySummary& b);

}  // namespace plf
