// Copyright 2026 The plfkit Authors.
// SPDX-License-Identifier: Apache-2.0

#include "plf/benchlat.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <map>

namespace plf {

using nlohmann::json;

void validate(const LatencyRecord& r) {
  if (r.model_name.empty()) throw RangeError("latency record without model_name");
  if (!std::isfinite(r.forward_ms) || !(r.forward_ms > 0.0))
    throw RangeError(fmt::format("{}: forward_ms must be positive, got {}", r.model_name,
                                 r.forward_ms));
  if (!std::isfinite(r.pipeline_ms) || r.pipeline_ms < r.forward_ms)
    throw RangeError(fmt::format("{}: pipeline_ms {} is below forward_ms {}", r.model_name,
                                 r.pipeline_ms, r.forward_ms));
}

std::vector<LatencyRecord> parse_latency_jsonl(std::string_view text,
                                               std::string_view source) {
  std::vector<LatencyRecord> out;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;

    const auto fail = [&](const std::string& what) {
      return ParseError(what, std::string(source), line_no);
    };
    json j;
    try {
      j = json::parse(line.begin(), line.end());
    } catch (const json::parse_error& e) {
      throw fail(fmt::format("malformed JSON: {}", e.what()));
    }
    if (!j.is_object()) throw fail("expected a JSON object");
    LatencyRecord r;
    if (!j.contains("model_name") || !j["model_name"].is_string())
      throw fail("missing string field 'model_name'");
    r.model_name = j["model_name"].get<std::string>();
    for (const auto& [key, target] :
         {std::pair{"forward_ms", &r.forward_ms}, std::pair{"pipeline_ms", &r.pipeline_ms}}) {
      if (!j.contains(key) || !j[key].is_number())
        throw fail(fmt::format("missing numeric field '{}'", key));
      *target = j[key].get<double>();
    }
    if (j.contains("image_id") && !j["image_id"].is_null()) {
      if (!j["image_id"].is_number_integer()) throw fail("'image_id' must be an integer");
      r.image_id = j["image_id"].get<ImageId>();
    }
    if (j.contains("timestamp") && !j["timestamp"].is_null()) {
      if (!j["timestamp"].is_string()) throw fail("'timestamp' must be a string");
      r.timestamp = j["timestamp"].get<std::string>();
    }
    try {
      validate(r);
    } catch (const RangeError& e) {
      throw RangeError(fmt::format("{}:{}: {}", source, line_no, e.what()));
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<LatencyRecord> load_latency_log(const std::filesystem::path& path) {
  return parse_latency_jsonl(read_text_file(path), path.string());
}

std::string to_json_line(const LatencyRecord& r) {
  json j = {{"model_name", r.model_name}, {"forward_ms", r.forward_ms},
            {"pipeline_ms", r.pipeline_ms}};
  if (r.image_id) j["image_id"] = *r.image_id;
  if (r.timestamp) j["timestamp"] = *r.timestamp;
  return j.dump() + "\n";
}

double nearest_rank(std::span<const double> sorted, int percent) {
  if (sorted.empty()) throw EmptyInput("percentile of an empty sample");
  if (percent < 0 || percent > 100) throw RangeError("percentile outside 0..100");
  const std::size_t n = sorted.size();
  std::size_t rank = (static_cast<std::size_t>(percent) * n + 99) / 100;
  rank = std::clamp<std::size_t>(rank, 1, n);
  return sorted[rank - 1];
}

namespace {

// Ascending-order Neumaier sum: the result does not depend on record order.
double stable_mean(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  double sum = 0.0, carry = 0.0;
  for (double v : values) {
    const double t = sum + v;
    carry += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
    sum = t;
  }
  return (sum + carry) / static_cast<double>(values.size());
}

}  // namespace

LatencySummary summarize(std::string model_name, std::span<const LatencyRecord> records) {
  if (records.empty())
    throw EmptyInput(fmt::format("no latency records for model '{}'", model_name));
  std::vector<double> forward, pipeline;
  for (const LatencyRecord& r : records) {
    forward.push_back(r.forward_ms);
    pipeline.push_back(r.pipeline_ms);
  }
  LatencySummary s;
  s.model_name = std::move(model_name);
  s.count = records.size();
  s.mean_forward_ms = stable_mean(forward);
  s.mean_pipeline_ms = stable_mean(pipeline);
  std::sort(pipeline.begin(), pipeline.end());
  s.p50_pipeline_ms = nearest_rank(pipeline, 50);
  s.p90_pipeline_ms = nearest_rank(pipeline, 90);
  s.p99_pipeline_ms = nearest_rank(pipeline, 99);
  return s;
}

std::vector<LatencySummary> aggregate(std::span<const LatencyRecord> records) {
  if (records.empty()) throw EmptyInput("no records");
  std::map<std::string, std::vector<LatencyRecord>> by_model;
  for (const LatencyRecord& r : records) by_model[r.model_name].push_back(r);
  std::vector<LatencySummary> out;
  for (auto& [name, recs] : by_model) out.push_back(summarize(name, recs));
  return out;
}

double speedup(const LatencySummary& a, const LatencySummary& b) {
  if (!(b.mean_forward_ms > 0.0))
    throw RangeError(fmt::format("model '{}' has no positive forward time", b.model_name));
  return a.mean_forward_ms / b.mean_forward_ms;
}

json to_json(const LatencySummary& s) {
  return {{"model_name", s.model_name},
          {"count", s.count},
          {"mean_forward_ms", s.mean_forward_ms},
          {"mean_pipeline_ms", s.mean_pipeline_ms},
          {"p50_pipeline_ms", s.p50_pipeline_ms},
          {"p90_pipeline_ms", s.p90_pipeline_ms},
          {"p99_pipeline_ms", s.p99_pipeline_ms}};
}

LatencySummary latency_summary_from_json(const json& j) {
  try {
    LatencySummary s;
    s.model_name = j.at("model_name").get<std::string>();
    s.count = j.at("count").get<std::size_t>();
    s.mean_forward_ms = j.at("mean_forward_ms").get<double>();
    s.mean_pipeline_ms = j.at("mean_pipeline_ms").get<double>();
    s.p50_pipeline_ms = j.at("p50_pipeline_ms").get<double>();
    s.p90_pipeline_ms = j.at("p90_pipeline_ms").get<double>();
    s.p99_pipeline_ms = j.at("p99_pipeline_ms").get<double>();
    return s;
  } catch (const json::exception& e) {
    throw ParseError(fmt::format("latency summary: {}", e.what()));
  }
}

std::string render_latency_table(std::span<const LatencySummary> summaries) {
  std::size_t width = 8;
  for (const LatencySummary& s : summaries) width = std::max(width, s.model_name.size() + 2);
  std::string out = fmt::format("{:<{}}{:>8}{:>15}{:>15}{:>10}{:>10}{:>10}\n", "Model", width,
                                "N", "Forward (ms)", "Pipeline (ms)", "p50", "p90", "p99");
  for (const LatencySummary& s : summaries)
    out += fmt::format("{:<{}}{:>8}{:>15.2f}{:>15.2f}{:>10.2f}{:>10.2f}{:>10.2f}\n",
                       s.model_name, width, s.count, s.mean_forward_ms, s.mean_pipeline_ms,
                       s.p50_pipeline_ms, s.p90_pipeline_ms, s.p99_pipeline_ms);
  return out;
}

std::string render_speedup(const LatencySummary& a, const LatencySummary& b) {
  return fmt::format("speedup {} vs {}: {:.1f}×\n", a.model_name, b.model_name, speedup(a, b));
}

}  // namespace plf
