// Copyright 2026 The plfkit Authors.
// SPDX-License-Identifier: Apache-2.0

#include "plf/report.hpp"

#include <fmt/format.h>

namespace plf {

using nlohmann::json;

namespace {

json opt(std::optional<double> v) { return v ? json(*v) : json(nullptr); }

std::optional<double> opt_from(const json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (!it->is_number()) throw ParseError(fmt::format("report field '{}' is not a number", key));
  return it->get<double>();
}

std::size_t count_from(const json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end() || !it->is_number_unsigned())
    throw ParseError(fmt::format("report field '{}' is not a count", key));
  return it->get<std::size_t>();
}

}  // namespace

json to_json(const EvalResult& r) {
  json per = json::array();
  for (const ThresholdAp& t : r.per_threshold)
    per.push_back({{"iou", t.iou_threshold}, {"ap", opt(t.ap)}});
  json out = {{"map", opt(r.map)},
              {"ap50", opt(r.ap50)},
              {"ap75", opt(r.ap75)},
              {"ap_medium", opt(r.ap_medium)},
              {"ap_large", opt(r.ap_large)},
              {"per_threshold", std::move(per)},
              {"counts", {{"images", r.counts.images}, {"gt", r.counts.gt}, {"dets", r.counts.dets}}},
              {"empty_ground_truth", r.empty_ground_truth}};
  if (r.ap_small) out["ap_small"] = *r.ap_small;
  return out;
}

EvalResult eval_result_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("evaluation report must be an object");
  EvalResult r;
  r.map = opt_from(j, "map");
  r.ap50 = opt_from(j, "ap50");
  r.ap75 = opt_from(j, "ap75");
  r.ap_small = opt_from(j, "ap_small");
  r.ap_medium = opt_from(j, "ap_medium");
  r.ap_large = opt_from(j, "ap_large");
  const auto per = j.find("per_threshold");
  if (per == j.end() || !per->is_array()) throw ParseError("report lacks 'per_threshold'");
  for (const json& p : *per) {
    const auto iou = opt_from(p, "iou");
    if (!iou) throw ParseError("per_threshold entry lacks 'iou'");
    r.per_threshold.push_back({*iou, opt_from(p, "ap")});
  }
  const auto counts = j.find("counts");
  if (counts == j.end() || !counts->is_object()) throw ParseError("report lacks 'counts'");
  r.counts = {count_from(*counts, "images"), count_from(*counts, "gt"),
              count_from(*counts, "dets")};
  const auto empty = j.find("empty_ground_truth");
  r.empty_ground_truth = empty != j.end() && empty->is_boolean() && empty->get<bool>();
  return r;
}

json to_json(const StratifiedReport& r) {
  json groups = json::array();
  for (const GroupResult& g : r.groups) {
    json entry = {{"group", g.group}, {"name", g.name}, {"images", g.images}};
    entry["result"] = g.result ? to_json(*g.result) : json(nullptr);
    if (!g.error.empty()) entry["error"] = g.error;
    groups.push_back(std::move(entry));
  }
  return {{"groups", std::move(groups)}, {"unassigned_images", r.unassigned_images}};
}

StratifiedReport stratified_report_from_json(const json& j) {
  StratifiedReport r;
  if (!j.is_object() || !j.contains("groups") || !j["groups"].is_array())
    throw ParseError("stratified report lacks 'groups'");
  for (const json& g : j["groups"]) {
    GroupResult out;
    out.group = g.at("group").get<int>();
    out.name = g.value("name", std::string{});
    out.images = g.at("images").get<std::size_t>();
    if (g.contains("result") && !g["result"].is_null())
      out.result = eval_result_from_json(g["result"]);
    out.error = g.value("error", std::string{});
    r.groups.push_back(std::move(out));
  }
  r.unassigned_images = count_from(j, "unassigned_images");
  return r;
}

std::string format_percent(std::optional<double> v) {
  return v ? fmt::format("{:.1f}", *v) : std::string("-");
}

std::string render_eval_table(const EvalResult& r, std::string_view label) {
  const bool with_small = r.ap_small.has_value();
  std::string out = fmt::format("{:<12}{:>7}{:>7}{:>7}", "", "mAP", "AP50", "AP75");
  if (with_small) out += fmt::format("{:>7}", "AP_S");
  out += fmt::format("{:>7}{:>7}\n", "AP_M", "AP_L");
  out += fmt::format("{:<12}{:>7}{:>7}{:>7}", label, format_percent(r.map),
                     format_percent(r.ap50), format_percent(r.ap75));
  if (with_small) out += fmt::format("{:>7}", format_percent(r.ap_small));
  out += fmt::format("{:>7}{:>7}\n", format_percent(r.ap_medium), format_percent(r.ap_large));
  return out;
}

std::string render_group_table(const StratifiedReport& r, const EvalResult* overall) {
  std::string out = fmt::format("{:<12}{:>7}{:>7}{:>7}{:>7}{:>7}{:>7}\n", "Group", "Images",
                                "mAP", "AP50", "AP75", "AP_M", "AP_L");
  const auto row = [&](std::string_view name, std::size_t images, const EvalResult* e) {
    if (e == nullptr) {
      out += fmt::format("{:<12}{:>7}{:>7}{:>7}{:>7}{:>7}{:>7}\n", name, images, "-", "-",
                         "-", "-", "-");
      return;
    }
    out += fmt::format("{:<12}{:>7}{:>7}{:>7}{:>7}{:>7}{:>7}\n", name, images,
                       format_percent(e->map), format_percent(e->ap50),
                       format_percent(e->ap75), format_percent(e->ap_medium),
                       format_percent(e->ap_large));
  };
  for (const GroupResult& g : r.groups)
    row(g.name, g.images, g.result ? &*g.result : nullptr);
  if (overall != nullptr) row("All", overall->counts.images, overall);
  return out;
}

}  // namespace plf
