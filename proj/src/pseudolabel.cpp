// Copyright 2026 The plfkit Authors.
// SPDX-License-Identifier: Apache-2.0

#include "plf/pseudolabel.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <map>
#include <numeric>

namespace plf {

void FilterConfig::validate() const {
  if (!(score_threshold >= 0.0 && score_threshold <= 1.0))
    throw ConfigError(fmt::format("score threshold {} outside [0, 1]", score_threshold));
  if (nms_iou && !(*nms_iou > 0.0 && *nms_iou <= 1.0))
    throw ConfigError(fmt::format("NMS IoU {} outside (0, 1]", *nms_iou));
  if (max_per_image && *max_per_image == 0)
    throw ConfigError("max_per_image must be positive");
}

std::vector<Detection> filter_by_confidence(std::span<const Detection> dets,
                                            double threshold) {
  std::vector<Detection> out;
  std::copy_if(dets.begin(), dets.end(), std::back_inserter(out),
               [threshold](const Detection& d) { return d.score >= threshold; });
  return out;
}

std::vector<Detection> filter_by_confidence(std::span<const Detection> dets,
                                            const FilterConfig& cfg) {
  return filter_by_confidence(dets, cfg.score_threshold);
}

namespace {

std::vector<std::size_t> by_descending_score(std::span<const Detection> dets,
                                             std::span<const std::size_t> ids) {
  std::vector<std::size_t> order(ids.begin(), ids.end());
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return dets[a].score > dets[b].score;
  });
  return order;
}

// Indices (into dets) of the greedy NMS survivors among `ids`.
std::vector<std::size_t> nms_indices(std::span<const Detection> dets,
                                     std::span<const std::size_t> ids,
                                     double iou_thresh) {
  std::vector<std::size_t> kept;
  for (std::size_t i : by_descending_score(dets, ids)) {
    const bool clear = std::all_of(kept.begin(), kept.end(), [&](std::size_t k) {
      return iou(dets[i].bbox, dets[k].bbox) < iou_thresh;
    });
    if (clear) kept.push_back(i);
  }
  return kept;
}

}  // namespace

std::vector<Detection> nms(std::span<const Detection> dets, double iou_thresh) {
  std::vector<std::size_t> ids(dets.size());
  std::iota(ids.begin(), ids.end(), std::size_t{0});
  std::vector<Detection> out;
  for (std::size_t i : nms_indices(dets, ids, iou_thresh)) out.push_back(dets[i]);
  return out;
}

std::vector<Detection> apply_filter(std::span<const Detection> dets,
                                    const FilterConfig& cfg) {
  cfg.validate();
  std::vector<char> keep(dets.size(), 0);
  for (std::size_t i = 0; i < dets.size(); ++i)
    keep[i] = dets[i].score >= cfg.score_threshold;

  if (cfg.nms_iou) {
    std::map<std::pair<ImageId, CategoryId>, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < dets.size(); ++i)
      if (keep[i]) groups[{dets[i].image_id, dets[i].category_id}].push_back(i);
    for (const auto& [key, ids] : groups) {
      for (std::size_t i : ids) keep[i] = 0;
      for (std::size_t i : nms_indices(dets, ids, *cfg.nms_iou)) keep[i] = 1;
    }
  }

  if (cfg.max_per_image) {
    std::map<ImageId, std::vector<std::size_t>> per_image;
    for (std::size_t i = 0; i < dets.size(); ++i)
      if (keep[i]) per_image[dets[i].image_id].push_back(i);
    for (const auto& [image, ids] : per_image) {
      const std::vector<std::size_t> order = by_descending_score(dets, ids);
      for (std::size_t r = *cfg.max_per_image; r < order.size(); ++r) keep[order[r]] = 0;
    }
  }

  std::vector<Detection> out;
  for (std::size_t i = 0; i < dets.size(); ++i)
    if (keep[i]) out.push_back(dets[i]);
  return out;
}

EvalResult audit_fidelity(std::span<const Detection> pseudo,
                          std::span<const GroundTruthAnn> gt,
                          const DatasetManifest& manifest, const EvalConfig& cfg) {
  return evaluate(pseudo, gt, manifest, cfg);
}

}  // namespace plf
