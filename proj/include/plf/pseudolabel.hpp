// Copyright 2026 The plfkit Authors.
// SPDX-License-Identifier: Apache-2.0

// Teacher detections to weak labels: confidence filtering, optional
// duplicate suppression and per-image caps, plus fidelity audits against
// human annotation.

#pragma once

#include <optional>
#include <span>
#include <vector>

#include "plf/annotations.hpp"
#include "plf/evaluator.hpp"

namespace plf {

struct FilterConfig {
  double score_threshold{0.4};
  // Disabled unless set.
  std::optional<double> nms_iou;
  std::optional<std::size_t> max_per_image;

  /// Throws ConfigError.
  void validate() const;
};

/// Detections with score >= threshold, in input order.
std::vector<Detection> filter_by_confidence(std::span<const Detection> dets,
                                            double threshold);
std::vector<Detection> filter_by_confidence(std::span<const Detection> dets,
                                            const FilterConfig& cfg);

/// Greedy suppression over one image's detections, class-agnostic. Returns
/// survivors in descending score order; equal scores keep input order.
std::vector<Detection> nms(std::span<const Detection> dets, double iou_thresh);

/// Full weak-label pass: threshold, then per (image, category) NMS when
/// enabled, then the per-image cap (highest scores kept). Survivors keep
/// their input order.
std::vector<Detection> apply_filter(std::span<const Detection> dets,
                                    const FilterConfig& cfg);

/// Evaluates pseudo-labels as predictions against human ground truth.
/// Throws IntegrityError when either side references images outside the
/// manifest.
EvalResult audit_fidelity(std::span<const Detection> pseudo,
                          std::span<const GroundTruthAnn> gt,
                          const DatasetManifest& manifest,
                          const EvalConfig& cfg = {});

}  // namespace plf
