// Copyright 2026 The plfkit Authors.
// SPDX-License-Identifier: Apache-2.0

// COCO-protocol box evaluation: greedy score-ordered matching per image,
// globally pooled precision/recall curves and 101-point interpolated AP.

#pragma once

#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "plf/annotations.hpp"

namespace plf {

/// Half-open area interval [lo, hi) in pixels².
struct AreaRange {
  std::string name;
  double lo{0};
  double hi{std::numeric_limits<double>::infinity()};

  bool contains(double area) const { return area >= lo && area < hi; }
};

/// 0.50, 0.55, ..., 0.95.
std::vector<double> default_iou_thresholds();

struct EvalConfig {
  std::vector<double> iou_thresholds = default_iou_thresholds();
  int recall_points = 101;
  AreaRange all{"all", 0.0, std::numeric_limits<double>::infinity()};
  AreaRange medium{"medium", kSmallAreaMax, kMediumAreaMax};
  AreaRange large{"large", kMediumAreaMax, std::numeric_limits<double>::infinity()};
  // AP_S is only computed on request.
  std::optional<AreaRange> small;
  int max_dets = 100;
  // Worker threads for matching; 0 picks the hardware concurrency.
  unsigned threads = 0;

  /// Throws ConfigError.
  void validate() const;
};

struct DetectionMatch {
  std::size_t index{0};  // position in the input span
  double score{0};
  bool matched{false};
  std::optional<double> iou;
  bool ignored{false};
};

struct GroundTruthMatch {
  bool matched{false};
  bool ignored{false};
};

/// Detections appear in processing order (descending score, ties by input
/// order) after truncation to max_dets; ground truth keeps input order.
struct MatchOutcome {
  std::vector<DetectionMatch> detections;
  std::vector<GroundTruthMatch> ground_truth;
};

/// Greedy matching for one image and one category.
///
/// Each detection takes the unmatched, non-ignored ground truth with the
/// highest IoU >= iou_thresh (lowest index on ties). Failing that it may
/// take an unmatched ignored ground truth, which makes the detection ignored
/// as well. Unmatched detections whose own area falls outside `area` are
/// ignored rather than counted as false positives.
MatchOutcome match_image(std::span<const Detection> dets,
                         std::span<const GroundTruthAnn> gts, double iou_thresh,
                         const AreaRange& area, int max_dets = 100);

struct PrPoint {
  double recall{0};
  double precision{0};
};

/// Recall levels 0, 1/(n-1), ..., 1.
std::vector<double> recall_grid(int recall_points);

/// Cumulative precision/recall over pooled matches already sorted by
/// descending score. Ignored detections are skipped.
std::vector<PrPoint> precision_recall_curve(std::span<const DetectionMatch> sorted,
                                            std::size_t num_gt);

/// Mean over the recall grid of the best precision attained at recall >= r,
/// 0 where the curve never reaches r. Returns a fraction.
double ap_interpolated(std::span<const PrPoint> curve, int recall_points = 101);

struct ThresholdAp {
  double iou_threshold{0};
  std::optional<double> ap;
};

struct EvalCounts {
  std::size_t images{0};
  std::size_t gt{0};
  std::size_t dets{0};
};

/// All APs are percentages. A metric is absent when its area range holds no
/// ground truth, or when the whole evaluation has none (`empty_ground_truth`).
struct EvalResult {
  std::optional<double> map;
  std::optional<double> ap50;
  std::optional<double> ap75;
  std::optional<double> ap_small;
  std::optional<double> ap_medium;
  std::optional<double> ap_large;
  std::vector<ThresholdAp> per_threshold;
  EvalCounts counts;
  bool empty_ground_truth{false};
};

/// Evaluates over the manifest's images. Records referencing images outside
/// the manifest throw IntegrityError. AP is averaged over the categories
/// that have ground truth in the relevant area range.
EvalResult evaluate(std::span<const Detection> dets,
                    std::span<const GroundTruthAnn> gts,
                    const DatasetManifest& manifest, const EvalConfig& cfg = {});

}  // namespace plf
