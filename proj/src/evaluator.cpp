// Copyright 2026 The plfkit Authors.
// SPDX-License-Identifier: Apache-2.0

#include "plf/evaluator.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "parallel.hpp"

namespace plf {

namespace {

// Evenly spaced values with the endpoint pinned, computed as start + i*step
// so grids agree bit-for-bit with the usual numpy.linspace construction.
std::vector<double> linspace(double start, double stop, int n) {
  std::vector<double> out(static_cast<std::size_t>(n));
  if (n == 1) {
    out[0] = start;
    return out;
  }
  const double step = (stop - start) / static_cast<double>(n - 1);
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = static_cast<double>(i) * step + start;
  out.back() = stop;
  return out;
}

}  // namespace

std::vector<double> default_iou_thresholds() { return linspace(0.50, 0.95, 10); }

std::vector<double> recall_grid(int recall_points) {
  return linspace(0.0, 1.0, recall_points);
}

void EvalConfig::validate() const {
  if (iou_thresholds.empty()) throw ConfigError("at least one IoU threshold is required");
  for (std::size_t i = 0; i < iou_thresholds.size(); ++i) {
    const double t = iou_thresholds[i];
    if (!(t > 0.0 && t <= 1.0))
      throw ConfigError(fmt::format("IoU threshold {} outside (0, 1]", t));
    if (i > 0 && !(t > iou_thresholds[i - 1]))
      throw ConfigError("IoU thresholds must be strictly increasing");
  }
  if (recall_points < 2) throw ConfigError("recall_points must be at least 2");
  if (max_dets < 1) throw ConfigError("max_dets must be positive");
  const auto check = [](const AreaRange& r) {
    if (!(r.lo >= 0.0) || !(r.hi > r.lo))
      throw ConfigError(fmt::format("area range '{}' is empty", r.name));
  };
  check(all);
  check(medium);
  check(large);
  if (small) check(*small);
}

// -- matching ---------------------------------------------------------------

namespace {

enum : signed char { kIgnored = -1, kFalsePositive = 0, kTruePositive = 1 };

// One image and one category: detections already score-sorted and truncated.
struct Cell {
  std::vector<std::size_t> det_index;  // into the caller's detection list
  std::vector<double> det_score;
  std::vector<double> det_area;
  std::vector<double> gt_area;
  Eigen::MatrixXd ious;  // detections x ground truth
};

std::vector<std::size_t> sorted_by_score(std::span<const double> scores,
                                         std::size_t max_dets) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  if (order.size() > max_dets) order.resize(max_dets);
  return order;
}

// The core greedy pass. `state` receives one of kIgnored/kFalsePositive/
// kTruePositive per detection; the return value is the non-ignored GT count.
std::size_t match_cell(const Cell& cell, double thresh, const AreaRange& area,
                       std::vector<signed char>& state,
                       std::vector<GroundTruthMatch>* gt_out = nullptr,
                       std::vector<DetectionMatch>* det_out = nullptr) {
  const std::size_t num_gt = cell.gt_area.size();
  const std::size_t num_det = cell.det_score.size();
  std::vector<char> gt_ignored(num_gt), gt_matched(num_gt, 0);
  std::size_t counted = 0;
  for (std::size_t g = 0; g < num_gt; ++g) {
    gt_ignored[g] = !area.contains(cell.gt_area[g]);
    if (!gt_ignored[g]) ++counted;
  }

  state.assign(num_det, kFalsePositive);
  for (std::size_t d = 0; d < num_det; ++d) {
    const auto best_among = [&](bool ignored) -> std::ptrdiff_t {
      std::ptrdiff_t best = -1;
      double best_iou = thresh;
      for (std::size_t g = 0; g < num_gt; ++g) {
        if (gt_matched[g] || static_cast<bool>(gt_ignored[g]) != ignored) continue;
        const double v = cell.ious(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(g));
        if (v < thresh) continue;
        if (best < 0 || v > best_iou) {
          best = static_cast<std::ptrdiff_t>(g);
          best_iou = v;
        }
      }
      return best;
    };
    std::ptrdiff_t m = best_among(false);
    if (m < 0) m = best_among(true);

    if (m >= 0) {
      const auto g = static_cast<std::size_t>(m);
      gt_matched[g] = 1;
      state[d] = gt_ignored[g] ? kIgnored : kTruePositive;
    } else if (!area.contains(cell.det_area[d])) {
      state[d] = kIgnored;
    }
    if (det_out != nullptr) {
      DetectionMatch dm;
      dm.index = cell.det_index[d];
      dm.score = cell.det_score[d];
      dm.matched = m >= 0;
      if (m >= 0)
        dm.iou = cell.ious(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(m));
      dm.ignored = state[d] == kIgnored;
      det_out->push_back(dm);
    }
  }
  if (gt_out != nullptr)
    for (std::size_t g = 0; g < num_gt; ++g)
      gt_out->push_back({gt_matched[g] != 0, gt_ignored[g] != 0});
  return counted;
}

Cell make_cell(std::span<const Detection> dets, std::span<const std::size_t> det_ids,
               std::span<const GroundTruthAnn> gts, std::span<const std::size_t> gt_ids,
               std::size_t max_dets) {
  std::vector<double> scores;
  scores.reserve(det_ids.size());
  for (std::size_t i : det_ids) scores.push_back(dets[i].score);
  const std::vector<std::size_t> order = sorted_by_score(scores, max_dets);

  Cell cell;
  std::vector<BBox> det_boxes, gt_boxes;
  for (std::size_t o : order) {
    const Detection& d = dets[det_ids[o]];
    cell.det_index.push_back(det_ids[o]);
    cell.det_score.push_back(d.score);
    cell.det_area.push_back(d.bbox.area());
    det_boxes.push_back(d.bbox);
  }
  for (std::size_t g : gt_ids) {
    cell.gt_area.push_back(gts[g].bbox.area());
    gt_boxes.push_back(gts[g].bbox);
  }
  cell.ious = pairwise_iou(det_boxes, gt_boxes);
  return cell;
}

}  // namespace

MatchOutcome match_image(std::span<const Detection> dets,
                         std::span<const GroundTruthAnn> gts, double iou_thresh,
                         const AreaRange& area, int max_dets) {
  std::vector<std::size_t> det_ids(dets.size()), gt_ids(gts.size());
  std::iota(det_ids.begin(), det_ids.end(), std::size_t{0});
  std::iota(gt_ids.begin(), gt_ids.end(), std::size_t{0});
  const Cell cell = make_cell(dets, det_ids, gts, gt_ids,
                              static_cast<std::size_t>(std::max(max_dets, 0)));
  MatchOutcome out;
  std::vector<signed char> state;
  match_cell(cell, iou_thresh, area, state, &out.ground_truth, &out.detections);
  return out;
}

// -- curves -----------------------------------------------------------------

std::vector<PrPoint> precision_recall_curve(std::span<const DetectionMatch> sorted,
                                            std::size_t num_gt) {
  std::vector<PrPoint> curve;
  if (num_gt == 0) return curve;
  std::size_t tp = 0, fp = 0;
  for (const DetectionMatch& d : sorted) {
    if (d.ignored) continue;
    (d.matched ? tp : fp) += 1;
    curve.push_back({static_cast<double>(tp) / static_cast<double>(num_gt),
                     static_cast<double>(tp) / static_cast<double>(tp + fp)});
  }
  return curve;
}

double ap_interpolated(std::span<const PrPoint> curve, int recall_points) {
  if (recall_points < 2) throw ConfigError("recall_points must be at least 2");
  std::vector<double> envelope(curve.size());
  for (std::size_t i = 0; i < curve.size(); ++i) envelope[i] = curve[i].precision;
  for (std::size_t i = envelope.size(); i > 1; --i)
    envelope[i - 2] = std::max(envelope[i - 2], envelope[i - 1]);

  const std::vector<double> grid = recall_grid(recall_points);
  double sum = 0.0;
  auto it = curve.begin();
  for (double r : grid) {
    // Recall is non-decreasing along the curve.
    it = std::lower_bound(it, curve.end(), r,
                          [](const PrPoint& p, double v) { return p.recall < v; });
    if (it == curve.end()) break;
    sum += envelope[static_cast<std::size_t>(it - curve.begin())];
  }
  return sum / static_cast<double>(recall_points);
}

// -- evaluate ---------------------------------------------------------------

namespace {

// AP fraction for one category from per-detection states pooled in score order.
double pooled_ap(std::span<const std::pair<std::size_t, std::size_t>> order,
                 const std::vector<std::vector<signed char>>& states,
                 std::size_t num_gt, int recall_points) {
  std::vector<PrPoint> curve;
  curve.reserve(order.size());
  std::size_t tp = 0, fp = 0;
  const double n = static_cast<double>(num_gt);
  for (const auto& [cell, det] : order) {
    const signed char s = states[cell][det];
    if (s == kIgnored) continue;
    (s == kTruePositive ? tp : fp) += 1;
    curve.push_back({static_cast<double>(tp) / n,
                     static_cast<double>(tp) / static_cast<double>(tp + fp)});
  }
  return ap_interpolated(curve, recall_points);
}

std::optional<double> lookup_threshold(const std::vector<ThresholdAp>& per, double t) {
  for (const ThresholdAp& p : per)
    if (std::abs(p.iou_threshold - t) < 1e-9) return p.ap;
  return std::nullopt;
}

}  // namespace

EvalResult evaluate(std::span<const Detection> dets,
                    std::span<const GroundTruthAnn> gts,
                    const DatasetManifest& manifest, const EvalConfig& cfg) {
  cfg.validate();

  // Images in ascending id order fix the pooling order.
  std::vector<ImageId> image_ids;
  image_ids.reserve(manifest.size());
  for (const ImageRecord& r : manifest.images()) image_ids.push_back(r.image_id);
  std::sort(image_ids.begin(), image_ids.end());
  std::unordered_map<ImageId, std::size_t> image_pos;
  for (std::size_t i = 0; i < image_ids.size(); ++i) image_pos.emplace(image_ids[i], i);

  for (std::size_t i = 0; i < gts.size(); ++i)
    if (!image_pos.contains(gts[i].image_id))
      throw IntegrityError(fmt::format("ground truth {}: image_id {} not in manifest",
                                       gts[i].ann_id, gts[i].image_id));
  for (std::size_t i = 0; i < dets.size(); ++i)
    if (!image_pos.contains(dets[i].image_id))
      throw IntegrityError(fmt::format("detection {}: image_id {} not in manifest", i,
                                       dets[i].image_id));

  std::vector<CategoryId> categories;
  for (const GroundTruthAnn& g : gts) categories.push_back(g.category_id);
  std::sort(categories.begin(), categories.end());
  categories.erase(std::unique(categories.begin(), categories.end()), categories.end());
  std::unordered_map<CategoryId, std::size_t> cat_pos;
  for (std::size_t k = 0; k < categories.size(); ++k) cat_pos.emplace(categories[k], k);

  EvalResult result;
  result.counts = {manifest.size(), gts.size(), dets.size()};

  std::vector<AreaRange> areas = {cfg.all, cfg.medium, cfg.large};
  if (cfg.small) areas.push_back(*cfg.small);
  const std::size_t num_t = cfg.iou_thresholds.size();
  const std::size_t num_a = areas.size();

  if (categories.empty()) {
    result.empty_ground_truth = true;
    for (double t : cfg.iou_thresholds) result.per_threshold.push_back({t, std::nullopt});
    return result;
  }

  // Cells indexed [category][image].
  const std::size_t num_k = categories.size();
  const std::size_t num_i = image_ids.size();
  std::vector<std::vector<std::size_t>> det_ids(num_k * num_i), gt_ids(num_k * num_i);
  for (std::size_t i = 0; i < gts.size(); ++i)
    gt_ids[cat_pos.at(gts[i].category_id) * num_i + image_pos.at(gts[i].image_id)]
        .push_back(i);
  for (std::size_t i = 0; i < dets.size(); ++i) {
    const auto k = cat_pos.find(dets[i].category_id);
    if (k == cat_pos.end()) continue;  // category without ground truth
    det_ids[k->second * num_i + image_pos.at(dets[i].image_id)].push_back(i);
  }

  // states[(a * num_t + t)][cell][det]
  const std::size_t num_cells = num_k * num_i;
  std::vector<Cell> cells(num_cells);
  std::vector<std::vector<std::vector<signed char>>> states(
      num_a * num_t, std::vector<std::vector<signed char>>(num_cells));
  std::vector<std::vector<std::size_t>> counted(num_a, std::vector<std::size_t>(num_cells, 0));

  detail::parallel_for(num_cells, cfg.threads, [&](std::size_t c) {
    cells[c] = make_cell(dets, det_ids[c], gts, gt_ids[c],
                         static_cast<std::size_t>(cfg.max_dets));
    for (std::size_t a = 0; a < num_a; ++a)
      for (std::size_t t = 0; t < num_t; ++t)
        counted[a][c] = match_cell(cells[c], cfg.iou_thresholds[t], areas[a],
                                   states[a * num_t + t][c]);
  });

  // ap[a][t]: mean over categories with counted ground truth.
  std::vector<std::vector<std::optional<double>>> ap(
      num_a, std::vector<std::optional<double>>(num_t));
  for (std::size_t a = 0; a < num_a; ++a) {
    std::vector<double> sums(num_t, 0.0);
    std::size_t used = 0;
    for (std::size_t k = 0; k < num_k; ++k) {
      std::size_t num_gt = 0;
      std::vector<std::pair<std::size_t, std::size_t>> order;
      for (std::size_t i = 0; i < num_i; ++i) {
        const std::size_t c = k * num_i + i;
        num_gt += counted[a][c];
        for (std::size_t d = 0; d < cells[c].det_score.size(); ++d) order.emplace_back(c, d);
      }
      if (num_gt == 0) continue;
      std::stable_sort(order.begin(), order.end(), [&](const auto& x, const auto& y) {
        return cells[x.first].det_score[x.second] > cells[y.first].det_score[y.second];
      });
      ++used;
      for (std::size_t t = 0; t < num_t; ++t)
        sums[t] += pooled_ap(order, states[a * num_t + t], num_gt, cfg.recall_points);
    }
    if (used == 0) continue;
    for (std::size_t t = 0; t < num_t; ++t)
      ap[a][t] = 100.0 * (sums[t] / static_cast<double>(used));
  }

  const auto mean_over_thresholds = [&](std::size_t a) -> std::optional<double> {
    double sum = 0.0;
    for (std::size_t t = 0; t < num_t; ++t) {
      if (!ap[a][t]) return std::nullopt;
      sum += *ap[a][t];
    }
    return sum / static_cast<double>(num_t);
  };

  for (std::size_t t = 0; t < num_t; ++t)
    result.per_threshold.push_back({cfg.iou_thresholds[t], ap[0][t]});
  result.map = mean_over_thresholds(0);
  result.ap50 = lookup_threshold(result.per_threshold, 0.50);
  result.ap75 = lookup_threshold(result.per_threshold, 0.75);
  result.ap_medium = mean_over_thresholds(1);
  result.ap_large = mean_over_thresholds(2);
  if (cfg.small) result.ap_small = mean_over_thresholds(3);
  return result;
}

}  // namespace plf
