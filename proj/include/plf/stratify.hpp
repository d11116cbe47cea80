// Copyright 2026 The plfkit Authors.
// SPDX-License-Identifier: Apache-2.0

// Scenario groups (1..8) over test images and per-group evaluation.

#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "plf/annotations.hpp"
#include "plf/evaluator.hpp"

namespace plf {

struct GroupInfo {
  int id{0};
  std::string name;
  std::optional<Phase> phase;
  std::string description;
};

/// Image-to-group mapping plus optional per-group metadata. Images that are
/// not assigned are left out of stratified reports.
struct GroupAssignment {
  std::map<int, GroupInfo> groups;
  std::map<ImageId, int> assignments;

  std::size_t size() const { return assignments.size(); }
  std::optional<int> group_of(ImageId id) const;
  std::vector<ImageId> images_in(int group) const;
  /// Assigned groups in ascending order.
  std::vector<int> group_ids() const;
  /// Metadata name, or "Group N" when none was given.
  std::string display_name(int group) const;
};

/// Throws IntegrityError for unknown image ids or groups outside 1..8.
GroupAssignment parse_groups_json(std::string_view text,
                                  const DatasetManifest& manifest,
                                  std::string_view source = "<memory>");
GroupAssignment load_groups(const std::filesystem::path& path,
                            const DatasetManifest& manifest);
/// Uses the `group`/`phase` fields carried by the manifest sidecar.
GroupAssignment groups_from_manifest(const DatasetManifest& manifest);

std::string groups_to_json(const GroupAssignment& assignment);

struct GroupResult {
  int group{0};
  std::string name;
  std::size_t images{0};
  std::optional<EvalResult> result;
  std::string error;  // set when evaluating this group failed
};

struct StratifiedReport {
  std::vector<GroupResult> groups;  // ascending group id
  std::size_t unassigned_images{0};
};

StratifiedReport evaluate_per_group(std::span<const Detection> dets,
                                    std::span<const GroundTruthAnn> gts,
                                    const DatasetManifest& manifest,
                                    const GroupAssignment& assignment,
                                    const EvalConfig& cfg = {});

}  // namespace plf
