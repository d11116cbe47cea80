// Copyright 2026 The plfkit Authors.
// SPDX-License-Identifier: Apache-2.0

// Dataset artifacts: COCO-style ground truth and prediction JSON, the
// manifest sidecar (split/group/phase per image), YOLO label directories,
// and seeded train/val splitting.

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "plf/geometry.hpp"

namespace plf {

using ImageId = std::int64_t;
using CategoryId = std::int64_t;

enum class Split { Train, Val, Test };
enum class Phase { Gestation, Farrowing, Nursery, Estrus, Growth };

std::string_view to_string(Split s);
std::string_view to_string(Phase p);
std::optional<Split> parse_split(std::string_view name);
std::optional<Phase> parse_phase(std::string_view name);

inline constexpr int kMinGroup = 1;
inline constexpr int kMaxGroup = 8;

struct ImageRecord {
  ImageId image_id{0};
  std::string file_name;
  int width{0};
  int height{0};
  // Ground-truth files without split information are evaluation sets.
  Split split{Split::Test};
  std::optional<int> group;
  std::optional<Phase> phase;

  friend bool operator==(const ImageRecord&, const ImageRecord&) = default;
};

struct Category {
  CategoryId id{0};
  std::string name;

  friend bool operator==(const Category&, const Category&) = default;
};

struct GroundTruthAnn {
  std::int64_t ann_id{0};
  ImageId image_id{0};
  BBox bbox;
  CategoryId category_id{0};
};

struct Detection {
  ImageId image_id{0};
  BBox bbox;
  double score{0};
  CategoryId category_id{0};
};

/// Validated, immutable set of image records and categories.
class DatasetManifest {
 public:
  DatasetManifest() = default;
  /// Throws IntegrityError on duplicate ids, RangeError on bad sizes/groups.
  DatasetManifest(std::vector<ImageRecord> images,
                  std::vector<Category> categories);

  std::span<const ImageRecord> images() const { return images_; }
  std::span<const Category> categories() const { return categories_; }
  std::size_t size() const { return images_.size(); }
  bool empty() const { return images_.empty(); }

  const ImageRecord* find(ImageId id) const;
  bool contains(ImageId id) const { return find(id) != nullptr; }
  std::size_t count(Split s) const;

  /// Zero-based YOLO class index of a category. With no declared categories
  /// the category id is used as the class index directly.
  std::optional<int> class_index(CategoryId id) const;
  std::optional<CategoryId> category_for_class(int class_index) const;

  /// Manifest restricted to the given image ids (manifest order kept).
  DatasetManifest subset(std::span<const ImageId> ids) const;

  friend bool operator==(const DatasetManifest& a, const DatasetManifest& b) {
    return a.images_ == b.images_ && a.categories_ == b.categories_;
  }

 private:
  std::vector<ImageRecord> images_;
  std::vector<Category> categories_;
  std::unordered_map<ImageId, std::size_t> index_;
};

struct GroundTruth {
  DatasetManifest manifest;
  std::vector<GroundTruthAnn> annotations;
};

// -- JSON artifacts ---------------------------------------------------------

GroundTruth parse_ground_truth(const std::filesystem::path& path);
GroundTruth parse_ground_truth_json(std::string_view text,
                                    std::string_view source = "<memory>");

/// Reads the `images`/`categories` part of a ground-truth or manifest file.
DatasetManifest load_manifest(const std::filesystem::path& path);
DatasetManifest parse_manifest_json(std::string_view text,
                                    std::string_view source = "<memory>");

std::vector<Detection> parse_predictions(const std::filesystem::path& path);
std::vector<Detection> parse_predictions_json(
    std::string_view text, std::string_view source = "<memory>");

std::string ground_truth_to_json(const GroundTruth& gt);
std::string manifest_to_json(const DatasetManifest& manifest);
std::string predictions_to_json(std::span<const Detection> dets);

void write_text_file(const std::filesystem::path& path, std::string_view text);
std::string read_text_file(const std::filesystem::path& path);

/// Resolves every detection against the manifest: unknown image ids throw
/// IntegrityError, boxes are clamped to their image and throw OutOfImage
/// when nothing remains.
std::vector<Detection> clamp_to_manifest(std::span<const Detection> dets,
                                         const DatasetManifest& manifest);

/// Keeps the records whose image id is in `manifest`.
std::vector<Detection> restrict_to(std::span<const Detection> dets,
                                   const DatasetManifest& manifest);
std::vector<GroundTruthAnn> restrict_to(std::span<const GroundTruthAnn> gts,
                                        const DatasetManifest& manifest);

// -- YOLO label directories -------------------------------------------------

/// Splits to include; empty means every image in the manifest.
using SplitFilter = std::vector<Split>;

bool split_selected(const SplitFilter& filter, Split s);

/// `class cx cy w h` with six decimals, newline-terminated.
std::string format_yolo_line(const NormBox& n);
NormBox parse_yolo_line(std::string_view line, const std::string& file = {},
                        std::size_t line_no = 0);

std::filesystem::path label_file_name(const ImageRecord& image);

/// Writes one label file per selected manifest image (empty when the image
/// has no boxes). Returns the number of files written.
std::size_t write_yolo_labels(std::span<const Detection> dets,
                              const DatasetManifest& manifest,
                              const std::filesystem::path& out_dir,
                              const SplitFilter& splits = {});
std::size_t write_yolo_labels(std::span<const GroundTruthAnn> gts,
                              const DatasetManifest& manifest,
                              const std::filesystem::path& out_dir,
                              const SplitFilter& splits = {});

/// Inverse of write_yolo_labels. Annotation ids are assigned sequentially
/// from 1 in manifest order.
std::vector<GroundTruthAnn> read_yolo_labels(const std::filesystem::path& dir,
                                             const DatasetManifest& manifest,
                                             const SplitFilter& splits = {});

// -- splits -----------------------------------------------------------------

/// Moves `val_count` Train images to Val.
///
/// Sampling is reproducible across implementations: Train image ids are
/// sorted ascending, a std::mt19937_64 engine is seeded with `seed`, and a
/// partial Fisher-Yates shuffle picks the first `val_count` positions. Each
/// bounded draw in [0, n) rejects raw 64-bit outputs below (2^64 - n) mod n
/// and returns the output mod n.
DatasetManifest split_dataset(const DatasetManifest& manifest,
                              std::size_t val_count, std::uint64_t seed);

}  // namespace plf
