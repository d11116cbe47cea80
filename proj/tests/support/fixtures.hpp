// Copyright 2026 The plfkit Authors.
// SPDX-License-Identifier: Apache-2.0

// Random dataset fixtures and conversions to the oracle's plain types.

#pragma once

#include <algorithm>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include <unistd.h>

#include "oracle/brute_force_eval.hpp"
#include "plf/annotations.hpp"
#include "plf/evaluator.hpp"

namespace plf::testing {

struct Fixture {
  DatasetManifest manifest;
  std::vector<GroundTruthAnn> gts;
  std::vector<Detection> dets;
};

struct FixtureSpec {
  int max_images = 10;
  int max_boxes = 8;
  int categories = 1;
  // Quantizes scores to multiples of 0.05 so ties occur.
  bool tied_scores = false;
};

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline int uniform_int(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

/// A box inside a w x h image whose side spans small/medium/large areas.
inline BBox random_box(std::mt19937_64& rng, int img_w, int img_h) {
  const double side_max = std::min(img_w, img_h) * 0.6;
  const double bw = uniform(rng, 8.0, side_max);
  const double bh = std::clamp(bw * uniform(rng, 0.5, 1.8), 6.0, img_h * 0.9);
  const double x = uniform(rng, 0.0, img_w - bw);
  const double y = uniform(rng, 0.0, img_h - bh);
  return {x, y, bw, bh};
}

inline BBox jitter(std::mt19937_64& rng, const BBox& b, double amount) {
  const double dx = uniform(rng, -amount, amount) * b.width;
  const double dy = uniform(rng, -amount, amount) * b.height;
  const double sw = 1.0 + uniform(rng, -amount, amount);
  const double sh = 1.0 + uniform(rng, -amount, amount);
  BBox out{std::max(0.0, b.x_min + dx), std::max(0.0, b.y_min + dy), b.width * sw,
           b.height * sh};
  return out;
}

inline Fixture random_fixture(std::mt19937_64& rng, const FixtureSpec& spec = {}) {
  const int num_images = uniform_int(rng, 1, spec.max_images);
  std::vector<ImageRecord> images;
  std::vector<Category> cats;
  for (int c = 1; c <= spec.categories; ++c) cats.push_back({c, "c" + std::to_string(c)});
  for (int i = 0; i < num_images; ++i) {
    ImageRecord r;
    r.image_id = 100 + 3 * i;
    r.file_name = "img_" + std::to_string(r.image_id) + ".jpg";
    r.width = uniform_int(rng, 160, 640);
    r.height = uniform_int(rng, 160, 480);
    images.push_back(r);
  }
  // Shuffle manifest order so ascending-id pooling is exercised.
  std::shuffle(images.begin(), images.end(), rng);
  Fixture f{DatasetManifest(images, cats), {}, {}};

  std::int64_t ann_id = 1;
  for (const ImageRecord& r : f.manifest.images()) {
    const int n_gt = uniform_int(rng, 0, spec.max_boxes);
    for (int k = 0; k < n_gt; ++k) {
      const CategoryId cat = uniform_int(rng, 1, spec.categories);
      const BBox b = random_box(rng, r.width, r.height);
      f.gts.push_back({ann_id++, r.image_id, b, cat});
      // Most GT get a nearby detection, some a duplicate.
      if (uniform(rng, 0, 1) < 0.75)
        f.dets.push_back({r.image_id, jitter(rng, b, 0.15), 0.0, cat});
      if (uniform(rng, 0, 1) < 0.15)
        f.dets.push_back({r.image_id, jitter(rng, b, 0.3), 0.0, cat});
    }
    const int n_fp = uniform_int(rng, 0, 3);
    for (int k = 0; k < n_fp; ++k)
      f.dets.push_back({r.image_id, random_box(rng, r.width, r.height), 0.0,
                        uniform_int(rng, 1, spec.categories)});
  }
  for (Detection& d : f.dets) {
    d.score = uniform(rng, 0.0, 1.0);
    if (spec.tied_scores) d.score = std::round(d.score * 20.0) / 20.0;
  }
  std::shuffle(f.dets.begin(), f.dets.end(), rng);
  return f;
}

inline std::vector<long long> oracle_images(const DatasetManifest& m) {
  std::vector<long long> out;
  for (const ImageRecord& r : m.images()) out.push_back(r.image_id);
  return out;
}

inline std::vector<oracle::Gt> oracle_gts(const std::vector<GroundTruthAnn>& gts) {
  std::vector<oracle::Gt> out;
  for (const GroundTruthAnn& g : gts)
    out.push_back({g.image_id, g.category_id,
                   {g.bbox.x_min, g.bbox.y_min, g.bbox.width, g.bbox.height}});
  return out;
}

inline std::vector<oracle::Det> oracle_dets(const std::vector<Detection>& dets) {
  std::vector<oracle::Det> out;
  for (const Detection& d : dets)
    out.push_back({d.image_id, d.category_id,
                   {d.bbox.x_min, d.bbox.y_min, d.bbox.width, d.bbox.height}, d.score});
  return out;
}

inline oracle::Metrics oracle_evaluate(const Fixture& f, int max_dets = 100) {
  oracle::Config cfg;
  cfg.thresholds = oracle::coco_thresholds();
  cfg.max_dets = max_dets;
  return oracle::evaluate(oracle_images(f.manifest), oracle_gts(f.gts), oracle_dets(f.dets),
                          cfg);
}

/// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() /
                   ("plf_test_" + name + "_" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace plf::testing
