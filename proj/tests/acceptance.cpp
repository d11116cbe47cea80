// Copyright 2026 The plfkit Authors.
// SPDX-License-Identifier: Apache-2.0

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include <fmt/format.h>

#include <chrono>
#include <cmath>
#include <iostream>
#include <random>
#include <sstream>

#include "plf/benchlat.hpp"
#include "plf/cli.hpp"
#include "plf/pseudolabel.hpp"
#include "plf/report.hpp"
#include "plf/stratify.hpp"
#include "support/fixtures.hpp"

namespace {

using namespace plf;
namespace fs = std::filesystem;

int failures = 0;

void report(std::string_view name, bool ok, const std::string& detail) {
  if (!ok) ++failures;
  fmt::print("{} {:<34} {}\n", ok ? "PASS" : "FAIL", name, detail);
}

double worst_gap(const EvalResult& r, const oracle::Metrics& o, bool& shape_ok) {
  double gap = 0.0;
  const auto cmp = [&](const std::optional<double>& a, const std::optional<double>& b) {
    if (a.has_value() != b.has_value()) {
      shape_ok = false;
      return;
    }
    if (a) gap = std::max(gap, std::abs(*a - *b));
  };
  cmp(r.map, o.map);
  cmp(r.ap50, o.ap50);
  cmp(r.ap75, o.ap75);
  cmp(r.ap_medium, o.ap_medium);
  cmp(r.ap_large, o.ap_large);
  if (r.per_threshold.size() != o.per_threshold.size()) shape_ok = false;
  for (std::size_t t = 0; t < std::min(r.per_threshold.size(), o.per_threshold.size()); ++t)
    cmp(r.per_threshold[t].ap, o.per_threshold[t]);
  return gap;
}

void oracle_equivalence() {
  std::mt19937_64 rng(424242);
  const testing::FixtureSpec specs[] = {{10, 8, 1, false}, {10, 8, 1, true}, {10, 8, 2, false}};
  const int n = 150;
  double gap = 0.0;
  bool shape_ok = true;
  const auto t0 = std::chrono::steady_clock::now();
  for (int i = 0; i < n; ++i) {
    const testing::Fixture f = testing::random_fixture(rng, specs[i % 3]);
    const EvalResult r = evaluate(f.dets, f.gts, f.manifest);
    gap = std::max(gap, worst_gap(r, testing::oracle_evaluate(f), shape_ok));
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  report("evaluator oracle equivalence", shape_ok && gap <= 1e-9 && secs < 10.0,
         fmt::format("{} fixtures, max |diff| {:.3g}, {:.2f} s", n, gap, secs));
}

void hand_ap_cases() {
  const DatasetManifest m({{1, "a.jpg", 1000, 1000, Split::Test, {}, {}}}, {{1, "pig"}});
  const std::vector<GroundTruthAnn> gts{{1, 1, {0, 0, 100, 100}, 1}, {2, 1, {300, 300, 100, 100}, 1}};
  const std::vector<Detection> dets{{1, {0, 0, 100, 100}, 0.9, 1},
                                    {1, {300, 300, 100, 100}, 0.8, 1},
                                    {1, {600, 600, 100, 100}, 0.7, 1}};
  const EvalResult a = evaluate(dets, gts, m);
  const std::vector<GroundTruthAnn> one{{1, 1, {0, 0, 100, 100}, 1}};
  const std::vector<Detection> miss{{1, {500, 500, 100, 100}, 0.9, 1}};
  const EvalResult b = evaluate(miss, one, m);
  const bool ok = a.ap50 && *a.ap50 == 100.0 && b.ap50 && *b.ap50 == 0.0;
  report("hand-verified AP cases", ok,
         fmt::format("TP,TP,FP AP50 {} / unmatched AP50 {}", format_percent(a.ap50),
                     format_percent(b.ap50)));
}

void table_dashes() {
  const DatasetManifest m({{1, "a.jpg", 640, 480, Split::Test, {}, {}},
                           {2, "b.jpg", 640, 480, Split::Test, {}, {}}},
                          {{1, "pig"}});
  const std::vector<GroundTruthAnn> gts{{1, 1, {0, 0, 200, 200}, 1},
                                        {2, 2, {0, 0, 200, 200}, 1},
                                        {3, 2, {300, 300, 50, 50}, 1}};
  std::vector<Detection> dets;
  for (const auto& g : gts) dets.push_back({g.image_id, g.bbox, 0.8, 1});
  GroupAssignment groups;
  groups.assignments = {{1, 1}, {2, 2}};
  const StratifiedReport r = evaluate_per_group(dets, gts, m, groups);
  const std::string table = render_group_table(r, nullptr);
  std::istringstream in(table);
  std::vector<std::string> lines;
  for (std::string l; std::getline(in, l);) lines.push_back(l);
  // AP_M is the sixth column: 12 + 7 * 4 characters in, 7 wide.
  const auto ap_m_cell = [&](std::size_t row) {
    return row < lines.size() && lines[row].size() >= 47 ? lines[row].substr(40, 7) : "";
  };
  const bool ok = r.groups.size() == 2 && !r.groups[0].result->ap_medium &&
                  r.groups[1].result->ap_medium.has_value() &&
                  ap_m_cell(1) == "      -" && ap_m_cell(2) == "  100.0";
  report("zero-medium group renders '-'", ok,
         fmt::format("AP_M cells '{}' / '{}'", ap_m_cell(1), ap_m_cell(2)));
}

void geometry_properties() {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> pos(0.0, 2000.0), size(0.25, 800.0), shift(-5000.0, 5000.0);
  std::uniform_int_distribution<int> dim(32, 8192);
  const int n = 100000;
  bool sym = true, bounds = true, trans = true, round = true;
  double worst_rel = 0.0;
  for (int i = 0; i < n; ++i) {
    const BBox a{pos(rng), pos(rng), size(rng), size(rng)};
    const BBox b{pos(rng), pos(rng), size(rng), size(rng)};
    const double v = iou(a, b);
    sym &= v == iou(b, a);
    bounds &= v >= 0.0 && v <= 1.0;
    const Vector2<double> t(shift(rng), shift(rng));
    trans &= std::abs(iou(a.translated(t), b.translated(t)) - v) <= 1e-9;

    const double w = dim(rng), h = dim(rng);
    std::uniform_real_distribution<double> ux(0.0, w * 0.95), uy(0.0, h * 0.95);
    const double x = ux(rng), y = uy(rng);
    std::uniform_real_distribution<double> uw(0.1, w - x), uh(0.1, h - y);
    const BBox c{x, y, uw(rng), uh(rng)};
    const BBox back = from_norm(to_norm(c, 0, w, h), w, h);
    const double scale = std::max({c.x_min, c.y_min, c.width, c.height});
    const double rel = std::max({std::abs(back.x_min - c.x_min) / scale,
                                 std::abs(back.y_min - c.y_min) / scale,
                                 std::abs(back.width - c.width) / c.width,
                                 std::abs(back.height - c.height) / c.height});
    worst_rel = std::max(worst_rel, rel);
  }
  round = worst_rel <= 1e-9;
  const bool edges = area_class(1024.0) == AreaClass::Medium &&
                     area_class(std::nextafter(1024.0, 0.0)) == AreaClass::Small &&
                     area_class(9216.0) == AreaClass::Large &&
                     area_class(std::nextafter(9216.0, 0.0)) == AreaClass::Medium &&
                     area_class(BBox{0, 0, 32, 32}) == AreaClass::Medium &&
                     area_class(BBox{0, 0, 96, 96}) == AreaClass::Large;
  report("geometry properties", sym && bounds && trans && round && edges,
         fmt::format("{} boxes, symmetric {}, bounded {}, translation {}, round-trip rel {:.2g}, "
                     "area edges {}",
                     n, sym, bounds, trans, worst_rel, edges));
}

void filter_properties() {
  std::mt19937_64 rng(9);
  bool mono = true, idem = true;
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<Detection> dets;
    const int n = testing::uniform_int(rng, 0, 80);
    for (int i = 0; i < n; ++i)
      dets.push_back({1, testing::random_box(rng, 300, 300), testing::uniform(rng, 0, 1), 1});
    double a = testing::uniform(rng, 0, 1), b = testing::uniform(rng, 0, 1);
    if (a > b) std::swap(a, b);
    const auto fa = filter_by_confidence(dets, a);
    const auto fb = filter_by_confidence(dets, b);
    mono &= fb.size() <= fa.size() && filter_by_confidence(fa, b).size() == fb.size();
    const auto twice = filter_by_confidence(fa, a);
    idem &= twice.size() == fa.size();
    for (std::size_t i = 0; idem && i < fa.size(); ++i) idem &= twice[i].score == fa[i].score;
  }
  const std::vector<Detection> edge{{1, {0, 0, 5, 5}, 0.40, 1},
                                    {1, {0, 0, 5, 5}, std::nextafter(0.40, 0.0), 1}};
  const auto kept = filter_by_confidence(edge, 0.4);
  const bool boundary = kept.size() == 1 && kept[0].score == 0.40;
  report("filter monotone/idempotent/0.40", mono && idem && boundary,
         fmt::format("monotone {}, idempotent {}, score 0.40 kept {}", mono, idem, boundary));
}

struct CliRun {
  int code;
  std::string out, err;
};

CliRun cli_run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

void split_determinism(const fs::path& dir) {
  std::vector<ImageRecord> images;
  for (int i = 0; i < 2130; ++i)
    images.push_back({1000 + i, fmt::format("f{}.jpg", i), 1280, 720,
                      i < 1704 ? Split::Train : Split::Test, {}, {}});
  const DatasetManifest in(images, {{1, "pig"}});
  const fs::path path = dir / "manifest.json";
  write_text_file(path, manifest_to_json(in));
  bool ok = true;
  std::string detail;
  for (const char* seed : {"0", "7", "2026"}) {
    const std::vector<std::string> args{"split", "--manifest", path.string(), "--val-count", "340",
                                        "--seed", seed};
    const CliRun a = cli_run(args), b = cli_run(args);
    if (a.code != 0) {
      ok = false;
      detail = a.err;
      break;
    }
    const DatasetManifest out = parse_manifest_json(a.out);
    bool test_same = true;
    for (const ImageRecord& r : in.images())
      test_same &= (r.split == Split::Test) == (out.find(r.image_id)->split == Split::Test);
    ok &= out.count(Split::Train) == 1364 && out.count(Split::Val) == 340 &&
          out.count(Split::Test) == 426 && a.out == b.out && test_same;
    detail = a.err.substr(0, a.err.size() - 1);
  }
  report("split 1364/340/426 deterministic", ok, detail);
}

void format_round_trips(const fs::path& dir) {
  std::mt19937_64 rng(13);
  bool yolo = true, gt_json = true, pred_json = true;
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const testing::Fixture f = testing::random_fixture(rng, {10, 8, 2, false});
    const fs::path out = dir / fmt::format("labels{}", trial);
    write_yolo_labels(f.gts, f.manifest, out);
    const auto back = read_yolo_labels(out, f.manifest);
    yolo &= back.size() == f.gts.size();
    std::size_t k = 0;
    for (const ImageRecord& img : f.manifest.images())
      for (const GroundTruthAnn& g : f.gts) {
        if (g.image_id != img.image_id || k >= back.size()) continue;
        const GroundTruthAnn& r = back[k++];
        yolo &= r.image_id == g.image_id && r.category_id == g.category_id;
        const NormBox a = to_norm(g.bbox, 0, double(img.width), double(img.height));
        const NormBox b = to_norm(r.bbox, 0, double(img.width), double(img.height));
        worst = std::max({worst, std::abs(a.cx - b.cx), std::abs(a.cy - b.cy),
                          std::abs(a.w - b.w), std::abs(a.h - b.h)});
      }

    const GroundTruth gt = parse_ground_truth_json(ground_truth_to_json({f.manifest, f.gts}));
    gt_json &= gt.annotations.size() == f.gts.size();
    for (std::size_t i = 0; gt_json && i < f.gts.size(); ++i)
      gt_json &= gt.annotations[i].bbox == f.gts[i].bbox &&
                 gt.annotations[i].image_id == f.gts[i].image_id;
    const auto dets = parse_predictions_json(predictions_to_json(f.dets));
    pred_json &= dets.size() == f.dets.size();
    for (std::size_t i = 0; pred_json && i < dets.size(); ++i)
      pred_json &= dets[i].bbox == f.dets[i].bbox && dets[i].score == f.dets[i].score;
  }
  yolo &= worst <= 1e-6;

  // Diagnostics must name the file and the line.
  bool diag = true;
  const fs::path labels = dir / "bad";
  const DatasetManifest one({{1, "x.jpg", 100, 100, Split::Test, {}, {}}}, {{1, "pig"}});
  write_text_file(labels / "x.txt", "0 0.5 0.5 0.2 0.2\n0 0.5 oops 0.2 0.2\n");
  try {
    read_yolo_labels(labels, one);
    diag = false;
  } catch (const ParseError& e) {
    diag &= e.line() == 2 && e.file().find("x.txt") != std::string::npos;
  }
  try {
    parse_ground_truth_json("{\n\"images\": [\n{\"id\": 1,,}\n]}", "gt.json");
    diag = false;
  } catch (const ParseError& e) {
    diag &= e.line() == 3 && e.file() == "gt.json";
  }
  try {
    parse_latency_jsonl("{\"model_name\": \"m\", \"forward_ms\": 1, \"pipeline_ms\": 2}\nnope\n",
                        "lat.jsonl");
    diag = false;
  } catch (const ParseError& e) {
    diag &= e.line() == 2 && e.file() == "lat.jsonl";
  }
  report("format round trips + diagnostics", yolo && gt_json && pred_json && diag,
         fmt::format("yolo max norm err {:.2g}, gt json {}, predictions json {}, diagnostics {}",
                     worst, gt_json, pred_json, diag));
}

void bench_arithmetic(const fs::path& dir) {
  std::string log;
  for (double v : {1190.0, 1204.36})
    log += to_json_line({"teacher", v, v + 40.0, {}, {}});
  for (double v : {6.0, 6.2}) log += to_json_line({"student", v, v + 3.2, {}, {}});
  const fs::path path = dir / "latency.jsonl";
  write_text_file(path, log);
  const CliRun r = cli_run({"bench", "--log", path.string(), "--compare", "teacher", "student"});
  const std::string want = "speedup teacher vs student: 196.3×";
  const bool ok = r.code == 0 && r.out.find(want) != std::string::npos;
  const auto pos = r.out.find("speedup");
  report("bench speedup 196.3x", ok,
         pos == std::string::npos ? r.err : r.out.substr(pos, r.out.find('\n', pos) - pos));
}

void score_scale_invariance() {
  std::mt19937_64 rng(17);
  const int n = 150;
  bool ok = true;
  for (int i = 0; i < n && ok; ++i) {
    testing::Fixture f = testing::random_fixture(rng, {10, 8, 1 + i % 2, i % 3 == 0});
    const EvalResult before = evaluate(f.dets, f.gts, f.manifest);
    for (Detection& d : f.dets) d.score = d.score * d.score;
    const EvalResult after = evaluate(f.dets, f.gts, f.manifest);
    ok &= before.map == after.map && before.ap50 == after.ap50 && before.ap75 == after.ap75 &&
          before.ap_medium == after.ap_medium && before.ap_large == after.ap_large;
    for (std::size_t t = 0; t < before.per_threshold.size(); ++t)
      ok &= before.per_threshold[t].ap == after.per_threshold[t].ap;
  }
  report("score-scale invariance x->x^2", ok, fmt::format("{} fixtures", n));
}

}  // namespace

int main() {
  const fs::path dir = testing::scratch_dir("acceptance");
  try {
    oracle_equivalence();
    hand_ap_cases();
    table_dashes();
    geometry_properties();
    filter_properties();
    split_determinism(dir);
    format_round_trips(dir);
    bench_arithmetic(dir);
    score_scale_invariance();
  } catch (const std::exception& e) {
    fmt::print("FAIL unexpected exception: {}\n", e.what());
    ++failures;
  }
  fs::remove_all(dir);
  fmt::print("{} failure(s)\n", failures);
  return failures == 0 ? 0 : 1;
}
