// Copyright 2026 The plfkit Authors.
// SPDX-License-Identifier: Apache-2.0

#include "plf/cli.hpp"

#include <fmt/format.h>

#include <CLI11.hpp>
#include <algorithm>
#include <optional>

#include "plf/annotations.hpp"
#include "plf/benchlat.hpp"
#include "plf/evaluator.hpp"
#include "plf/pseudolabel.hpp"
#include "plf/report.hpp"
#include "plf/stratify.hpp"

namespace plf::cli {

namespace {

using nlohmann::json;

enum class Format { Table, Json };

struct GlobalOptions {
  std::string out_path;
  Format format{Format::Table};
  unsigned threads{0};
};

class Output {
 public:
  Output(const GlobalOptions& g, std::ostream& out) : global_(g), out_(out) {}

  void emit(const std::string& text) const {
    if (global_.out_path.empty())
      out_ << text;
    else
      write_text_file(global_.out_path, text);
  }
  bool json_mode() const { return global_.format == Format::Json; }

 private:
  const GlobalOptions& global_;
  std::ostream& out_;
};

SplitFilter parse_split_names(const std::vector<std::string>& names) {
  SplitFilter out;
  for (const std::string& n : names) {
    const auto s = parse_split(n);
    if (!s) throw ConfigError(fmt::format("unknown split '{}'", n));
    out.push_back(*s);
  }
  return out;
}

DatasetManifest select_splits(const DatasetManifest& m, const SplitFilter& splits) {
  if (splits.empty()) return m;
  std::vector<ImageId> ids;
  for (const ImageRecord& r : m.images())
    if (split_selected(splits, r.split)) ids.push_back(r.image_id);
  return m.subset(ids);
}

// -- split ------------------------------------------------------------------

struct SplitArgs {
  std::string manifest;
  std::size_t val_count{0};
  std::uint64_t seed{0};
};

int cmd_split(const SplitArgs& a, const Output& out, std::ostream& err) {
  const DatasetManifest in = load_manifest(a.manifest);
  const DatasetManifest result = split_dataset(in, a.val_count, a.seed);
  out.emit(manifest_to_json(result));
  err << fmt::format("train {} / val {} / test {}\n", result.count(Split::Train),
                     result.count(Split::Val), result.count(Split::Test));
  return kExitOk;
}

// -- pseudolabel ------------------------------------------------------------

struct FilterArgs {
  double score_threshold{0.4};
  std::optional<double> nms_iou;
  std::optional<std::size_t> max_per_image;

  FilterConfig config() const {
    FilterConfig cfg{score_threshold, nms_iou, max_per_image};
    cfg.validate();
    return cfg;
  }
};

void add_filter_options(CLI::App* app, FilterArgs& f) {
  app->add_option("--score-threshold", f.score_threshold,
                  "Keep detections with score >= this value")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  app->add_option("--nms-iou", f.nms_iou, "Enable per-image NMS at this IoU")
      ->check(CLI::Range(0.0, 1.0));
  app->add_option("--max-per-image", f.max_per_image, "Cap boxes per image")
      ->check(CLI::PositiveNumber);
}

struct PseudolabelArgs {
  std::string predictions;
  std::string manifest;
  std::string labels_dir;
  std::vector<std::string> splits;
  FilterArgs filter;
};

int cmd_pseudolabel(const PseudolabelArgs& a, const Output& out) {
  const FilterConfig cfg = a.filter.config();
  const DatasetManifest full = load_manifest(a.manifest);
  const DatasetManifest manifest = select_splits(full, parse_split_names(a.splits));
  const std::vector<Detection> raw =
      restrict_to(clamp_to_manifest(parse_predictions(a.predictions), full), manifest);
  const std::vector<Detection> kept = apply_filter(raw, cfg);
  const std::size_t files = write_yolo_labels(kept, manifest, a.labels_dir);
  const std::size_t dropped = raw.size() - kept.size();

  if (out.json_mode()) {
    const json j = {{"kept", kept.size()},
                    {"dropped", dropped},
                    {"label_files", files},
                    {"score_threshold", cfg.score_threshold}};
    out.emit(j.dump(2) + "\n");
  } else {
    out.emit(fmt::format("kept {} / dropped {}\nlabel files written: {}\n", kept.size(),
                         dropped, files));
  }
  return kExitOk;
}

// -- eval -------------------------------------------------------------------

struct EvalArgs {
  std::string predictions;
  std::string ground_truth;
  std::string manifest;
  std::string groups;
  std::vector<std::string> splits;
  bool fidelity{false};
  int max_dets{100};
  bool ap_small{false};
  FilterArgs filter;
};

int cmd_eval(const EvalArgs& a, const GlobalOptions& g, const Output& out,
             std::ostream& err) {
  EvalConfig cfg;
  cfg.max_dets = a.max_dets;
  cfg.threads = g.threads;
  if (a.ap_small) cfg.small = AreaRange{"small", 0.0, kSmallAreaMax};
  cfg.validate();

  GroundTruth gt = parse_ground_truth(a.ground_truth);
  DatasetManifest full = a.manifest.empty() ? gt.manifest : load_manifest(a.manifest);
  const DatasetManifest manifest = select_splits(full, parse_split_names(a.splits));

  std::vector<Detection> dets =
      restrict_to(clamp_to_manifest(parse_predictions(a.predictions), full), manifest);
  for (const GroundTruthAnn& ann : gt.annotations)
    if (!full.contains(ann.image_id))
      throw IntegrityError(fmt::format("annotation {}: image_id {} not in manifest",
                                       ann.ann_id, ann.image_id));
  const std::vector<GroundTruthAnn> gts = restrict_to(gt.annotations, manifest);

  json report = json::object();
  std::string table;
  if (a.fidelity) {
    const FilterConfig fcfg = a.filter.config();
    const std::size_t before = dets.size();
    dets = apply_filter(dets, fcfg);
    report["filter"] = {{"score_threshold", fcfg.score_threshold},
                        {"kept", dets.size()},
                        {"dropped", before - dets.size()}};
  }

  const EvalResult overall =
      a.fidelity ? audit_fidelity(dets, gts, manifest, cfg) : evaluate(dets, gts, manifest, cfg);
  report["overall"] = to_json(overall);

  if (!a.groups.empty()) {
    const GroupAssignment groups = load_groups(a.groups, manifest);
    const StratifiedReport strat = evaluate_per_group(dets, gts, manifest, groups, cfg);
    if (strat.unassigned_images > 0)
      err << fmt::format("warning: {} image(s) have no group and are left out of the "
                         "stratified report\n",
                         strat.unassigned_images);
    for (const GroupResult& gr : strat.groups)
      if (!gr.error.empty()) err << fmt::format("warning: {}: {}\n", gr.name, gr.error);
    report["stratified"] = to_json(strat);
    table = render_group_table(strat, &overall);
  } else {
    table = render_eval_table(overall, a.fidelity ? "fidelity" : "all");
  }

  out.emit(out.json_mode() ? report.dump(2) + "\n" : table);
  if (overall.empty_ground_truth) {
    err << "no ground truth in the evaluated images; metrics are undefined\n";
    return kExitEmpty;
  }
  return kExitOk;
}

// -- bench ------------------------------------------------------------------

struct BenchArgs {
  std::string log;
  std::vector<std::string> compare;
};

int cmd_bench(const BenchArgs& a, const Output& out, std::ostream& err) {
  const std::vector<LatencyRecord> records = load_latency_log(a.log);
  if (records.empty()) {
    err << "no records\n";
    return kExitEmpty;
  }
  const std::vector<LatencySummary> summaries = aggregate(records);
  const auto find = [&](const std::string& name) -> const LatencySummary& {
    const auto it = std::find_if(summaries.begin(), summaries.end(),
                                 [&](const LatencySummary& s) { return s.model_name == name; });
    if (it == summaries.end())
      throw ConfigError(fmt::format("--compare: no records for model '{}'", name));
    return *it;
  };

  json j = {{"summaries", json::array()}};
  for (const LatencySummary& s : summaries) j["summaries"].push_back(to_json(s));
  std::string table = render_latency_table(summaries);
  if (!a.compare.empty()) {
    const LatencySummary& lhs = find(a.compare[0]);
    const LatencySummary& rhs = find(a.compare[1]);
    j["speedup"] = {{"a", lhs.model_name}, {"b", rhs.model_name}, {"ratio", speedup(lhs, rhs)}};
    table += render_speedup(lhs, rhs);
  }
  out.emit(out.json_mode() ? j.dump(2) + "\n" : table);
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Pseudo-label dataset and COCO evaluation toolkit", "plf"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "TOML config file; command-line flags take precedence");

  GlobalOptions global;
  app.add_option("--out", global.out_path, "Write the report to this file instead of stdout");
  std::string format_name = "table";
  app.add_option("--format", format_name, "Report format: table or json")
      ->check(CLI::IsMember({"table", "json"}))
      ->capture_default_str();
  app.add_option("--threads", global.threads, "Worker threads (0: all cores)")
      ->envname("PLF_THREADS");

  SplitArgs split_args;
  CLI::App* split = app.add_subcommand("split", "Move seeded random Train images to Val");
  split->add_option("--manifest", split_args.manifest, "Manifest or ground-truth JSON")
      ->required()
      ->check(CLI::ExistingFile);
  split->add_option("--val-count", split_args.val_count, "Images to move to Val")
      ->capture_default_str();
  split->add_option("--seed", split_args.seed, "Sampling seed")->capture_default_str();

  PseudolabelArgs pl_args;
  CLI::App* pl = app.add_subcommand("pseudolabel", "Filter teacher detections into YOLO labels");
  pl->add_option("--predictions", pl_args.predictions, "Teacher predictions JSON")
      ->required()
      ->check(CLI::ExistingFile);
  pl->add_option("--manifest", pl_args.manifest, "Manifest or ground-truth JSON")
      ->required()
      ->check(CLI::ExistingFile);
  pl->add_option("--labels-dir", pl_args.labels_dir, "Output directory for label files")
      ->required();
  pl->add_option("--split", pl_args.splits, "Only label images of these splits");
  add_filter_options(pl, pl_args.filter);

  EvalArgs ev_args;
  CLI::App* ev = app.add_subcommand("eval", "COCO evaluation of predictions");
  ev->add_option("--predictions", ev_args.predictions, "Predictions JSON")
      ->required()
      ->check(CLI::ExistingFile);
  ev->add_option("--ground-truth", ev_args.ground_truth, "Ground-truth JSON")
      ->required()
      ->check(CLI::ExistingFile);
  ev->add_option("--manifest", ev_args.manifest, "Manifest sidecar overriding image records")
      ->check(CLI::ExistingFile);
  ev->add_option("--groups", ev_args.groups, "Scenario group mapping JSON")
      ->check(CLI::ExistingFile);
  ev->add_option("--split", ev_args.splits, "Only evaluate images of these splits");
  ev->add_flag("--fidelity", ev_args.fidelity,
               "Treat predictions as pseudo-labels: apply the confidence filter first");
  ev->add_option("--max-dets", ev_args.max_dets, "Detections kept per image")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  ev->add_flag("--ap-small", ev_args.ap_small, "Also report AP for small objects");
  add_filter_options(ev, ev_args.filter);

  BenchArgs bench_args;
  CLI::App* bench = app.add_subcommand("bench", "Summarize latency logs");
  bench->add_option("--log", bench_args.log, "Latency JSON Lines file")
      ->required()
      ->check(CLI::ExistingFile);
  bench->add_option("--compare", bench_args.compare, "Report the speedup of model A over B")
      ->expected(2);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == static_cast<int>(CLI::ExitCodes::Success)) {
      app.exit(e, out, err);
      return kExitOk;
    }
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  global.format = format_name == "json" ? Format::Json : Format::Table;
  const Output output(global, out);
  try {
    if (*split) return cmd_split(split_args, output, err);
    if (*pl) return cmd_pseudolabel(pl_args, output);
    if (*ev) return cmd_eval(ev_args, global, output, err);
    if (*bench) return cmd_bench(bench_args, output, err);
  } catch (const EmptyInput& e) {
    err << "error: " << e.what() << "\n";
    return kExitEmpty;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace plf::cli
