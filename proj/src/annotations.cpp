// Copyright 2026 The plfkit Authors.
// SPDX-License-Identifier: Apache-2.0

#include "plf/annotations.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <limits>
#include <random>
#include <sstream>
#include <unordered_set>

namespace plf {

namespace fs = std::filesystem;
using nlohmann::json;

std::string_view to_string(Split s) {
  switch (s) {
    case Split::Train: return "train";
    case Split::Val: return "val";
    case Split::Test: return "test";
  }
  return "test";
}

std::string_view to_string(Phase p) {
  switch (p) {
    case Phase::Gestation: return "gestation";
    case Phase::Farrowing: return "farrowing";
    case Phase::Nursery: return "nursery";
    case Phase::Estrus: return "estrus";
    case Phase::Growth: return "growth";
  }
  return "growth";
}

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

}  // namespace

std::optional<Split> parse_split(std::string_view name) {
  const std::string n = lower(name);
  if (n == "train") return Split::Train;
  if (n == "val" || n == "valid" || n == "validation") return Split::Val;
  if (n == "test") return Split::Test;
  return std::nullopt;
}

std::optional<Phase> parse_phase(std::string_view name) {
  const std::string n = lower(name);
  for (Phase p : {Phase::Gestation, Phase::Farrowing, Phase::Nursery,
                  Phase::Estrus, Phase::Growth})
    if (n == to_string(p)) return p;
  return std::nullopt;
}

// -- DatasetManifest --------------------------------------------------------

DatasetManifest::DatasetManifest(std::vector<ImageRecord> images,
                                 std::vector<Category> categories)
    : images_(std::move(images)), categories_(std::move(categories)) {
  index_.reserve(images_.size());
  for (std::size_t i = 0; i < images_.size(); ++i) {
    const ImageRecord& img = images_[i];
    if (img.width <= 0 || img.height <= 0)
      throw RangeError(fmt::format("image {}: width and height must be positive",
                                   img.image_id));
    if (img.group && (*img.group < kMinGroup || *img.group > kMaxGroup))
      throw RangeError(fmt::format("image {}: group {} outside {}..{}",
                                   img.image_id, *img.group, kMinGroup, kMaxGroup));
    if (!index_.emplace(img.image_id, i).second)
      throw IntegrityError(fmt::format("duplicate image id {}", img.image_id));
  }
  std::unordered_set<CategoryId> seen;
  for (const Category& c : categories_)
    if (!seen.insert(c.id).second)
      throw IntegrityError(fmt::format("duplicate category id {}", c.id));
}

const ImageRecord* DatasetManifest::find(ImageId id) const {
  const auto it = index_.find(id);
  return it == index_.end() ? nullptr : &images_[it->second];
}

std::size_t DatasetManifest::count(Split s) const {
  return static_cast<std::size_t>(std::count_if(
      images_.begin(), images_.end(),
      [s](const ImageRecord& r) { return r.split == s; }));
}

std::optional<int> DatasetManifest::class_index(CategoryId id) const {
  if (categories_.empty()) {
    if (id < 0 || id > std::numeric_limits<int>::max()) return std::nullopt;
    return static_cast<int>(id);
  }
  for (std::size_t i = 0; i < categories_.size(); ++i)
    if (categories_[i].id == id) return static_cast<int>(i);
  return std::nullopt;
}

std::optional<CategoryId> DatasetManifest::category_for_class(int class_index) const {
  if (class_index < 0) return std::nullopt;
  if (categories_.empty()) return class_index;
  if (static_cast<std::size_t>(class_index) >= categories_.size())
    return std::nullopt;
  return categories_[static_cast<std::size_t>(class_index)].id;
}

DatasetManifest DatasetManifest::subset(std::span<const ImageId> ids) const {
  const std::unordered_set<ImageId> keep(ids.begin(), ids.end());
  std::vector<ImageRecord> images;
  for (const ImageRecord& r : images_)
    if (keep.contains(r.image_id)) images.push_back(r);
  return DatasetManifest(std::move(images), categories_);
}

// -- JSON parsing -----------------------------------------------------------

namespace {

std::size_t line_of_offset(std::string_view text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<std::size_t>(
                 std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

json parse_json_text(std::string_view text, std::string_view source) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const std::size_t byte = e.byte == 0 ? 0 : e.byte - 1;
    throw ParseError(fmt::format("malformed JSON: {}", e.what()),
                     std::string(source), line_of_offset(text, byte));
  }
}

// Field accessors raising ParseError with a JSON-path style location.
class Reader {
 public:
  explicit Reader(std::string_view source) : source_(source) {}

  [[noreturn]] void fail(const std::string& where, const std::string& what) const {
    throw ParseError(fmt::format("{}: {}", where, what), source_);
  }

  const json& field(const json& obj, const char* key, const std::string& where) const {
    if (!obj.is_object()) fail(where, "expected an object");
    const auto it = obj.find(key);
    if (it == obj.end()) fail(where, fmt::format("missing field '{}'", key));
    return *it;
  }

  std::int64_t integer(const json& v, const std::string& where) const {
    if (v.is_number_integer()) return v.get<std::int64_t>();
    if (v.is_number_float()) {
      const double d = v.get<double>();
      if (std::isfinite(d) && d == std::floor(d) && std::abs(d) < 9.0e15)
        return static_cast<std::int64_t>(d);
    }
    fail(where, "expected an integer");
  }

  double number(const json& v, const std::string& where) const {
    if (!v.is_number()) fail(where, "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) fail(where, "expected a finite number");
    return d;
  }

  std::string string(const json& v, const std::string& where) const {
    if (!v.is_string()) fail(where, "expected a string");
    return v.get<std::string>();
  }

  BBox bbox(const json& v, const std::string& where) const {
    if (!v.is_array() || v.size() != 4)
      fail(where, "expected [x, y, w, h]");
    return {number(v[0], where + "[0]"), number(v[1], where + "[1]"),
            number(v[2], where + "[2]"), number(v[3], where + "[3]")};
  }

  const std::string& source() const { return source_; }

 private:
  std::string source_;
};

std::vector<Category> read_categories(const json& root, const Reader& rd) {
  std::vector<Category> out;
  const auto it = root.find("categories");
  if (it == root.end()) return out;
  if (!it->is_array()) rd.fail("categories", "expected an array");
  for (std::size_t i = 0; i < it->size(); ++i) {
    const std::string where = fmt::format("categories[{}]", i);
    const json& c = (*it)[i];
    Category cat;
    cat.id = rd.integer(rd.field(c, "id", where), where + ".id");
    if (const auto n = c.find("name"); n != c.end())
      cat.name = rd.string(*n, where + ".name");
    out.push_back(std::move(cat));
  }
  return out;
}

DatasetManifest read_manifest(const json& root, const Reader& rd) {
  if (!root.is_object()) rd.fail("<root>", "expected an object");
  const json& images = rd.field(root, "images", "<root>");
  if (!images.is_array()) rd.fail("images", "expected an array");
  std::vector<ImageRecord> records;
  records.reserve(images.size());
  for (std::size_t i = 0; i < images.size(); ++i) {
    const std::string where = fmt::format("images[{}]", i);
    const json& im = images[i];
    ImageRecord r;
    r.image_id = rd.integer(rd.field(im, "id", where), where + ".id");
    r.file_name = rd.string(rd.field(im, "file_name", where), where + ".file_name");
    const std::int64_t w = rd.integer(rd.field(im, "width", where), where + ".width");
    const std::int64_t h = rd.integer(rd.field(im, "height", where), where + ".height");
    if (w <= 0 || h <= 0 || w > std::numeric_limits<int>::max() ||
        h > std::numeric_limits<int>::max())
      rd.fail(where, "width and height must be positive");
    r.width = static_cast<int>(w);
    r.height = static_cast<int>(h);
    if (const auto s = im.find("split"); s != im.end() && !s->is_null()) {
      const auto split = parse_split(rd.string(*s, where + ".split"));
      if (!split) rd.fail(where + ".split", "expected train, val or test");
      r.split = *split;
    }
    if (const auto g = im.find("group"); g != im.end() && !g->is_null()) {
      const std::int64_t group = rd.integer(*g, where + ".group");
      if (group < kMinGroup || group > kMaxGroup)
        rd.fail(where + ".group", fmt::format("group {} outside {}..{}", group,
                                              kMinGroup, kMaxGroup));
      r.group = static_cast<int>(group);
    }
    if (const auto p = im.find("phase"); p != im.end() && !p->is_null()) {
      const auto phase = parse_phase(rd.string(*p, where + ".phase"));
      if (!phase) rd.fail(where + ".phase", "unknown production phase");
      r.phase = *phase;
    }
    records.push_back(std::move(r));
  }
  try {
    return DatasetManifest(std::move(records), read_categories(root, rd));
  } catch (const IntegrityError& e) {
    throw IntegrityError(fmt::format("{}: {}", rd.source(), e.what()));
  }
}

}  // namespace

std::string read_text_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot open '{}'", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError(fmt::format("failed reading '{}'", path.string()));
  return ss.str();
}

void write_text_file(const fs::path& path, std::string_view text) {
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(fmt::format("cannot write '{}'", path.string()));
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw IoError(fmt::format("failed writing '{}'", path.string()));
}

DatasetManifest parse_manifest_json(std::string_view text, std::string_view source) {
  const Reader rd(source);
  return read_manifest(parse_json_text(text, source), rd);
}

DatasetManifest load_manifest(const fs::path& path) {
  return parse_manifest_json(read_text_file(path), path.string());
}

GroundTruth parse_ground_truth_json(std::string_view text, std::string_view source) {
  const Reader rd(source);
  const json root = parse_json_text(text, source);
  GroundTruth gt{read_manifest(root, rd), {}};

  const auto anns = root.find("annotations");
  if (anns == root.end()) return gt;
  if (!anns->is_array()) rd.fail("annotations", "expected an array");
  gt.annotations.reserve(anns->size());
  std::unordered_set<std::int64_t> ids;
  for (std::size_t i = 0; i < anns->size(); ++i) {
    const std::string where = fmt::format("annotations[{}]", i);
    const json& a = (*anns)[i];
    GroundTruthAnn ann;
    ann.ann_id = rd.integer(rd.field(a, "id", where), where + ".id");
    ann.image_id = rd.integer(rd.field(a, "image_id", where), where + ".image_id");
    ann.category_id =
        rd.integer(rd.field(a, "category_id", where), where + ".category_id");
    const BBox raw = rd.bbox(rd.field(a, "bbox", where), where + ".bbox");
    if (!ids.insert(ann.ann_id).second)
      throw IntegrityError(fmt::format("{}: {}: duplicate annotation id {}",
                                       source, where, ann.ann_id));
    const ImageRecord* img = gt.manifest.find(ann.image_id);
    if (img == nullptr)
      throw IntegrityError(fmt::format("{}: {}: unknown image_id {}", source,
                                       where, ann.image_id));
    ann.bbox = clamp_to_image(raw, static_cast<double>(img->width),
                              static_cast<double>(img->height));
    if (!ann.bbox.valid())
      rd.fail(where + ".bbox", "box has no area inside its image");
    gt.annotations.push_back(ann);
  }
  return gt;
}

GroundTruth parse_ground_truth(const fs::path& path) {
  return parse_ground_truth_json(read_text_file(path), path.string());
}

std::vector<Detection> parse_predictions_json(std::string_view text,
                                              std::string_view source) {
  const Reader rd(source);
  const json root = parse_json_text(text, source);
  if (!root.is_array()) rd.fail("<root>", "expected an array of detections");
  std::vector<Detection> out;
  out.reserve(root.size());
  for (std::size_t i = 0; i < root.size(); ++i) {
    const std::string where = fmt::format("[{}]", i);
    const json& d = root[i];
    Detection det;
    det.image_id = rd.integer(rd.field(d, "image_id", where), where + ".image_id");
    det.category_id =
        rd.integer(rd.field(d, "category_id", where), where + ".category_id");
    det.score = rd.number(rd.field(d, "score", where), where + ".score");
    if (det.score < 0.0 || det.score > 1.0)
      throw RangeError(fmt::format("{}: {}.score: {} outside [0, 1]", source,
                                   where, det.score));
    const BBox raw = rd.bbox(rd.field(d, "bbox", where), where + ".bbox");
    // Image sizes are unknown here; only the origin side can be clamped.
    det.bbox = raw;
    if (raw.x_min < 0.0 || raw.y_min < 0.0) {
      const Vector2<double> lo = raw.min_corner().cwiseMax(0.0);
      const Vector2<double> ext = (raw.max_corner() - lo).cwiseMax(0.0);
      det.bbox = {lo.x(), lo.y(), ext.x(), ext.y()};
    }
    if (!det.bbox.valid()) rd.fail(where + ".bbox", "box has no positive area");
    out.push_back(det);
  }
  return out;
}

std::vector<Detection> parse_predictions(const fs::path& path) {
  return parse_predictions_json(read_text_file(path), path.string());
}

// -- JSON writing -----------------------------------------------------------

namespace {

json bbox_json(const BBox& b) {
  return json::array({b.x_min, b.y_min, b.width, b.height});
}

json images_json(const DatasetManifest& m, bool with_sidecar) {
  json images = json::array();
  for (const ImageRecord& r : m.images()) {
    json im = {{"id", r.image_id},
               {"file_name", r.file_name},
               {"width", r.width},
               {"height", r.height}};
    if (with_sidecar) {
      im["split"] = std::string(to_string(r.split));
      if (r.group) im["group"] = *r.group;
      if (r.phase) im["phase"] = std::string(to_string(*r.phase));
    }
    images.push_back(std::move(im));
  }
  return images;
}

json categories_json(const DatasetManifest& m) {
  json cats = json::array();
  for (const Category& c : m.categories())
    cats.push_back({{"id", c.id}, {"name", c.name}});
  return cats;
}

}  // namespace

std::string ground_truth_to_json(const GroundTruth& gt) {
  json anns = json::array();
  for (const GroundTruthAnn& a : gt.annotations)
    anns.push_back({{"id", a.ann_id},
                    {"image_id", a.image_id},
                    {"bbox", bbox_json(a.bbox)},
                    {"area", a.bbox.area()},
                    {"category_id", a.category_id},
                    {"iscrowd", 0}});
  const json root = {{"images", images_json(gt.manifest, true)},
                     {"annotations", std::move(anns)},
                     {"categories", categories_json(gt.manifest)}};
  return root.dump(2) + "\n";
}

std::string manifest_to_json(const DatasetManifest& manifest) {
  const json root = {{"images", images_json(manifest, true)},
                     {"categories", categories_json(manifest)}};
  return root.dump(2) + "\n";
}

std::string predictions_to_json(std::span<const Detection> dets) {
  json root = json::array();
  for (const Detection& d : dets)
    root.push_back({{"image_id", d.image_id},
                    {"bbox", bbox_json(d.bbox)},
                    {"score", d.score},
                    {"category_id", d.category_id}});
  return root.dump(2) + "\n";
}

std::vector<Detection> clamp_to_manifest(std::span<const Detection> dets,
                                         const DatasetManifest& manifest) {
  std::vector<Detection> out;
  out.reserve(dets.size());
  for (std::size_t i = 0; i < dets.size(); ++i) {
    const ImageRecord* img = manifest.find(dets[i].image_id);
    if (img == nullptr)
      throw IntegrityError(fmt::format("detection {}: unknown image_id {}", i,
                                       dets[i].image_id));
    Detection d = dets[i];
    d.bbox = clamp_to_image(d.bbox, static_cast<double>(img->width),
                            static_cast<double>(img->height));
    if (!d.bbox.valid())
      throw OutOfImage(fmt::format("detection {}: box lies outside image {}", i,
                                   d.image_id));
    out.push_back(d);
  }
  return out;
}

std::vector<Detection> restrict_to(std::span<const Detection> dets,
                                   const DatasetManifest& manifest) {
  std::vector<Detection> out;
  for (const Detection& d : dets)
    if (manifest.contains(d.image_id)) out.push_back(d);
  return out;
}

std::vector<GroundTruthAnn> restrict_to(std::span<const GroundTruthAnn> gts,
                                        const DatasetManifest& manifest) {
  std::vector<GroundTruthAnn> out;
  for (const GroundTruthAnn& g : gts)
    if (manifest.contains(g.image_id)) out.push_back(g);
  return out;
}

// -- YOLO labels ------------------------------------------------------------

bool split_selected(const SplitFilter& filter, Split s) {
  return filter.empty() || std::find(filter.begin(), filter.end(), s) != filter.end();
}

std::string format_yolo_line(const NormBox& n) {
  return fmt::format("{} {:.6f} {:.6f} {:.6f} {:.6f}\n", n.class_id, n.cx, n.cy,
                     n.w, n.h);
}

NormBox parse_yolo_line(std::string_view line, const std::string& file,
                        std::size_t line_no) {
  const auto fail = [&](const std::string& what) -> ParseError {
    return ParseError(what, file, line_no == 0 ? std::nullopt
                                               : std::optional<std::size_t>(line_no));
  };
  std::vector<std::string_view> tokens;
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
    const std::size_t start = pos;
    while (pos < line.size() && !std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
    if (pos > start) tokens.push_back(line.substr(start, pos - start));
  }
  if (tokens.size() != 5)
    throw fail(fmt::format("expected 'class cx cy w h', got {} fields", tokens.size()));

  NormBox n;
  {
    const auto t = tokens[0];
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), n.class_id);
    if (ec != std::errc{} || ptr != t.data() + t.size() || n.class_id < 0)
      throw fail(fmt::format("invalid class id '{}'", t));
  }
  double* fields[] = {&n.cx, &n.cy, &n.w, &n.h};
  for (std::size_t i = 0; i < 4; ++i) {
    const auto t = tokens[i + 1];
    // std::from_chars for double is unavailable on some toolchains.
    std::string buf(t);
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(buf.c_str(), &end);
    if (end != buf.c_str() + buf.size() || errno == ERANGE || !std::isfinite(v))
      throw fail(fmt::format("invalid number '{}'", t));
    *fields[i] = v;
  }
  if (!norm_box_valid(n)) throw fail("normalized box outside [0, 1]");
  if (!(n.w > 0.0) || !(n.h > 0.0)) throw fail("box has zero size");
  return n;
}

fs::path label_file_name(const ImageRecord& image) {
  return fs::path(image.file_name).stem().string() + ".txt";
}

namespace {

struct LabelBox {
  ImageId image_id;
  BBox bbox;
  CategoryId category_id;
};

std::size_t write_labels(std::span<const LabelBox> boxes,
                         const DatasetManifest& manifest, const fs::path& out_dir,
                         const SplitFilter& splits) {
  std::unordered_map<ImageId, std::string> contents;
  for (const LabelBox& b : boxes) {
    const ImageRecord* img = manifest.find(b.image_id);
    if (img == nullptr)
      throw IntegrityError(fmt::format("unknown image_id {}", b.image_id));
    if (!split_selected(splits, img->split)) continue;
    const auto cls = manifest.class_index(b.category_id);
    if (!cls)
      throw IntegrityError(fmt::format("image {}: category {} not in manifest",
                                       b.image_id, b.category_id));
    NormBox n;
    try {
      n = to_norm(b.bbox, *cls, static_cast<double>(img->width),
                  static_cast<double>(img->height));
    } catch (const OutOfImage&) {
      throw OutOfImage(fmt::format("image {}: box [{}, {}, {}, {}] lies outside the image",
                                   b.image_id, b.bbox.x_min, b.bbox.y_min,
                                   b.bbox.width, b.bbox.height));
    }
    contents[b.image_id] += format_yolo_line(n);
  }

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec)
    throw IoError(fmt::format("cannot create '{}': {}", out_dir.string(), ec.message()));

  std::unordered_set<std::string> names;
  std::size_t written = 0;
  for (const ImageRecord& img : manifest.images()) {
    if (!split_selected(splits, img.split)) continue;
    const fs::path name = label_file_name(img);
    if (!names.insert(name.string()).second)
      throw IntegrityError(fmt::format("label file name '{}' used by two images",
                                       name.string()));
    const auto it = contents.find(img.image_id);
    write_text_file(out_dir / name, it == contents.end() ? std::string_view{}
                                                         : std::string_view(it->second));
    ++written;
  }
  return written;
}

}  // namespace

std::size_t write_yolo_labels(std::span<const Detection> dets,
                              const DatasetManifest& manifest,
                              const fs::path& out_dir, const SplitFilter& splits) {
  std::vector<LabelBox> boxes;
  boxes.reserve(dets.size());
  for (const Detection& d : dets) boxes.push_back({d.image_id, d.bbox, d.category_id});
  return write_labels(boxes, manifest, out_dir, splits);
}

std::size_t write_yolo_labels(std::span<const GroundTruthAnn> gts,
                              const DatasetManifest& manifest,
                              const fs::path& out_dir, const SplitFilter& splits) {
  std::vector<LabelBox> boxes;
  boxes.reserve(gts.size());
  for (const GroundTruthAnn& g : gts) boxes.push_back({g.image_id, g.bbox, g.category_id});
  return write_labels(boxes, manifest, out_dir, splits);
}

std::vector<GroundTruthAnn> read_yolo_labels(const fs::path& dir,
                                             const DatasetManifest& manifest,
                                             const SplitFilter& splits) {
  std::vector<GroundTruthAnn> out;
  std::int64_t next_id = 1;
  for (const ImageRecord& img : manifest.images()) {
    if (!split_selected(splits, img.split)) continue;
    const fs::path file = dir / label_file_name(img);
    const std::string text = read_text_file(file);
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
      std::size_t end = text.find('\n', pos);
      if (end == std::string::npos) end = text.size();
      std::string_view line(text.data() + pos, end - pos);
      pos = end + 1;
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      if (line.find_first_not_of(" \t") == std::string_view::npos) continue;
      const NormBox n = parse_yolo_line(line, file.string(), line_no);
      const auto category = manifest.category_for_class(n.class_id);
      if (!category)
        throw ParseError(fmt::format("class {} has no category in the manifest",
                                     n.class_id),
                         file.string(), line_no);
      out.push_back({next_id++, img.image_id,
                     from_norm(n, static_cast<double>(img.width),
                               static_cast<double>(img.height)),
                     *category});
    }
  }
  return out;
}

// -- splits -----------------------------------------------------------------

namespace {

std::uint64_t bounded_draw(std::mt19937_64& engine, std::uint64_t range) {
  const std::uint64_t threshold = (0 - range) % range;
  for (;;) {
    const std::uint64_t x = engine();
    if (x >= threshold) return x % range;
  }
}

}  // namespace

DatasetManifest split_dataset(const DatasetManifest& manifest,
                              std::size_t val_count, std::uint64_t seed) {
  std::vector<ImageId> train;
  for (const ImageRecord& r : manifest.images())
    if (r.split == Split::Train) train.push_back(r.image_id);
  if (val_count > train.size())
    throw InsufficientImages(fmt::format(
        "requested {} validation images but only {} training images exist",
        val_count, train.size()));
  if (val_count == 0) return manifest;

  std::sort(train.begin(), train.end());
  std::mt19937_64 engine(seed);
  for (std::size_t i = 0; i < val_count; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(bounded_draw(
                                  engine, static_cast<std::uint64_t>(train.size() - i)));
    std::swap(train[i], train[j]);
  }
  const std::unordered_set<ImageId> chosen(train.begin(),
                                           train.begin() + static_cast<std::ptrdiff_t>(val_count));

  std::vector<ImageRecord> images(manifest.images().begin(), manifest.images().end());
  for (ImageRecord& r : images)
    if (chosen.contains(r.image_id)) r.split = Split::Val;
  return DatasetManifest(std::move(images),
                         {manifest.categories().begin(), manifest.categories().end()});
}

}  // namespace plf
