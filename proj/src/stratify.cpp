// Copyright 2026 The plfkit Authors.
// SPDX-License-Identifier: Apache-2.0

#include "plf/stratify.hpp"

#include <fmt/format.h>

#include <charconv>
#include <json.hpp>

#include "parallel.hpp"

namespace plf {

using nlohmann::json;

std::optional<int> GroupAssignment::group_of(ImageId id) const {
  const auto it = assignments.find(id);
  if (it == assignments.end()) return std::nullopt;
  return it->second;
}

std::vector<ImageId> GroupAssignment::images_in(int group) const {
  std::vector<ImageId> out;
  for (const auto& [image, g] : assignments)
    if (g == group) out.push_back(image);
  return out;
}

std::vector<int> GroupAssignment::group_ids() const {
  std::vector<int> out;
  for (const auto& [image, g] : assignments) out.push_back(g);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::string GroupAssignment::display_name(int group) const {
  const auto it = groups.find(group);
  if (it != groups.end() && !it->second.name.empty()) return it->second.name;
  return fmt::format("Group {}", group);
}

namespace {

void check_group(int g, std::string_view where, std::string_view source) {
  if (g < kMinGroup || g > kMaxGroup)
    throw IntegrityError(fmt::format("{}: {}: group {} outside {}..{}", source, where,
                                     g, kMinGroup, kMaxGroup));
}

int as_group(const json& v, std::string_view where, std::string_view source) {
  if (!v.is_number_integer())
    throw ParseError(fmt::format("{}: expected an integer group id", where),
                     std::string(source));
  const auto g = v.get<std::int64_t>();
  if (g < kMinGroup || g > kMaxGroup)
    throw IntegrityError(fmt::format("{}: {}: group {} outside {}..{}", source, where,
                                     g, kMinGroup, kMaxGroup));
  return static_cast<int>(g);
}

}  // namespace

GroupAssignment parse_groups_json(std::string_view text,
                                  const DatasetManifest& manifest,
                                  std::string_view source) {
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(fmt::format("malformed JSON: {}", e.what()), std::string(source));
  }
  if (!root.is_object())
    throw ParseError("expected an object with 'groups' and 'assignments'",
                     std::string(source));

  GroupAssignment out;
  if (const auto it = root.find("groups"); it != root.end()) {
    if (!it->is_array()) throw ParseError("groups: expected an array", std::string(source));
    for (std::size_t i = 0; i < it->size(); ++i) {
      const std::string where = fmt::format("groups[{}]", i);
      const json& g = (*it)[i];
      if (!g.is_object() || !g.contains("id"))
        throw ParseError(where + ": expected an object with an 'id'", std::string(source));
      GroupInfo info;
      info.id = as_group(g["id"], where + ".id", source);
      if (g.contains("name") && g["name"].is_string()) info.name = g["name"].get<std::string>();
      if (g.contains("description") && g["description"].is_string())
        info.description = g["description"].get<std::string>();
      if (g.contains("phase") && g["phase"].is_string()) {
        info.phase = parse_phase(g["phase"].get<std::string>());
        if (!info.phase)
          throw ParseError(where + ".phase: unknown production phase", std::string(source));
      }
      if (!out.groups.emplace(info.id, info).second)
        throw IntegrityError(fmt::format("{}: {}: duplicate group {}", source, where, info.id));
    }
  }

  const auto it = root.find("assignments");
  if (it == root.end() || !it->is_object())
    throw ParseError("assignments: expected an object", std::string(source));
  for (const auto& [key, value] : it->items()) {
    const std::string where = fmt::format("assignments[\"{}\"]", key);
    ImageId id = 0;
    const auto [ptr, ec] = std::from_chars(key.data(), key.data() + key.size(), id);
    if (ec != std::errc{} || ptr != key.data() + key.size())
      throw ParseError(where + ": key is not an image id", std::string(source));
    const int g = as_group(value, where, source);
    check_group(g, where, source);
    if (!manifest.contains(id))
      throw IntegrityError(fmt::format("{}: {}: unknown image_id {}", source, where, id));
    out.assignments.emplace(id, g);
  }
  return out;
}

GroupAssignment load_groups(const std::filesystem::path& path,
                            const DatasetManifest& manifest) {
  return parse_groups_json(read_text_file(path), manifest, path.string());
}

GroupAssignment groups_from_manifest(const DatasetManifest& manifest) {
  GroupAssignment out;
  for (const ImageRecord& r : manifest.images()) {
    if (!r.group) continue;
    out.assignments.emplace(r.image_id, *r.group);
    auto& info = out.groups[*r.group];
    info.id = *r.group;
    if (!info.phase) info.phase = r.phase;
  }
  return out;
}

std::string groups_to_json(const GroupAssignment& assignment) {
  json groups = json::array();
  for (const auto& [id, info] : assignment.groups) {
    json g = {{"id", id}, {"name", info.name}};
    if (info.phase) g["phase"] = std::string(to_string(*info.phase));
    if (!info.description.empty()) g["description"] = info.description;
    groups.push_back(std::move(g));
  }
  json map = json::object();
  for (const auto& [image, g] : assignment.assignments) map[std::to_string(image)] = g;
  return json{{"groups", std::move(groups)}, {"assignments", std::move(map)}}.dump(2) + "\n";
}

StratifiedReport evaluate_per_group(std::span<const Detection> dets,
                                    std::span<const GroundTruthAnn> gts,
                                    const DatasetManifest& manifest,
                                    const GroupAssignment& assignment,
                                    const EvalConfig& cfg) {
  StratifiedReport report;
  for (const ImageRecord& r : manifest.images())
    if (!assignment.group_of(r.image_id)) ++report.unassigned_images;

  const std::vector<int> ids = assignment.group_ids();
  report.groups.resize(ids.size());
  EvalConfig inner = cfg;
  inner.threads = 1;
  detail::parallel_for(ids.size(), cfg.threads, [&](std::size_t i) {
    GroupResult& out = report.groups[i];
    out.group = ids[i];
    out.name = assignment.display_name(ids[i]);
    try {
      const DatasetManifest sub = manifest.subset(assignment.images_in(ids[i]));
      out.images = sub.size();
      out.result = evaluate(restrict_to(dets, sub), restrict_to(gts, sub), sub, inner);
    } catch (const Error& e) {
      out.error = e.what();
    }
  });
  return report;
}

}  // namespace plf
