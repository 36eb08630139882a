#pragma once

#include <chrono>
#include <ctime>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "agentsafe/dataset/images.hpp"

namespace agentsafe {

inline constexpr const char* kManifestFileName = "manifest.json";

struct ReviewItem {
  std::string scenario_id;
  PlanVariant variant = PlanVariant::unsafe;
  ClockTime hour;
  std::string activity;
  std::optional<double> best_score;
};

struct Manifest {
  struct Entry {
    std::string scenario_id;
    std::string category_id;
    std::string subcategory_id;
    std::string file;
    int flagged_slots = 0;
  };
  std::vector<Entry> scenarios;
  std::vector<ReviewItem> review;
  std::map<std::string, int> category_counts;

  ordered_json to_json() const {
    ordered_json j;
    j["format"] = "agentsafe.manifest/1";
    j["scenario_count"] = scenarios.size();
    ordered_json list = ordered_json::array();
    for (const auto& e : scenarios) {
      list.push_back(ordered_json{{"scenario_id", e.scenario_id},
                                  {"category_id", e.category_id},
                                  {"subcategory_id", e.subcategory_id},
                                  {"file", e.file},
                                  {"flagged_slots", e.flagged_slots}});
    }
    j["scenarios"] = std::move(list);
    ordered_json rev = ordered_json::array();
    for (const auto& r : review) {
      rev.push_back(ordered_json{{"scenario_id", r.scenario_id},
                                 {"variant", to_string(r.variant)},
                                 {"hour", r.hour.str()},
                                 {"activity", r.activity},
                                 {"best_score", r.best_score ? ordered_json(*r.best_score) : ordered_json(nullptr)}});
    }
    j["review"] = std::move(rev);
    ordered_json counts = ordered_json::object();
    for (const auto& [cat, n] : category_counts) counts[cat] = n;
    j["category_counts"] = std::move(counts);
    return j;
  }

  static Manifest from_json(const json& j) {
    Manifest m;
    try {
      for (const auto& e : j.at("scenarios"))
        m.scenarios.push_back({e.at("scenario_id"), e.at("category_id"), e.at("subcategory_id"), e.at("file"),
                               e.value("flagged_slots", 0)});
      for (const auto& r : j.at("review")) {
        ReviewItem item;
        item.scenario_id = r.at("scenario_id");
        item.variant = r.at("variant").get<std::string>() == "safe" ? PlanVariant::safe : PlanVariant::unsafe;
        item.hour = ClockTime::parse(r.at("hour").get<std::string>());
        item.activity = r.at("activity");
        if (!r.at("best_score").is_null()) item.best_score = r.at("best_score").get<double>();
        m.review.push_back(std::move(item));
      }
      for (const auto& [cat, n] : j.at("category_counts").items()) m.category_counts[cat] = n.get<int>();
    } catch (const json::exception& e) {
      throw Error(ErrorCode::ValidationError, std::string("manifest: ") + e.what());
    }
    return m;
  }
};

inline std::string scenario_file_name(const ScenarioRecord& r) { return r.scenario_id + ".json"; }

/// Review manifest over validated scenarios; written to `out_path` when non-empty.
inline Manifest build_manifest(const std::vector<ScenarioRecord>& scenarios, const std::filesystem::path& out_path = {}) {
  Manifest m;
  for (const auto& r : scenarios) {
    validate_scenario(r);
    m.scenarios.push_back({r.scenario_id, r.category_id, r.subcategory_id, scenario_file_name(r), r.flagged_slots()});
    ++m.category_counts[r.category_id];
    for (const auto* plan : {&r.unsafe_plan, &r.safe_plan}) {
      for (const auto& s : plan->slots) {
        if (s.review_flag) m.review.push_back({r.scenario_id, plan->variant, s.hour, s.activity, s.alignment_score});
      }
    }
  }
  if (!out_path.empty()) write_file(out_path, m.to_json().dump(2) + "\n");
  return m;
}

inline std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct DatasetBuildOptions {
  int count = 10;
  TimeWindow window;
  AlignmentPolicy policy;
  std::string generator_id = "scripted";
  std::string created_at;  // empty: current UTC time
};

/// Runs the pipeline for `count` scenarios, cycling through subcategories in
/// taxonomy order, and writes one file per scenario plus the manifest into out_dir.
inline std::vector<ScenarioRecord> build_dataset(const Taxonomy& taxonomy, const DatasetBuildOptions& options,
                                                 Gateway& gateway, ImageSearch& search, Similarity& similarity,
                                                 const std::filesystem::path& out_dir) {
  if (taxonomy.subcategories.empty()) throw Error(ErrorCode::TaxonomyMiss, "taxonomy has no subcategories");
  const std::string created = options.created_at.empty() ? utc_timestamp() : options.created_at;
  std::vector<ScenarioRecord> records;
  for (int i = 0; i < options.count; ++i) {
    const auto& sub = taxonomy.subcategories[static_cast<std::size_t>(i) % taxonomy.subcategories.size()];
    ScenarioRecord r;
    char id[32];
    std::snprintf(id, sizeof id, "scn-%04d", i + 1);
    r.scenario_id = id;
    r.category_id = sub.category_id;
    r.subcategory_id = sub.id;
    r.description = generate_scenario(taxonomy, sub.category_id, sub.id, gateway);
    auto [unsafe_plan, safe_plan] = expand_plans(r.description, options.window, gateway);
    for (auto* plan : {&unsafe_plan, &safe_plan}) {
      for (auto& slot : plan->slots) slot = attach_image(slot, options.policy, search, similarity).slot;
    }
    r.unsafe_plan = std::move(unsafe_plan);
    r.safe_plan = std::move(safe_plan);
    r.provenance = {options.generator_id, created, kPipelineVersion};
    validate_scenario(r);
    save_scenario(r, out_dir / scenario_file_name(r));
    records.push_back(std::move(r));
  }
  build_manifest(records, out_dir / kManifestFileName);
  return records;
}

struct DatasetValidation {
  std::vector<std::string> errors;
  std::size_t scenarios = 0;
  std::map<std::string, int> category_counts;
  bool ok() const { return errors.empty(); }
};

/// Checks every scenario file against the type invariants and the manifest
/// against a recount of the records.
inline DatasetValidation validate_dataset(const std::filesystem::path& dir, const Taxonomy* taxonomy = nullptr) {
  DatasetValidation v;
  std::vector<ScenarioRecord> records;
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.path().extension() == ".json" && entry.path().filename() != kManifestFileName) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    try {
      auto r = load_scenario(f);
      validate_scenario(r);
      if (taxonomy) {
        const auto* sub = taxonomy->subcategory(r.subcategory_id);
        if (!taxonomy->category(r.category_id) || !sub || sub->category_id != r.category_id)
          throw Error(ErrorCode::ValidationError, "scenario " + r.scenario_id + ": taxonomy-reference");
      }
      records.push_back(std::move(r));
    } catch (const Error& e) {
      v.errors.push_back(f.filename().string() + ": " + e.what());
    }
  }
  v.scenarios = records.size();
  for (const auto& r : records) ++v.category_counts[r.category_id];

  const auto manifest_path = dir / kManifestFileName;
  if (!std::filesystem::exists(manifest_path)) {
    v.errors.push_back("manifest.json missing");
    return v;
  }
  try {
    const Manifest m = Manifest::from_json(load_json(manifest_path, ErrorCode::ValidationError));
    const Manifest recount = build_manifest(records);
    if (m.category_counts != recount.category_counts) v.errors.push_back("manifest category counts differ from recount");
    if (m.scenarios.size() != recount.scenarios.size()) v.errors.push_back("manifest scenario list differs from files");
    if (m.review.size() != recount.review.size()) v.errors.push_back("manifest review section differs from flagged slots");
  } catch (const Error& e) {
    v.errors.push_back(e.what());
  }
  return v;
}

}  // namespace agentsafe
