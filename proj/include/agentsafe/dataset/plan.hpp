#pragma once

#include <algorithm>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "agentsafe/core/clock.hpp"
#include "agentsafe/core/error.hpp"
#include "agentsafe/core/json_io.hpp"

namespace agentsafe {

enum class SafetyState { unsafe, safe, neutral };
enum class PlanVariant { unsafe, safe };

inline std::string to_string(SafetyState s) {
  switch (s) {
    case SafetyState::unsafe: return "unsafe";
    case SafetyState::safe: return "safe";
    case SafetyState::neutral: return "neutral";
  }
  return "?";
}

inline SafetyState parse_safety_state(std::string_view s) {
  if (s == "unsafe") return SafetyState::unsafe;
  if (s == "safe") return SafetyState::safe;
  if (s == "neutral") return SafetyState::neutral;
  throw Error(ErrorCode::ValidationError, "unknown safety state '" + std::string(s) + "'");
}

inline std::string to_string(PlanVariant v) { return v == PlanVariant::unsafe ? "unsafe" : "safe"; }

struct PlanSlot {
  ClockTime hour;
  std::string activity;
  std::optional<std::string> image_ref;
  // Set whenever an image was searched for: the accepted score, or the best
  // attempt when the slot was flagged for review.
  std::optional<double> alignment_score;
  SafetyState state = SafetyState::unsafe;
  bool review_flag = false;
};

struct HourlyPlan {
  std::vector<PlanSlot> slots;
  TimeWindow window;
  PlanVariant variant = PlanVariant::unsafe;

  std::vector<ClockTime> hours() const {
    std::vector<ClockTime> h;
    for (const auto& s : slots) h.push_back(s.hour);
    return h;
  }

  PlanSlot* find(ClockTime hour) {
    for (auto& s : slots)
      if (s.hour == hour) return &s;
    return nullptr;
  }
  const PlanSlot* find(ClockTime hour) const {
    for (const auto& s : slots)
      if (s.hour == hour) return &s;
    return nullptr;
  }

  int count(SafetyState st) const {
    return static_cast<int>(std::count_if(slots.begin(), slots.end(), [&](const PlanSlot& s) { return s.state == st; }));
  }
};

struct Provenance {
  std::string generator;
  std::string created_at;
  std::string pipeline_version;
};

struct ScenarioRecord {
  std::string scenario_id;
  std::string category_id;
  std::string subcategory_id;
  std::string description;
  HourlyPlan unsafe_plan;
  HourlyPlan safe_plan;
  Provenance provenance;

  int flagged_slots() const {
    int n = 0;
    for (const auto* p : {&unsafe_plan, &safe_plan})
      for (const auto& s : p->slots) n += s.review_flag ? 1 : 0;
    return n;
  }
};

inline constexpr const char* kPipelineVersion = "1.0";

// Sorted by clock position within the window, not by raw minutes.
inline void sort_slots(HourlyPlan& plan) {
  std::stable_sort(plan.slots.begin(), plan.slots.end(), [&](const PlanSlot& a, const PlanSlot& b) {
    return plan.window.offset_of(a.hour) < plan.window.offset_of(b.hour);
  });
}

inline void validate_plan(const HourlyPlan& plan, const std::string& where) {
  auto fail = [&](const std::string& what) { return Error(ErrorCode::ValidationError, where + ": " + what); };
  const auto labels = plan.window.hour_labels();
  if (plan.slots.size() != labels.size())
    throw fail("slot-count: expected " + std::to_string(labels.size()) + " slots, found " + std::to_string(plan.slots.size()));
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto& s = plan.slots[i];
    if (s.hour != labels[i]) throw fail("slots-sorted-by-hour: slot " + std::to_string(i) + " is " + s.hour.str());
    if (s.activity.empty()) throw fail("activity-present: slot " + s.hour.str());
    if (s.image_ref && !s.alignment_score) throw fail("alignment-score-with-image: slot " + s.hour.str());
    if (s.alignment_score && !s.image_ref && !s.review_flag)
      throw fail("alignment-score-without-image-needs-review: slot " + s.hour.str());
    if (s.alignment_score && (*s.alignment_score < -1.0 || *s.alignment_score > 1.0))
      throw fail("alignment-score-range: slot " + s.hour.str());
    const SafetyState expected = plan.variant == PlanVariant::unsafe ? SafetyState::unsafe : SafetyState::safe;
    if (s.state != expected) throw fail("variant-safety-state: slot " + s.hour.str() + " is " + to_string(s.state));
  }
}

inline void validate_scenario(const ScenarioRecord& r) {
  const std::string where = "scenario " + r.scenario_id;
  if (r.scenario_id.empty()) throw Error(ErrorCode::ValidationError, "scenario-id-present");
  if (r.description.empty()) throw Error(ErrorCode::ValidationError, where + ": description-present");
  if (r.unsafe_plan.variant != PlanVariant::unsafe || r.safe_plan.variant != PlanVariant::safe)
    throw Error(ErrorCode::ValidationError, where + ": both-plans-present");
  validate_plan(r.unsafe_plan, where + " unsafe plan");
  validate_plan(r.safe_plan, where + " safe plan");
  if (r.unsafe_plan.window != r.safe_plan.window || r.unsafe_plan.hours() != r.safe_plan.hours())
    throw Error(ErrorCode::ValidationError, where + ": temporal-alignment");
}

inline ordered_json slot_to_json(const PlanSlot& s) {
  ordered_json j;
  j["hour"] = s.hour.str();
  j["activity"] = s.activity;
  j["image_ref"] = s.image_ref ? ordered_json(*s.image_ref) : ordered_json(nullptr);
  j["alignment_score"] = s.alignment_score ? ordered_json(*s.alignment_score) : ordered_json(nullptr);
  j["safety_state"] = to_string(s.state);
  j["review_flag"] = s.review_flag;
  return j;
}

inline PlanSlot slot_from_json(const json& j) {
  PlanSlot s;
  s.hour = ClockTime::parse(j.at("hour").get<std::string>());
  s.activity = j.at("activity").get<std::string>();
  if (j.contains("image_ref") && !j.at("image_ref").is_null()) s.image_ref = j.at("image_ref").get<std::string>();
  if (j.contains("alignment_score") && !j.at("alignment_score").is_null())
    s.alignment_score = j.at("alignment_score").get<double>();
  s.state = parse_safety_state(j.value("safety_state", std::string("unsafe")));
  s.review_flag = j.value("review_flag", false);
  return s;
}

/// Published scenario document; key order is part of the format.
inline ordered_json scenario_to_json(const ScenarioRecord& r) {
  ordered_json j;
  j["format"] = "agentsafe.scenario/1";
  j["scenario_id"] = r.scenario_id;
  j["category_id"] = r.category_id;
  j["subcategory_id"] = r.subcategory_id;
  j["description"] = r.description;
  j["window"] = r.unsafe_plan.window.str();
  for (const auto* plan : {&r.unsafe_plan, &r.safe_plan}) {
    ordered_json slots = ordered_json::array();
    for (const auto& s : plan->slots) slots.push_back(slot_to_json(s));
    j[plan->variant == PlanVariant::unsafe ? "unsafe_plan" : "safe_plan"] = std::move(slots);
  }
  j["provenance"] = {{"generator", r.provenance.generator},
                     {"created_at", r.provenance.created_at},
                     {"pipeline_version", r.provenance.pipeline_version}};
  return j;
}

inline ScenarioRecord scenario_from_json(const json& j) {
  try {
    ScenarioRecord r;
    r.scenario_id = j.at("scenario_id").get<std::string>();
    r.category_id = j.at("category_id").get<std::string>();
    r.subcategory_id = j.at("subcategory_id").get<std::string>();
    r.description = j.at("description").get<std::string>();
    const TimeWindow window = TimeWindow::parse(j.at("window").get<std::string>());
    r.unsafe_plan.window = r.safe_plan.window = window;
    r.unsafe_plan.variant = PlanVariant::unsafe;
    r.safe_plan.variant = PlanVariant::safe;
    for (const auto& s : j.at("unsafe_plan")) r.unsafe_plan.slots.push_back(slot_from_json(s));
    for (const auto& s : j.at("safe_plan")) r.safe_plan.slots.push_back(slot_from_json(s));
    if (j.contains("provenance")) {
      const auto& p = j.at("provenance");
      r.provenance = {p.value("generator", ""), p.value("created_at", ""), p.value("pipeline_version", "")};
    }
    return r;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ScenarioLoadError, e.what());
  } catch (const Error& e) {
    throw Error(ErrorCode::ScenarioLoadError, e.what());
  }
}

inline ScenarioRecord load_scenario(const std::filesystem::path& path) {
  return scenario_from_json(load_json(path, ErrorCode::ScenarioLoadError));
}

inline void save_scenario(const ScenarioRecord& r, const std::filesystem::path& path) {
  write_file(path, scenario_to_json(r).dump(2) + "\n");
}

}  // namespace agentsafe
