#pragma once

#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "agentsafe/core/clock.hpp"
#include "agentsafe/core/json_io.hpp"

namespace agentsafe {

struct SocialTie {
  std::string agent_id;
  std::string relation;
};

struct ZonePreference {
  std::string zone_id;
  int minutes = 30;
};

struct GoalTiming {
  std::string goal;
  ClockTime time;
};

struct VolatileTrait {
  std::string text;
  int expiry_step = 0;
};

/// L0 permanent descriptors, L1 stable learned descriptors (frozen within a run),
/// L2 volatile descriptors that lapse at their expiry step.
struct TraitLayers {
  std::vector<std::string> permanent;
  std::vector<std::string> learned;
  std::vector<VolatileTrait> volatile_traits;

  std::vector<std::string> active_volatile(int step) const {
    std::vector<std::string> out;
    for (const auto& t : volatile_traits)
      if (step < t.expiry_step) out.push_back(t.text);
    return out;
  }

  void expire(int step) {
    std::erase_if(volatile_traits, [&](const VolatileTrait& t) { return step >= t.expiry_step; });
  }

  void validate() const {
    std::set<std::string> seen;
    auto check = [&](const std::string& t) {
      if (!seen.insert(t).second) throw Error(ErrorCode::SpecParseError, "trait '" + t + "' appears in two layers");
    };
    for (const auto& t : permanent) check(t);
    for (const auto& t : learned) check(t);
    for (const auto& t : volatile_traits) check(t.text);
  }
};

struct Persona {
  std::string id;
  std::string name;
  int age = 0;
  std::string traits;
  std::string occupation;
  std::string household;
  std::vector<SocialTie> social_ties;
  ClockTime arrival_time;
  double energy_decay_rate = 0.0;
  double initial_social_energy = 10.0;
  std::vector<ZonePreference> zone_preferences;
  std::vector<GoalTiming> goal_timings;
  std::string starting_zone;
  std::vector<std::string> known_zones;
  TraitLayers layers;

  static Persona from_json(const json& j) {
    Persona p;
    auto required = [&](const char* key) -> const json& {
      if (!j.contains(key)) throw Error(ErrorCode::SpecParseError, std::string("persona missing '") + key + "'");
      return j.at(key);
    };
    try {
      p.id = required("id").get<std::string>();
      p.name = required("name").get<std::string>();
      p.age = required("age").get<int>();
      p.traits = required("traits").get<std::string>();
      p.occupation = required("occupation").get<std::string>();
      p.household = required("household").get<std::string>();
      for (const auto& t : required("social_ties")) p.social_ties.push_back({t.at("agent"), t.at("relation")});
      p.arrival_time = ClockTime::parse(required("arrival_time").get<std::string>());
      p.energy_decay_rate = required("energy_decay_rate").get<double>();
      p.initial_social_energy = j.value("initial_social_energy", p.initial_social_energy);
      for (const auto& z : required("zone_preferences")) p.zone_preferences.push_back({z.at("zone"), z.at("minutes")});
      for (const auto& g : required("goal_timings"))
        p.goal_timings.push_back({g.at("goal"), ClockTime::parse(g.at("time").get<std::string>())});
      p.starting_zone = required("starting_zone").get<std::string>();
      p.known_zones = j.value("known_zones", std::vector<std::string>{});
      const json& layers = required("trait_layers");
      p.layers.permanent = layers.value("L0", std::vector<std::string>{});
      p.layers.learned = layers.value("L1", std::vector<std::string>{});
      for (const auto& v : layers.value("L2", json::array()))
        p.layers.volatile_traits.push_back({v.at("text"), v.at("expires_step")});
    } catch (const json::exception& e) {
      throw Error(ErrorCode::SpecParseError, "persona " + p.id + ": " + e.what());
    } catch (const Error& e) {
      if (e.code() == ErrorCode::SpecParseError) throw;
      throw Error(ErrorCode::SpecParseError, "persona " + p.id + ": " + e.what());
    }
    if (p.age <= 0) throw Error(ErrorCode::SpecParseError, "persona " + p.id + ": age must be positive");
    if (p.energy_decay_rate < 0) throw Error(ErrorCode::SpecParseError, "persona " + p.id + ": negative decay rate");
    for (const auto& z : p.zone_preferences)
      if (z.minutes <= 0) throw Error(ErrorCode::SpecParseError, "persona " + p.id + ": zone minutes must be positive");
    p.layers.validate();
    return p;
  }

  static Persona load(const std::filesystem::path& path) {
    return from_json(load_json(path, ErrorCode::SpecParseError));
  }

  /// Facts seeded into long-term memory, one entry each.
  std::vector<std::string> facts() const {
    std::vector<std::string> out;
    out.push_back("I am " + name + ", " + std::to_string(age) + " years old.");
    out.push_back("My personality: " + traits + ".");
    out.push_back("I work as " + occupation + ".");
    out.push_back("I live " + household + ".");
    out.push_back("I prefer to arrive at " + arrival_time.str() + ".");
    for (const auto& t : social_ties) out.push_back(t.agent_id + " is my " + t.relation + ".");
    for (const auto& t : layers.permanent) out.push_back("I am " + t + ".");
    for (const auto& t : layers.learned) out.push_back("I have learned that I " + t + ".");
    return out;
  }
};

}  // namespace agentsafe
