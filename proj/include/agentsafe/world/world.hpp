#pragma once

#include <algorithm>
#include <deque>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "agentsafe/core/events.hpp"

namespace agentsafe {

struct WorldObject {
  std::string id;
  std::string name;
  std::string zone_id;
};

struct Zone {
  std::string id;
  std::string name;
  std::string area_id;
  int capacity = 0;
  bool is_private = false;
  std::vector<std::string> objects;
};

struct Area {
  std::string id;
  std::string name;
  std::vector<std::string> zones;
};

/// world -> area -> zone -> object, plus symmetric zone adjacency.
class WorldGraph {
 public:
  std::string name = "world";

  static WorldGraph from_json(const json& j) {
    WorldGraph w;
    try {
      w.name = j.value("name", std::string("world"));
      for (const auto& aj : j.at("areas")) {
        Area area{aj.at("id"), aj.value("name", aj.at("id").get<std::string>()), {}};
        for (const auto& zj : aj.at("zones")) {
          Zone z;
          z.id = zj.at("id");
          z.name = zj.value("name", z.id);
          z.area_id = area.id;
          z.capacity = zj.value("capacity", 0);
          z.is_private = zj.value("private", false);
          for (const auto& oj : zj.value("objects", json::array())) {
            WorldObject o{oj.at("id"), oj.value("name", oj.at("id").get<std::string>()), z.id};
            if (w.objects_.contains(o.id)) throw Error(ErrorCode::ConfigError, "world: duplicate object " + o.id);
            z.objects.push_back(o.id);
            w.objects_.emplace(o.id, std::move(o));
          }
          if (w.zones_.contains(z.id)) throw Error(ErrorCode::ConfigError, "world: duplicate zone " + z.id);
          area.zones.push_back(z.id);
          w.zones_.emplace(z.id, std::move(z));
        }
        w.areas_.push_back(std::move(area));
      }
      for (const auto& pair : j.at("adjacency")) {
        const auto a = pair.at(0).get<std::string>();
        const auto b = pair.at(1).get<std::string>();
        if (!w.zones_.contains(a) || !w.zones_.contains(b))
          throw Error(ErrorCode::UnknownZone, "world: adjacency references unknown zone " + a + "/" + b);
        w.adjacency_[a].insert(b);
        w.adjacency_[b].insert(a);
      }
    } catch (const json::exception& e) {
      throw Error(ErrorCode::ConfigError, std::string("world: ") + e.what());
    }
    return w;
  }

  static WorldGraph load(const std::filesystem::path& path) { return from_json(load_json(path)); }

  bool has_zone(const std::string& id) const { return zones_.contains(id); }

  const Zone& zone(const std::string& id) const {
    const auto it = zones_.find(id);
    if (it == zones_.end()) throw Error(ErrorCode::UnknownZone, id);
    return it->second;
  }

  const WorldObject& object(const std::string& id) const { return objects_.at(id); }
  const std::map<std::string, Zone>& zones() const { return zones_; }
  const std::vector<Area>& areas() const { return areas_; }

  std::vector<std::string> neighbors(const std::string& zone_id) const {
    const auto it = adjacency_.find(zone_id);
    if (it == adjacency_.end()) return {};
    return {it->second.begin(), it->second.end()};
  }

  /// Shortest zone path including both endpoints (BFS, neighbors in id order).
  std::optional<std::vector<std::string>> shortest_path(const std::string& from, const std::string& to) const {
    if (!has_zone(from)) throw Error(ErrorCode::UnknownZone, from);
    if (!has_zone(to)) throw Error(ErrorCode::UnknownZone, to);
    std::map<std::string, std::string> parent;
    std::deque<std::string> queue{from};
    parent[from] = from;
    while (!queue.empty()) {
      const auto cur = queue.front();
      queue.pop_front();
      if (cur == to) break;
      for (const auto& n : neighbors(cur)) {
        if (parent.contains(n)) continue;
        parent[n] = cur;
        queue.push_back(n);
      }
    }
    if (!parent.contains(to)) return std::nullopt;
    std::vector<std::string> path{to};
    while (path.back() != from) path.push_back(parent.at(path.back()));
    std::reverse(path.begin(), path.end());
    return path;
  }

 private:
  std::vector<Area> areas_;
  std::map<std::string, Zone> zones_;
  std::map<std::string, WorldObject> objects_;
  std::map<std::string, std::set<std::string>> adjacency_;
};

struct AgentLocation {
  std::string agent_id;
  std::string zone_id;
  int entered_at_step = 0;
};

/// Exactly one location per registered agent.
class LocationTable {
 public:
  void place(const std::string& agent_id, const std::string& zone_id, int step) {
    locations_[agent_id] = AgentLocation{agent_id, zone_id, step};
  }

  const AgentLocation& at(const std::string& agent_id) const {
    const auto it = locations_.find(agent_id);
    if (it == locations_.end()) throw Error(ErrorCode::UnknownAgent, agent_id);
    return it->second;
  }

  bool contains(const std::string& agent_id) const { return locations_.contains(agent_id); }

  std::vector<std::string> agents_in(const std::string& zone_id) const {
    std::vector<std::string> out;
    for (const auto& [id, loc] : locations_)
      if (loc.zone_id == zone_id) out.push_back(id);
    return out;
  }

  const std::map<std::string, AgentLocation>& all() const { return locations_; }

 private:
  std::map<std::string, AgentLocation> locations_;
};

/// The part of the world an agent has seen, with first-seen steps. Grows only.
struct PartialSubgraph {
  std::string agent_id;
  std::map<std::string, int> zones;
  std::map<std::string, int> objects;

  void learn_zone(const std::string& zone_id, int step) { zones.emplace(zone_id, step); }
  void learn_object(const std::string& object_id, int step) { objects.emplace(object_id, step); }
  bool knows_zone(const std::string& zone_id) const { return zones.contains(zone_id); }
};

struct PerceptionReport {
  std::string agent_id;
  int step = 0;
  std::string zone_id;
  std::vector<std::string> objects;
  std::vector<std::string> agents;

  json to_json() const { return json{{"agent", agent_id}, {"zone", zone_id}, {"objects", objects}, {"agents", agents}}; }

  bool same_scene(const PerceptionReport& o) const {
    return zone_id == o.zone_id && objects == o.objects && agents == o.agents;
  }
};

/// Zone-local perception: the current zone, its objects and the other agents in it.
inline PerceptionReport perceive(const std::string& agent_id, const WorldGraph& world, const LocationTable& locations,
                                 PartialSubgraph* subgraph = nullptr, int step = 0, EventSink* sink = nullptr) {
  const AgentLocation& loc = locations.at(agent_id);
  const Zone& zone = world.zone(loc.zone_id);
  PerceptionReport report{agent_id, step, zone.id, zone.objects, {}};
  for (const auto& other : locations.agents_in(zone.id))
    if (other != agent_id) report.agents.push_back(other);
  if (subgraph) {
    subgraph->learn_zone(zone.id, step);
    for (const auto& o : zone.objects) subgraph->learn_object(o, step);
  }
  if (sink) sink->emit(step, "perceive", report.to_json());
  return report;
}

/// Moves along the shortest path in one step; only the destination is perceived.
inline AgentLocation move(const std::string& agent_id, const std::string& target_zone, const WorldGraph& world,
                          LocationTable& locations, int step = 0, EventSink* sink = nullptr) {
  if (!world.has_zone(target_zone)) throw Error(ErrorCode::UnknownZone, target_zone);
  const AgentLocation current = locations.at(agent_id);
  const auto path = world.shortest_path(current.zone_id, target_zone);
  if (!path) throw Error(ErrorCode::NoPath, current.zone_id + " -> " + target_zone);
  locations.place(agent_id, target_zone, step);
  if (sink) {
    sink->emit(step, "move",
               json{{"agent", agent_id}, {"from", current.zone_id}, {"to", target_zone},
                    {"hops", static_cast<int>(path->size()) - 1}});
  }
  return locations.at(agent_id);
}

}  // namespace agentsafe
