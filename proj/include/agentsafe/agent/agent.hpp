#pragma once

#include <algorithm>
#include <optional>
#include <regex>
#include <string>
#include <vector>

#include "agentsafe/agent/memory.hpp"
#include "agentsafe/agent/persona.hpp"
#include "agentsafe/core/events.hpp"
#include "agentsafe/core/text.hpp"
#include "agentsafe/world/world.hpp"

namespace agentsafe {

inline constexpr double kImportanceFallback = 3.0;

struct ScratchState {
  std::string current_goal;
  std::string current_activity;
  double social_energy = 0.0;
  std::optional<std::string> conversation_partner;
  std::optional<ClockTime> pending_slot;
  std::vector<std::int64_t> retrieved;
};

struct AgentState {
  Persona persona;
  TraitLayers traits;
  MemoryStream memory;
  ScratchState scratch;
  PartialSubgraph map;
  // Zone schedule bookkeeping for the act phase.
  int schedule_index = -1;  // -1 until the agent has arrived
  int zone_entered_step = 0;
  std::optional<PerceptionReport> last_perception;

  const std::string& id() const { return persona.id; }
};

/// Gateway plus the memoizing embedder that sits in front of it.
struct ModelContext {
  Gateway& gateway;
  Embedder& embedder;
};

inline std::string importance_prompt(const std::string& text) {
  return "TASK: IMPORTANCE\nMEMORY: " + text +
         "\nOn a scale of 0 (mundane) to 10 (extremely poignant or dangerous), rate the importance of this memory. "
         "Reply with a single number.";
}

/// 0-10 rating from the model; falls back to 3.0 (and a diagnostic event) when
/// the reply carries no number.
inline double score_importance(const std::string& entry_text, Gateway& gateway, const std::string& agent_id = {},
                               int step = 0, EventSink* sink = nullptr) {
  if (entry_text.empty()) throw Error(ErrorCode::InvalidRequest, "cannot score empty memory text");
  ModelRequest req = ModelRequest::chat(RoleTag::reflection, importance_prompt(entry_text));
  if (!agent_id.empty()) req.by(agent_id);
  req.at(step);
  std::string reply;
  try {
    reply = gateway.chat(req);
  } catch (const Error& e) {
    if (sink) sink->emit(step, "diagnostic", json{{"agent", agent_id}, {"what", "importance-call-failed"}, {"detail", e.what()}});
    return kImportanceFallback;
  }
  static const std::regex kNumber(R"((-?\d+(?:\.\d+)?))");
  std::smatch m;
  if (!std::regex_search(reply, m, kNumber)) {
    if (sink) sink->emit(step, "diagnostic", json{{"agent", agent_id}, {"what", "importance-unparseable"}, {"reply", reply}});
    return kImportanceFallback;
  }
  return std::clamp(std::stod(m[1].str()), 0.0, 10.0);
}

inline const MemoryEntry& add_memory(AgentState& agent, MemoryKind kind, const std::string& text,
                                     const std::string& source, int step, ModelContext& models,
                                     EventSink* sink = nullptr) {
  if (text.empty()) throw Error(ErrorCode::InvalidRequest, "memory text must not be empty");
  const double importance = score_importance(text, models.gateway, agent.id(), step, sink);
  auto embedded = models.embedder.embed(text, agent.id(), step);
  return agent.memory.append(kind, text, step, importance, source, std::move(embedded.ref), std::move(embedded.vector));
}

/// Reflection entries are ordinary memories of kind=reflection; they are logged
/// so the run log can tie them to the revision that produced them.
inline const MemoryEntry& add_reflection(AgentState& agent, const std::string& text, const std::string& source,
                                         int step, ModelContext& models, EventSink* sink = nullptr) {
  const MemoryEntry& e = add_memory(agent, MemoryKind::reflection, text, source, step, models, sink);
  if (sink) {
    sink->emit(step, "reflection",
               json{{"agent", agent.id()}, {"entry_id", e.id}, {"text", e.text}, {"source", e.source},
                    {"importance", e.importance}});
  }
  return e;
}

inline std::vector<ScoredMemory> retrieve(const AgentState& agent, const std::string& query_text, std::size_t k,
                                          const RetrievalWeights& weights, int now, ModelContext& models) {
  if (agent.memory.empty()) {
    if (k < 1) throw Error(ErrorCode::InvalidRequest, "retrieve needs k >= 1");
    return {};
  }
  const auto query = models.embedder.embed(query_text, agent.id(), now);
  return agent.memory.retrieve(query.vector, now, k, weights);
}

/// Persona + trait block included in every prompt an agent issues. Lapsed L2
/// descriptors never appear.
inline std::string persona_block(const AgentState& agent, int step) {
  std::string out = "AGENT: " + agent.id() + " (" + agent.persona.name + ", " + std::to_string(agent.persona.age) + ")\n";
  out += "TRAITS L0: " + text::join(agent.traits.permanent, "; ") + "\n";
  out += "TRAITS L1: " + text::join(agent.traits.learned, "; ") + "\n";
  out += "TRAITS L2: " + text::join(agent.traits.active_volatile(step), "; ") + "\n";
  return out;
}

inline std::string memory_block(const AgentState& agent, const std::vector<std::int64_t>& ids) {
  std::string out = "MEMORIES:\n";
  for (auto id : ids) out += "- " + agent.memory.entries().at(static_cast<std::size_t>(id)).text + "\n";
  return out;
}

inline std::vector<std::int64_t> ids_of(const std::vector<ScoredMemory>& scored) {
  std::vector<std::int64_t> ids;
  for (const auto& s : scored) ids.push_back(s.entry->id);
  return ids;
}

/// Builds the agent from its persona: seeded memories, partial map, scratch.
inline AgentState init_agent(const Persona& persona, const WorldGraph& world, const TimeWindow& window,
                             ModelContext& models, EventSink* sink = nullptr) {
  if (!world.has_zone(persona.starting_zone))
    throw Error(ErrorCode::UnknownZone, "persona " + persona.id + " starts in unknown zone " + persona.starting_zone);
  for (const auto& z : persona.known_zones)
    if (!world.has_zone(z)) throw Error(ErrorCode::UnknownZone, "persona " + persona.id + " knows unknown zone " + z);
  for (const auto& z : persona.zone_preferences)
    if (!world.has_zone(z.zone_id)) throw Error(ErrorCode::UnknownZone, "persona " + persona.id + " prefers unknown zone " + z.zone_id);
  if (!window.contains(persona.arrival_time))
    throw Error(ErrorCode::SpecParseError, "persona " + persona.id + " arrives outside the scenario window");

  AgentState agent;
  agent.persona = persona;
  agent.traits = persona.layers;
  agent.map.agent_id = persona.id;
  agent.map.learn_zone(persona.starting_zone, 0);
  for (const auto& z : persona.known_zones) agent.map.learn_zone(z, 0);
  agent.scratch.social_energy = persona.initial_social_energy;
  for (const auto& fact : persona.facts()) add_memory(agent, MemoryKind::observation, fact, "self", 0, models, sink);
  return agent;
}

inline std::string current_goal(const Persona& persona, const TimeWindow& window, ClockTime now) {
  std::string goal;
  int best = -1;
  const int now_off = window.offset_of(now);
  for (const auto& g : persona.goal_timings) {
    const int off = window.offset_of(g.time);
    if (off >= 0 && off <= now_off && off >= best) {
      best = off;
      goal = g.goal;
    }
  }
  return goal;
}

/// One step of social-energy bookkeeping; never negative.
inline double update_energy(double energy, double decay_rate, bool alone, double recovery) {
  return std::max(0.0, energy - decay_rate + (alone ? recovery : 0.0));
}

}  // namespace agentsafe
